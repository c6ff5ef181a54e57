use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eotheta::dieudonne::{random_invertible, standard_module};
use eotheta::matrix::{adjugate, determinant, determinant_by_elimination, kernel, rank};
use eotheta::theta::operator::function_section;
use eotheta::theta::section::basis;
use eotheta::theta::{hasse_as_section, leibniz_check, theta, FormalModel, Section, TruncatedRing};
use eotheta::weyl::{check_dominant, delta_shift, from_lambda, lambda_coords};
use eotheta::{Field, Frobenius, Gf, GfElem, Matrix, Ring, SemilinearMap};

const FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)];

fn field_strategy() -> impl Strategy<Value = Gf> {
    (0..FIELDS.len()).prop_map(|i| Gf::new(FIELDS[i].0, FIELDS[i].1).unwrap())
}

fn matrix_of(f: &Gf, n: usize, m: usize, codes: &[u32]) -> Matrix<GfElem> {
    let q = f.order() as u32;
    Matrix::from_fn(n, m, |i, j| f.from_code(codes[i * m + j] % q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjugate_is_division_free_inverse(f in field_strategy(), n in 1usize..6, codes in prop::collection::vec(any::<u32>(), 36)) {
        let m = matrix_of(&f, n, n, &codes);
        let det = determinant(&m, &f);
        let d_i = Matrix::identity(n, &f).scale(&det, &f);
        let adj = adjugate(&m, &f);
        prop_assert_eq!(m.mul(&adj, &f), d_i.clone());
        prop_assert_eq!(adj.mul(&m, &f), d_i);
        prop_assert_eq!(det, determinant_by_elimination(&m, &f));
    }

    #[test]
    fn rank_nullity(f in field_strategy(), n in 1usize..6, m in 1usize..6, codes in prop::collection::vec(any::<u32>(), 36)) {
        let a = matrix_of(&f, n, m, &codes);
        prop_assert_eq!(rank(&a, &f) + kernel(&a, &f).len(), m);
    }

    #[test]
    fn frobenius_is_a_field_automorphism(f in field_strategy(), a in any::<u32>(), b in any::<u32>()) {
        let q = f.order() as u32;
        let (x, y) = (f.from_code(a % q).unwrap(), f.from_code(b % q).unwrap());
        prop_assert_eq!(f.frobenius(&f.mul(&x, &y), 1), f.mul(&f.frobenius(&x, 1), &f.frobenius(&y, 1)));
        prop_assert_eq!(f.frobenius(&f.add(&x, &y), 1), f.add(&f.frobenius(&x, 1), &f.frobenius(&y, 1)));
        prop_assert_eq!(f.frobenius(&x, f.degree() as i64), x);
        prop_assert_eq!(f.frobenius(&f.frobenius(&x, 1), -1), x);
        if let Some(xi) = f.inv(&x) {
            prop_assert_eq!(f.mul(&x, &xi), f.one());
        }
    }

    #[test]
    fn semilinear_composition_is_associative(
        f in field_strategy(),
        n in 1usize..4,
        twists in prop::array::uniform3(-2i64..3),
        codes in prop::collection::vec(any::<u32>(), 27),
        v in prop::collection::vec(any::<u32>(), 3),
    ) {
        let maps: Vec<SemilinearMap> = (0..3)
            .map(|i| SemilinearMap::new(f.clone(), twists[i], matrix_of(&f, n, n, &codes[9 * i..])))
            .collect();
        let left = maps[0].compose(&maps[1]).unwrap().compose(&maps[2]).unwrap();
        let right = maps[0].compose(&maps[1].compose(&maps[2]).unwrap()).unwrap();
        prop_assert_eq!(&left.matrix, &right.matrix);
        prop_assert_eq!(left.twist, right.twist);
        let q = f.order() as u32;
        let x: Vec<GfElem> = v[..n].iter().map(|&c| f.from_code(c % q).unwrap()).collect();
        let stepwise = maps[0].apply(&maps[1].apply(&maps[2].apply(&x)));
        prop_assert_eq!(left.apply(&x), stepwise);
        // Semilinear rank equals the F_p-rank of the linearization divided by k.
        prop_assert_eq!(left.rank() + left.kernel().dim(), n);
    }

    #[test]
    fn lambda_coordinates_round_trip(k in prop::collection::vec(-6i64..7, 1..7)) {
        let mut k = k;
        k.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert!(check_dominant(&k).is_ok());
        let lam = lambda_coords(&k).unwrap();
        prop_assert!(lam[..lam.len() - 1].iter().all(|&x| x >= 0));
        prop_assert_eq!(from_lambda(&lam), k);
    }

    #[test]
    fn non_dominant_weights_are_rejected(a in -5i64..5, b in 1i64..5) {
        prop_assert!(check_dominant(&[a, a + b]).is_err());
    }

    #[test]
    fn delta_shift_preserves_dominance(n in 2usize..9, r in 1usize..8, pi in 0usize..4, k in prop::collection::vec(0i64..5, 8)) {
        prop_assume!(r < n);
        let p = [2u64, 3, 5, 7][pi];
        let mut k: Vec<i64> = k[..n - 1].to_vec();
        k.sort_unstable_by(|a, b| b.cmp(a));
        let d = delta_shift(r, p, n).unwrap();
        let shifted: Vec<i64> = k.iter().zip(&d).map(|(a, b)| a + b).collect();
        prop_assert!(check_dominant(&shifted).is_ok());
    }

    #[test]
    fn classification_is_conjugation_invariant(n in 2usize..5, r in 1usize..5, fi in 0usize..5, seed in any::<u64>()) {
        prop_assume!(r <= n);
        let f = Gf::new(FIELDS[fi].0, FIELDS[fi].1).unwrap();
        let d = standard_module(n, r, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = d.random_conjugate(&mut rng);
        prop_assert!(c.verify_bt1().passed());
        prop_assert_eq!(c.eo_class().unwrap().r, r);
        let flag = c.canonical_filtration().unwrap();
        prop_assert!(flag.steps.len() <= 2 * 2 * n + 1);
        prop_assert_eq!(flag.dims(), d.canonical_filtration().unwrap().dims());
        prop_assert_eq!(c.delta_torsion_ranks(), (1, n - 1));
    }

    #[test]
    fn truncated_ring_differential(p_idx in 0usize..3, seed in any::<u64>()) {
        let p = [2u64, 3, 5][p_idx];
        let ring = TruncatedRing::new(p, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (ring.random(&mut rng, 4), ring.random(&mut rng, 4));
        let dfg = ring.differential(&ring.mul(&f, &g));
        let (df, dg) = (ring.differential(&f), ring.differential(&g));
        for j in 0..3 {
            let rhs = ring.add(&ring.mul(&df[j], &g), &ring.mul(&f, &dg[j]));
            prop_assert!(ring.eq_below(&dfg[j], &rhs, 4));
        }
        prop_assert!(ring.differential(&ring.frobenius(&f, 1)).iter().all(|x| ring.is_zero(x)));
    }
}

fn random_section(model: &FormalModel, k: &[i64], w: i64, rng: &mut ChaCha8Rng) -> Section {
    use rand::Rng;
    let ring = model.ring();
    let b = basis(k, model.n() - 1).unwrap();
    let mut s = Section::zero(k.to_vec(), w);
    for m in b.iter().take(4) {
        s.add_term(m.clone(), &ring.random(rng, 2), ring);
    }
    if rng.gen_bool(0.5) {
        s = s.scale(&ring.random_with_constant(rng, 1, 1), ring);
    }
    s.prune(ring);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theta_is_additive_and_leibniz(n in 2usize..5, r in 1usize..4, pi in 0usize..3, seed in any::<u64>()) {
        prop_assume!(r < n);
        let p = [2u64, 3, 5][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = FormalModel::stratum_any(n, r, p, 3).unwrap();
        let model = base.gauge(&base.random_gauge(&mut rng, 2)).unwrap();
        let ring = model.ring();
        let mut k = vec![0; n - 1];
        k[0] = 2;
        let (f, g) = (random_section(&model, &k, 1, &mut rng), random_section(&model, &k, 1, &mut rng));
        let lhs = theta(&model, &f.add(&g, ring).unwrap()).unwrap();
        let rhs = theta(&model, &f).unwrap().add(&theta(&model, &g).unwrap(), ring).unwrap();
        prop_assert!(lhs.eq_below(&rhs, 3, ring));

        // Output weight is (k + Delta_r, w - 1).
        let d = delta_shift(r, p, n).unwrap();
        let t = theta(&model, &f).unwrap();
        prop_assert_eq!(t.k, k.iter().zip(&d).map(|(a, b)| a + b).collect::<Vec<_>>());
        prop_assert_eq!(t.w, 0);

        let h = random_section(&model, &vec![1; n - 1], -2, &mut rng);
        prop_assert!(leibniz_check(&model, &f, &h).unwrap());
        prop_assert!(leibniz_check(&model, &f, &f).unwrap());

        // theta(f^2) = 2 f theta(f)
        let sq = theta(&model, &f.mul(&f, ring).unwrap()).unwrap();
        let two_f = f.scale(&ring.constant(2), ring);
        prop_assert!(sq.eq_below(&two_f.mul(&theta(&model, &f).unwrap(), ring).unwrap(), 3, ring));

        // A_r is killed; A_r times a function is not, unless the function is constant.
        let a = hasse_as_section(&model).unwrap();
        let ta = theta(&model, &a).unwrap();
        prop_assert!(ta.eq_below(&Section::zero(ta.k.clone(), ta.w), 3, ring));
        let c = function_section(&model, ring.constant(p - 1), 0);
        prop_assert!(theta(&model, &c).unwrap().is_zero(ring));
    }

    #[test]
    fn gauge_transport_of_invertible_matrices(n in 2usize..5, seed in any::<u64>()) {
        let f = Gf::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_invertible(n, &f, &mut rng);
        prop_assert!(!f.is_zero(&determinant(&g, &f)));
    }
}

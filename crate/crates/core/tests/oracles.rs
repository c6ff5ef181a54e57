//! Documented examples checked against independent computations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eotheta::dieudonne::{brute_force_isomorphic, standard_module, DieudonneModule};
use eotheta::matrix::adjugate;
use eotheta::weyl::{
    closure_chain, compare_dims, delta_shift, hasse_weight, lambda_coords, s_construction_dim, weight_sub,
    weyl_product_dim, Shuffle,
};
use eotheta::{Frobenius, Gf, Integers, Matrix, Ring, SemilinearMap};

#[test]
fn frobenius_on_f9_generator_is_cube() {
    let f = Gf::new(3, 2).unwrap();
    let g = f.generator();
    let cube = f.mul(&f.mul(&g, &g), &g);
    assert_eq!(f.frobenius(&g, 1), cube);
    for x in f.elements() {
        assert_eq!(f.frobenius(&x, 2), x);
    }
    let f5 = Gf::prime(5).unwrap();
    for x in f5.elements() {
        assert_eq!(f5.frobenius(&x, 1), x);
    }
}

#[test]
fn twisted_square_is_a_times_frobenius_of_a() {
    let f = Gf::new(2, 2).unwrap();
    let g = f.generator();
    let a = Matrix::from_rows(vec![vec![g, f.one()], vec![f.zero(), f.mul(&g, &g)]]);
    let phi = SemilinearMap::new(f.clone(), 1, a.clone());
    let sq = phi.compose(&phi).unwrap();
    assert_eq!(sq.twist, 2);
    assert_eq!(sq.matrix, a.mul(&a.frobenius(1, &f), &f));
    let id = SemilinearMap::identity(&f, 2);
    assert_eq!(id.compose(&phi).unwrap().matrix, a);
}

#[test]
fn linearized_field_frobenius_on_f4() {
    let f = Gf::new(2, 2).unwrap();
    let phi = SemilinearMap::new(f.clone(), 1, Matrix::identity(1, &f));
    let lin = phi.linearize();
    assert_eq!((lin.rows(), lin.cols()), (2, 2));
    assert_eq!(phi.prime_rank(), 2);
    // On the basis {1, g}: 1 -> 1 and g -> g^2 = g + 1.
    let g = f.generator();
    assert_eq!(f.frobenius(&g, 1), f.add(&g, &f.one()));
    let zero = SemilinearMap::new(f.clone(), 1, Matrix::zeros(2, 2, &f));
    assert_eq!(zero.rank(), 0);
}

#[test]
fn classical_two_by_two_adjugate() {
    let z = Integers::<i64>::new();
    let m = Matrix::from_rows(vec![vec![3, 5], vec![-2, 7]]);
    assert_eq!(adjugate(&m, &z), Matrix::from_rows(vec![vec![7, -5], vec![2, 3]]));
    assert_eq!(adjugate(&Matrix::from_rows(vec![vec![9i64]]), &z), Matrix::from_rows(vec![vec![1]]));
}

#[test]
fn standard_modules_are_bt1_and_classify() {
    let f3 = Gf::prime(3).unwrap();
    assert!(standard_module(4, 2, &f3).unwrap().verify_bt1().passed());
    let d = standard_module(5, 2, &f3).unwrap();
    let c = d.eo_class().unwrap();
    assert_eq!((c.r, c.length), (2, 3));
    for n in 2..=6 {
        let d = standard_module(n, 1, &f3).unwrap();
        assert_eq!(d.eo_class().unwrap().p_rank.sigmabar, n - 1);
        assert_eq!(d.eo_class().unwrap().r, 1);
    }
}

#[test]
fn zero_module_fails_bt1() {
    let f = Gf::prime(2).unwrap();
    let base = standard_module(2, 1, &f).unwrap();
    let zero = SemilinearMap::new(f.clone(), 1, Matrix::zeros(4, 4, &f));
    let d = DieudonneModule { f: zero.clone(), v: zero, ..base };
    assert!(!d.verify_bt1().passed());
}

#[test]
fn sigmabar_p_rank_survives_conjugation() {
    let f = Gf::new(2, 2).unwrap();
    let d = standard_module(3, 2, &f).unwrap();
    let before = d.p_rank().unwrap().sigmabar;
    assert_eq!(before, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (c, _) = d.random_conjugate(&mut rng);
        assert_eq!(c.p_rank().unwrap().sigmabar, before);
    }
}

#[test]
fn conjugates_of_standard_4_3_classify_as_3() {
    let f = Gf::prime(5).unwrap();
    let d = standard_module(4, 3, &f).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..50 {
        assert_eq!(d.random_conjugate(&mut rng).0.eo_class().unwrap().r, 3);
    }
}

#[test]
fn n3_standard_modules_are_pairwise_distinct_over_f2() {
    let f = Gf::prime(2).unwrap();
    let mods: Vec<_> = (1..=3).map(|r| standard_module(3, r, &f).unwrap()).collect();
    assert!(!brute_force_isomorphic(&mods[0], &mods[1]).unwrap());
    assert!(!brute_force_isomorphic(&mods[1], &mods[2]).unwrap());
    assert!(!brute_force_isomorphic(&mods[0], &mods[2]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (c, _) = mods[1].random_conjugate(&mut rng);
    assert!(brute_force_isomorphic(&mods[1], &c).unwrap());
}

#[test]
fn delta_torsion_ranks_on_standard_modules() {
    let f = Gf::prime(3).unwrap();
    for n in 2..=6 {
        for r in 1..=n {
            assert_eq!(standard_module(n, r, &f).unwrap().delta_torsion_ranks(), (1, n - 1));
        }
    }
}

#[test]
fn shuffles_for_n3() {
    let w: Vec<Vec<usize>> = (1..=3).map(|r| Shuffle::w(3, r).unwrap().one_line().to_vec()).collect();
    assert_eq!(w, vec![vec![3, 1, 2], vec![1, 3, 2], vec![1, 2, 3]]);
    for n in 2..=8 {
        for r in 1..=n {
            let s = Shuffle::w(n, r).unwrap();
            assert_eq!(s.length(), n - r);
            assert_eq!(s.length(), s.inversions());
        }
        assert!(Shuffle::w(n, n).unwrap().is_identity());
        // Closure of the ordinary stratum contains every stratum.
        assert_eq!(closure_chain(n, 1).unwrap().len(), n);
    }
}

#[test]
fn weight_shift_examples() {
    assert_eq!(delta_shift(1, 5, 4).unwrap(), vec![6, 5, 5]);
    assert_eq!(delta_shift(3, 5, 4).unwrap(), vec![6, 1, 1]);
    assert_eq!(lambda_coords(&delta_shift(2, 5, 4).unwrap()).unwrap(), vec![1, 4, 1]);
    assert_eq!(lambda_coords(&[6, 5, 5]).unwrap(), vec![1, 0, 5]);
    assert_eq!(lambda_coords(&[0, 0, 0]).unwrap(), vec![0, 0, 0]);
    assert_eq!(delta_shift(1, 7, 5).unwrap(), vec![8, 7, 7, 7]);
    assert_eq!(hasse_weight(1, 3, 4).unwrap(), vec![2, 2, 2]);
    assert_eq!(hasse_weight(3, 3, 4).unwrap(), vec![2, 0, 0]);
}

#[test]
fn kodaira_spencer_contribution() {
    // Independent of p: the shift minus the Hasse weight is (1,0,...,0,1) in
    // lambda coordinates whenever r < n - 1.
    for n in 3..=8 {
        for r in 1..n - 1 {
            for p in [2, 3, 5, 7] {
                let diff = weight_sub(&delta_shift(r, p, n).unwrap(), &hasse_weight(r, p, n).unwrap());
                let mut expected = vec![0; n - 1];
                expected[0] = 1;
                expected[n - 2] = 1;
                assert_eq!(lambda_coords(&diff).unwrap(), expected, "n={n} r={r} p={p}");
            }
        }
    }
}

#[test]
fn dimension_examples() {
    for d in 0..6 {
        assert_eq!(s_construction_dim(&[d, 0], 2).unwrap(), d as u128 + 1);
        assert_eq!(weyl_product_dim(&[d, 0], 2).unwrap(), d as u128 + 1);
    }
    assert_eq!(s_construction_dim(&[1, 1, 0], 3).unwrap(), 3);
    assert_eq!(weyl_product_dim(&[1, 1, 0], 3).unwrap(), 3);
    let c = compare_dims(&[2, 1, 0], 3).unwrap();
    assert_eq!((c.s_construction, c.weyl_product, c.mismatch), (9, 8, true));
}

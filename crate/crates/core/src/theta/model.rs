//! Formal neighbourhoods of a point on an EO stratum: the `sigma`-component of
//! de Rham cohomology as a free module over a truncated polynomial ring, with
//! Verschiebung and a connection matrix.
//!
//! Basis conventions (0-based indices): `e_0 .. e_{r-2}` span `omega_0`,
//! `e_{r-1} .. e_{n-2}` span the multiplicative part `omega_mu`, and `e_{n-1}`
//! spans `H / omega`. Verschiebung is stored as the matrix `M` with
//! `V(e_j) = sum_i M_ij e_i^(p)`, and the connection as `Gamma[l]`, the
//! `dt_l`-coefficient of `nabla(e_j) = sum_i e_i (x) Gamma_ij`.

use std::ops::Range;

use rand::Rng;

use crate::dieudonne::standard_module;
use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::matrix::{adjugate, determinant, Matrix};
use crate::ring::Ring;

use super::truncated::{TPoly, TruncatedRing};

pub const DEFAULT_TRUNCATION: usize = 3;

#[derive(Clone, Debug)]
pub struct FormalModel {
    ring: TruncatedRing,
    n: usize,
    r: usize,
    v: Matrix<TPoly>,
    gamma: Vec<Matrix<TPoly>>,
}

/// Inverse of a matrix whose determinant is a unit, by the adjugate.
pub fn invert(m: &Matrix<TPoly>, ring: &TruncatedRing) -> Result<Matrix<TPoly>> {
    let d = determinant(m, ring);
    let di = ring.inverse(&d)?;
    Ok(adjugate(m, ring).scale(&di, ring))
}

/// `Gamma_ij` as a list of its `dt` coefficients.
pub type OneForm = Vec<TPoly>;

impl FormalModel {
    pub fn new(ring: TruncatedRing, n: usize, r: usize, v: Matrix<TPoly>, gamma: Vec<Matrix<TPoly>>) -> Result<Self> {
        if n < 2 || r < 1 || r >= n {
            return Err(Error::OutOfRange(format!("formal model needs n >= 2 and 1 <= r <= n-1; got n={n}, r={r}")));
        }
        let d = n - r;
        if ring.nvars() != d {
            return Err(Error::MalformedModel(format!("{} variables, expected {d}", ring.nvars())));
        }
        if v.rows() != n || v.cols() != n || gamma.len() != d || gamma.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::MalformedModel("matrix shapes do not match the rank".into()));
        }
        let model = FormalModel { ring, n, r, v, gamma };
        let o0 = model.omega0();
        let last = n - 1;
        for i in 0..n {
            for j in 0..n {
                let v_ij = model.v.get(i, j);
                if i == last && !model.ring.is_zero(v_ij) {
                    return Err(Error::MalformedModel("V must land in omega^(p)".into()));
                }
                if o0.contains(&j) && !o0.contains(&i) && !model.ring.is_zero(v_ij) {
                    return Err(Error::MalformedModel("V must preserve omega_0".into()));
                }
                for g in &model.gamma {
                    if o0.contains(&j) && !o0.contains(&i) && !model.ring.is_zero(g.get(i, j)) {
                        return Err(Error::MalformedModel("the connection must preserve omega_0".into()));
                    }
                }
            }
        }
        if !model.ring.is_unit(&determinant(&model.ks_matrix(), &model.ring)) {
            return Err(Error::MalformedModel("Kodaira-Spencer map is not invertible".into()));
        }
        Ok(model)
    }

    /// Ordinary locus: `V(e_i) = e_i^(p)` on `omega`, `V(e_n) = 0`,
    /// `nabla(e_i) = e_n (x) dt_i`.
    pub fn igusa(n: usize, p: u64, cutoff: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("n = {n} < 2")));
        }
        Self::stratum_any(n, 1, p, cutoff)
    }

    /// Formal neighbourhood of a point of the stratum `w_r`, `2 <= r <= n-1`.
    pub fn stratum(n: usize, r: usize, p: u64, cutoff: usize) -> Result<Self> {
        if r < 2 || r + 1 > n {
            return Err(Error::OutOfRange(format!("stratum model needs 2 <= r <= n-1; got n={n}, r={r}")));
        }
        Self::stratum_any(n, r, p, cutoff)
    }

    /// [`Self::igusa`] for `r = 1`, [`Self::stratum`] otherwise.
    pub fn stratum_any(n: usize, r: usize, p: u64, cutoff: usize) -> Result<Self> {
        if n < 2 || r < 1 || r >= n {
            return Err(Error::OutOfRange(format!("need n >= 2 and 1 <= r <= n-1; got n={n}, r={r}")));
        }
        let d = n - r;
        let ring = TruncatedRing::new(p, d, cutoff)?;
        let mut v = Matrix::zeros(n, n, &ring);
        // V kills e_0 and shifts the rest of omega_0 down by one; the top of
        // omega_0 is hit from e_{n-1}.
        for i in 1..r.saturating_sub(1) {
            v.set(i - 1, i, ring.one());
        }
        for i in r - 1..n - 1 {
            v.set(i, i, ring.one());
        }
        if r >= 2 {
            v.set(r - 2, n - 1, ring.one());
        }
        let gamma = (0..d)
            .map(|l| {
                let mut g = Matrix::zeros(n, n, &ring);
                g.set(n - 1, r - 1 + l, ring.one());
                g
            })
            .collect();
        Self::new(ring, n, r, v, gamma)
    }

    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    /// Number of formal variables, `n - r`.
    pub fn d(&self) -> usize {
        self.n - self.r
    }

    pub fn v(&self) -> &Matrix<TPoly> {
        &self.v
    }

    pub fn gamma(&self) -> &[Matrix<TPoly>] {
        &self.gamma
    }

    pub fn omega0(&self) -> Range<usize> {
        0..self.r - 1
    }

    pub fn mu(&self) -> Range<usize> {
        self.r - 1..self.n - 1
    }

    pub fn last(&self) -> usize {
        self.n - 1
    }

    pub fn connection_form(&self, i: usize, j: usize) -> OneForm {
        self.gamma.iter().map(|g| g.get(i, j).clone()).collect()
    }

    /// Sets `nabla(e_n) = e_n (x) eta`. Compatibility with `V` forces the
    /// `omega`-components of `nabla(e_n)` to vanish, so this is the only
    /// freedom left in it.
    pub fn with_last_connection(&self, eta: &[TPoly]) -> Result<Self> {
        if eta.len() != self.d() {
            return Err(Error::MalformedModel(format!("{} coefficients for {} variables", eta.len(), self.d())));
        }
        let mut out = self.clone();
        let last = self.last();
        for (g, e) in out.gamma.iter_mut().zip(eta) {
            g.set(last, last, e.clone());
        }
        Ok(out)
    }

    /// Replaces `V` on `omega_mu` by `diag(f) * V`, scaling row `i` of the
    /// `mu`-block by `f[i]`.
    pub fn scale_mu_rows(&self, f: &[TPoly]) -> Result<Self> {
        if f.len() != self.d() {
            return Err(Error::MalformedModel(format!("{} scalars for a block of size {}", f.len(), self.d())));
        }
        let mut out = self.clone();
        for (a, i) in self.mu().enumerate() {
            for j in 0..self.n {
                out.v.set(i, j, self.ring.mul(&f[a], self.v.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Adds `c` to one entry of `V` (used to break compatibility on purpose).
    pub fn perturb_v(&self, i: usize, j: usize, c: &TPoly) -> Result<Self> {
        let mut v = self.v.clone();
        v.set(i, j, self.ring.add(self.v.get(i, j), c));
        Self::new(self.ring.clone(), self.n, self.r, v, self.gamma.clone())
    }

    /// Change of basis `e' = e g`: `Gamma' = g^-1 Gamma g + g^-1 dg` and
    /// `M' = sigma(g)^-1 M g`. `g` must preserve `omega_0` and `omega`.
    pub fn gauge(&self, g: &Matrix<TPoly>) -> Result<Self> {
        let ring = &self.ring;
        let gi = invert(g, ring)?;
        let sg_inv = gi.frobenius(1, ring);
        let v = sg_inv.mul(&self.v, ring).mul(g, ring);
        let gamma = (0..self.d())
            .map(|l| {
                let dg = g.map(|x| ring.derivative(x, l));
                gi.mul(&self.gamma[l], ring)
                    .mul(g, ring)
                    .add(&gi.mul(&dg, ring), ring)
            })
            .collect();
        Self::new(ring.clone(), self.n, self.r, v, gamma)
    }

    fn block(&self, i: usize) -> usize {
        if self.omega0().contains(&i) {
            0
        } else if i == self.last() {
            2
        } else {
            1
        }
    }

    /// A random invertible change of basis preserving `omega_0 ⊂ omega ⊂ H`.
    pub fn random_gauge<R: Rng>(&self, rng: &mut R, max_degree: usize) -> Matrix<TPoly> {
        let ring = &self.ring;
        let p = self.p() as u32;
        loop {
            let g = Matrix::from_fn(self.n, self.n, |i, j| {
                if self.block(i) > self.block(j) {
                    ring.zero()
                } else {
                    ring.random(rng, max_degree)
                }
            });
            let d0 = ring.at_origin(&determinant(&g, ring));
            if !d0.is_multiple_of(p) {
                return g;
            }
        }
    }

    /// The matrix `K` with `ks(e_mu_i) = sum_l K_li dt_l`, read off from the
    /// `e_n`-row of the connection on `omega_mu`.
    pub fn ks_matrix(&self) -> Matrix<TPoly> {
        let d = self.d();
        Matrix::from_fn(d, d, |l, i| self.gamma[l].get(self.last(), self.r - 1 + i).clone())
    }

    /// `A_r`: the determinant of `V` on `omega_mu`.
    pub fn hasse_section(&self) -> TPoly {
        let mu: Vec<usize> = self.mu().collect();
        determinant(&self.v.submatrix(&mu, &mu), &self.ring)
    }

    /// Curvature `d Gamma + Gamma ∧ Gamma` as its `dt_a ∧ dt_b` coefficients, `a < b`.
    pub fn curvature(&self) -> Vec<((usize, usize), Matrix<TPoly>)> {
        let ring = &self.ring;
        let d = self.d();
        let mut out = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let da = self.gamma[b].map(|x| ring.derivative(x, a));
                let db = self.gamma[a].map(|x| ring.derivative(x, b));
                let comm = self.gamma[a]
                    .mul(&self.gamma[b], ring)
                    .sub(&self.gamma[b].mul(&self.gamma[a], ring), ring);
                out.push(((a, b), da.sub(&db, ring).add(&comm, ring)));
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        let deg = self.ring.cutoff();
        self.curvature()
            .iter()
            .all(|(_, c)| c.entries().iter().all(|x| self.ring.eq_below(x, &self.ring.zero(), deg)))
    }

    /// `M Gamma_l - dM/dt_l` for each `l`. Its vanishing is `V nabla = nabla^can V`.
    pub fn compatibility_defect(&self) -> Vec<Matrix<TPoly>> {
        let ring = &self.ring;
        (0..self.d())
            .map(|l| {
                let dm = self.v.map(|x| ring.derivative(x, l));
                self.v.mul(&self.gamma[l], ring).sub(&dm, ring)
            })
            .collect()
    }

    /// Whether `V nabla = nabla^can V` holds below the cutoff, on the rows
    /// selected by `rows`.
    pub fn compatible_on(&self, rows: Range<usize>) -> bool {
        let deg = self.ring.cutoff();
        let zero = self.ring.zero();
        self.compatibility_defect()
            .iter()
            .all(|m| rows.clone().all(|i| (0..self.n).all(|j| self.ring.eq_below(m.get(i, j), &zero, deg))))
    }

    /// Compatibility modulo `omega_0^(p)`, which is what the graded theory uses.
    pub fn compatible_mod_omega0(&self) -> bool {
        self.compatible_on(self.r - 1..self.n)
    }

    /// Verschiebung on `H_mu = H / omega_0`: rows and columns `r-1 .. n-1`.
    pub fn v_on_h_mu(&self) -> Matrix<TPoly> {
        let idx: Vec<usize> = (self.r - 1..self.n).collect();
        self.v.submatrix(&idx, &idx)
    }

    /// `V` on `H_mu` has image exactly `omega_mu^(p)`: its last row vanishes
    /// and its `mu`-block is invertible.
    pub fn h_mu_image_is_omega_mu(&self) -> bool {
        let m = self.v_on_h_mu();
        let d = self.d();
        let last_zero = (0..=d).all(|j| self.ring.is_zero(m.get(d, j)));
        let mu: Vec<usize> = (0..d).collect();
        last_zero && self.ring.is_unit(&determinant(&m.submatrix(&mu, &mu), &self.ring))
    }

    /// Value of `V` at the origin, over `F_p`.
    pub fn v_at_origin(&self) -> Matrix<u32> {
        self.v.map(|x| self.ring.at_origin(x))
    }

    /// Identification of the standard module's `sigma`-basis with this
    /// model's basis: `omega_0` is kept, `e_r` goes to the last vector and
    /// the vectors after it move down by one.
    pub fn standard_relabeling(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                if i + 1 < self.r {
                    i
                } else if i + 1 == self.r {
                    self.n - 1
                } else {
                    i - 1
                }
            })
            .collect()
    }

    /// The fibre at the origin agrees with the `sigma`-component of Verschiebung
    /// on the standard module, after [`Self::standard_relabeling`].
    pub fn fiber_matches_standard(&self) -> Result<bool> {
        let field = Gf::prime(self.p())?;
        let std = standard_module(self.n, self.r, &field)?;
        let perm = self.standard_relabeling();
        let at0 = self.v_at_origin();
        let mut ok = true;
        for i in 0..self.n {
            for j in 0..self.n {
                let s = std.v.matrix.get(i, j).code();
                ok &= *at0.get(perm[i], perm[j]) == s;
            }
        }
        Ok(ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_models_are_flat_and_compatible() {
        for n in 2..=5 {
            for r in 1..n {
                for p in [2, 3, 5] {
                    let m = FormalModel::stratum_any(n, r, p, 3).unwrap();
                    assert!(m.is_flat());
                    assert!(m.compatible_mod_omega0(), "n={n} r={r}");
                    assert!(m.fiber_matches_standard().unwrap(), "n={n} r={r}");
                    assert!(m.h_mu_image_is_omega_mu());
                    assert_eq!(m.hasse_section(), m.ring().one());
                }
            }
        }
        let igusa = FormalModel::igusa(4, 3, 3).unwrap();
        assert!(igusa.compatible_on(0..4));
    }

    #[test]
    fn gauge_preserves_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, r) in [(3, 1), (4, 2), (4, 3)] {
            let m = FormalModel::stratum_any(n, r, 3, 3).unwrap();
            let g = m.random_gauge(&mut rng, 2);
            let mg = m.gauge(&g).unwrap();
            assert!(mg.is_flat());
            assert!(mg.compatible_mod_omega0());
            assert!(mg.ring().is_unit(&mg.hasse_section()));
            let back = mg.gauge(&invert(&g, m.ring()).unwrap()).unwrap();
            for (a, b) in back.v().entries().iter().zip(m.v().entries()) {
                assert!(m.ring().eq_below(a, b, 3));
            }
        }
    }

    #[test]
    fn boundary_model_kills_hasse_at_origin() {
        let m = FormalModel::stratum(4, 2, 5, 3).unwrap();
        let t1 = m.ring().var(0);
        let one = m.ring().one();
        let b = m.scale_mu_rows(&[t1.clone(), one]).unwrap();
        assert_eq!(b.hasse_section(), t1);
        assert!(!b.h_mu_image_is_omega_mu());
    }
}

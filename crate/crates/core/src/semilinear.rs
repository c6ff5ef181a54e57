//! Frobenius-semilinear maps between coordinate spaces over `F_q`.

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::matrix::{inverse, kernel, rank, Matrix};
use crate::ring::{Frobenius, Ring};
use crate::subspace::Subspace;

/// A `sigma^twist`-semilinear map `v -> M * sigma^twist(v)`.
///
/// Verschiebung is stored as a linear map `D -> D^(p)` with twist 1; its
/// powers use [`SemilinearMap::compose_twisted`] instead of
/// [`SemilinearMap::compose`].
#[derive(Clone, Debug, PartialEq)]
pub struct SemilinearMap {
    pub field: Gf,
    pub twist: i64,
    pub matrix: Matrix<GfElem>,
}

impl SemilinearMap {
    pub fn new(field: Gf, twist: i64, matrix: Matrix<GfElem>) -> Self {
        SemilinearMap {
            field,
            twist,
            matrix,
        }
    }

    pub fn identity(field: &Gf, n: usize) -> Self {
        SemilinearMap::new(field.clone(), 0, Matrix::identity(n, field))
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[GfElem]) -> Vec<GfElem> {
        let tw: Vec<GfElem> = v.iter().map(|x| self.field.frobenius(x, self.twist)).collect();
        self.matrix.mul_vec(&tw, &self.field)
    }

    fn check_chain(&self, inner: &SemilinearMap) -> Result<()> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch("composing maps over different fields".into()));
        }
        if inner.codomain_dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch(format!(
                "codomain {} vs domain {}",
                inner.codomain_dim(),
                self.domain_dim()
            )));
        }
        Ok(())
    }

    /// `self o inner`: twist `a + b`, matrix `M_self * sigma^a(M_inner)`.
    pub fn compose(&self, inner: &SemilinearMap) -> Result<SemilinearMap> {
        self.check_chain(inner)?;
        let m = self
            .matrix
            .mul(&inner.matrix.frobenius(self.twist, &self.field), &self.field);
        Ok(SemilinearMap::new(self.field.clone(), self.twist + inner.twist, m))
    }

    /// Composition of maps read as linear maps into Frobenius twists,
    /// `D -> D^(p^b) -> D^(p^(a+b))`: matrix `sigma^b(M_self) * M_inner`.
    pub fn compose_twisted(&self, inner: &SemilinearMap) -> Result<SemilinearMap> {
        self.check_chain(inner)?;
        let m = self
            .matrix
            .frobenius(inner.twist, &self.field)
            .mul(&inner.matrix, &self.field);
        Ok(SemilinearMap::new(self.field.clone(), self.twist + inner.twist, m))
    }

    pub fn power(&self, e: u32) -> SemilinearMap {
        let mut acc = SemilinearMap::identity(&self.field, self.domain_dim());
        for _ in 0..e {
            acc = self.compose(&acc).expect("square map");
        }
        acc
    }

    pub fn power_twisted(&self, e: u32) -> SemilinearMap {
        let mut acc = SemilinearMap::identity(&self.field, self.domain_dim());
        for _ in 0..e {
            acc = self.compose_twisted(&acc).expect("square map");
        }
        acc
    }

    /// The `F_p`-matrix of the map in the basis `x^c e_j` (index `j*k + c`).
    pub fn linearize(&self) -> Matrix<GfElem> {
        let f = &self.field;
        let fp = f.prime_subfield();
        let k = f.degree() as usize;
        let (rows, cols) = (self.codomain_dim() * k, self.domain_dim() * k);
        let mut out = Matrix::zeros(rows, cols, &fp);
        for j in 0..self.domain_dim() {
            for c in 0..k {
                let mut unit = vec![0u32; k];
                unit[c] = 1;
                let mut v = vec![f.zero(); self.domain_dim()];
                v[j] = f.from_coeffs(&unit);
                let img = self.apply(&v);
                for (i, x) in img.iter().enumerate() {
                    for (d, coef) in f.coeffs(*x).into_iter().enumerate() {
                        out.set(i * k + d, j * k + c, fp.from_i64(coef as i64));
                    }
                }
            }
        }
        out
    }

    /// Rank over `F_p` of the linearization.
    pub fn prime_rank(&self) -> usize {
        rank(&self.linearize(), &self.field.prime_subfield())
    }

    /// Dimension over `F_q` of the image (the prime rank divided by `k`).
    pub fn rank(&self) -> usize {
        self.prime_rank() / self.field.degree() as usize
    }

    fn lift(&self, v: &[GfElem], blocks: usize) -> Vec<GfElem> {
        let k = self.field.degree() as usize;
        (0..blocks)
            .map(|j| {
                let coeffs: Vec<u32> = (0..k).map(|c| v[j * k + c].code()).collect();
                self.field.from_coeffs(&coeffs)
            })
            .collect()
    }

    /// Kernel, computed from the linearization and returned in `F_q`
    /// coordinates.
    pub fn kernel(&self) -> Subspace<GfElem> {
        let fp = self.field.prime_subfield();
        let vs: Vec<Vec<GfElem>> = kernel(&self.linearize(), &fp)
            .iter()
            .map(|v| self.lift(v, self.domain_dim()))
            .collect();
        Subspace::span(self.domain_dim(), &vs, &self.field)
    }

    /// Image, computed from the linearization and returned in `F_q`
    /// coordinates.
    pub fn image(&self) -> Subspace<GfElem> {
        let lin = self.linearize();
        let vs: Vec<Vec<GfElem>> = (0..lin.cols())
            .map(|c| self.lift(&lin.col(c), self.codomain_dim()))
            .collect();
        Subspace::span(self.codomain_dim(), &vs, &self.field)
    }

    /// Base change of a map `x -> M sigma(x)` along `x' = g x`:
    /// `M' = g M sigma^a(g)^(-1)`.
    pub fn conjugate(&self, g: &Matrix<GfElem>) -> Result<SemilinearMap> {
        let f = &self.field;
        let g_tw_inv = inverse(&g.frobenius(self.twist, f), f)
            .ok_or_else(|| Error::NotUnit("conjugating matrix is singular".into()))?;
        let m = g.mul(&self.matrix, f).mul(&g_tw_inv, f);
        Ok(SemilinearMap::new(f.clone(), self.twist, m))
    }

    /// Base change of a linear map into the Frobenius twist:
    /// `M' = sigma^a(g) M g^(-1)`.
    pub fn conjugate_twisted(&self, g: &Matrix<GfElem>) -> Result<SemilinearMap> {
        let f = &self.field;
        let g_inv =
            inverse(g, f).ok_or_else(|| Error::NotUnit("conjugating matrix is singular".into()))?;
        let m = g.frobenius(self.twist, f).mul(&self.matrix, f).mul(&g_inv, f);
        Ok(SemilinearMap::new(f.clone(), self.twist, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::column_space;

    #[test]
    fn field_frobenius_on_f4_linearizes_to_rank_two() {
        let f = Gf::new(2, 2).unwrap();
        let m = SemilinearMap::new(f.clone(), 1, Matrix::identity(1, &f));
        let lin = m.linearize();
        // Basis {1, g}: 1 -> 1, g -> g^2 = g + 1 for the modulus x^2 + x + 1.
        let fp = f.prime_subfield();
        let expect = Matrix::from_rows(vec![
            vec![fp.one(), fp.one()],
            vec![fp.zero(), fp.one()],
        ]);
        assert_eq!(lin, expect);
        assert_eq!(m.prime_rank(), 2);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn zero_map_and_prime_field_identity() {
        let f = Gf::prime(5).unwrap();
        let z = SemilinearMap::new(f.clone(), 1, Matrix::zeros(2, 3, &f));
        assert_eq!(z.prime_rank(), 0);
        assert!(z.linearize().is_zero(&f));
        let id = SemilinearMap::new(f.clone(), 1, Matrix::identity(3, &f));
        assert_eq!(id.linearize(), Matrix::identity(3, &f));
    }

    #[test]
    fn composition_law() {
        let f = Gf::new(3, 2).unwrap();
        let g = f.generator();
        let a = Matrix::from_rows(vec![vec![g, f.one()], vec![f.zero(), f.mul(&g, &g)]]);
        let phi = SemilinearMap::new(f.clone(), 1, a.clone());
        let sq = phi.compose(&phi).unwrap();
        assert_eq!(sq.twist, 2);
        assert_eq!(sq.matrix, a.mul(&a.frobenius(1, &f), &f));
        let id = SemilinearMap::identity(&f, 2);
        assert_eq!(id.compose(&phi).unwrap(), phi);
        // Action agrees with composition of actions.
        let v = vec![f.add(&g, &f.one()), g];
        assert_eq!(sq.apply(&v), phi.apply(&phi.apply(&v)));
    }

    #[test]
    fn kernel_and_image_match_direct_formulas() {
        let f = Gf::new(2, 3).unwrap();
        let g = f.generator();
        let a = Matrix::from_rows(vec![
            vec![g, f.one(), f.zero()],
            vec![f.mul(&g, &g), g, f.zero()],
            vec![f.zero(), f.zero(), f.zero()],
        ]);
        let phi = SemilinearMap::new(f.clone(), 1, a.clone());
        // ker(M sigma) = sigma^{-1}(ker M), im(M sigma) = colspace(M).
        let direct_ker = Subspace::span(3, &kernel(&a, &f), &f).frobenius(-1, &f);
        assert_eq!(phi.kernel(), direct_ker);
        assert_eq!(phi.image(), Subspace::span(3, &column_space(&a, &f), &f));
    }
}

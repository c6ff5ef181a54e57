//! Subspaces of `K^n` stored as reduced row echelon bases.
//!
//! The canonical form makes equality a plain comparison.

use crate::matrix::{kernel, rref, Matrix};
use crate::ring::{Field, Frobenius};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient: usize,
    /// Basis vectors in reduced row echelon form.
    basis: Vec<Vec<T>>,
}

impl<T: Clone + PartialEq + std::fmt::Debug> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full<F: Field<Elem = T>>(ambient: usize, field: &F) -> Self {
        Self::span(ambient, &Matrix::identity(ambient, field).row_vecs(), field)
    }

    pub fn span<F: Field<Elem = T>>(ambient: usize, vectors: &[Vec<T>], field: &F) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length");
        let m = Matrix::from_rows(vectors.to_vec());
        let (r, pivots) = rref(&m, field);
        Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate<F: Field<Elem = T>>(ambient: usize, indices: &[usize], field: &F) -> Self {
        let vecs: Vec<Vec<T>> = indices
            .iter()
            .map(|&i| {
                (0..ambient)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Self::span(ambient, &vecs, field)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// The basis as the rows of a matrix (`dim x ambient`).
    pub fn basis_matrix<F: Field<Elem = T>>(&self, field: &F) -> Matrix<T> {
        if self.basis.is_empty() {
            return Matrix::zeros(0, self.ambient, field);
        }
        Matrix::from_rows(self.basis.clone())
    }

    pub fn sum<F: Field<Elem = T>>(&self, other: &Self, field: &F) -> Self {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &v, field)
    }

    pub fn contains_vector<F: Field<Elem = T>>(&self, v: &[T], field: &F) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Self::span(self.ambient, &vs, field).dim() == self.dim()
    }

    pub fn contains<F: Field<Elem = T>>(&self, other: &Self, field: &F) -> bool {
        self.sum(other, field).dim() == self.dim()
    }

    /// `{ x : <x, y> = 0 for all y }` under the standard dot product.
    pub fn annihilator<F: Field<Elem = T>>(&self, field: &F) -> Self {
        let k = kernel(&self.basis_matrix(field), field);
        Self::span(self.ambient, &k, field)
    }

    pub fn intersection<F: Field<Elem = T>>(&self, other: &Self, field: &F) -> Self {
        self.annihilator(field)
            .sum(&other.annihilator(field), field)
            .annihilator(field)
    }

    /// Image under `x -> M x`.
    pub fn image<F: Field<Elem = T>>(&self, m: &Matrix<T>, field: &F) -> Self {
        let imgs: Vec<Vec<T>> = self.basis.iter().map(|v| m.mul_vec(v, field)).collect();
        Self::span(m.rows(), &imgs, field)
    }

    /// `{ x : M x in self }`.
    pub fn preimage<F: Field<Elem = T>>(&self, m: &Matrix<T>, field: &F) -> Self {
        // x is in the preimage iff every annihilating functional kills M x.
        let ann = self.annihilator(field);
        if ann.dim() == 0 {
            return Self::full(m.cols(), field);
        }
        let cond = ann.basis_matrix(field).mul(m, field);
        Self::span(m.cols(), &kernel(&cond, field), field)
    }

    /// Entrywise Frobenius of every vector, `sigma^times(W)`.
    pub fn frobenius<F: Field<Elem = T> + Frobenius<Elem = T>>(&self, times: i64, field: &F) -> Self {
        let vs: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| Frobenius::frobenius(field, x, times)).collect())
            .collect();
        Self::span(self.ambient, &vs, field)
    }

    /// Dimension of the intersection with a coordinate subspace.
    pub fn dim_in_coordinates<F: Field<Elem = T>>(&self, indices: &[usize], field: &F) -> usize {
        self.intersection(&Self::coordinate(self.ambient, indices, field), field)
            .dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf;
    use crate::ring::Ring;

    #[test]
    fn intersection_and_sum_dimensions() {
        let f = Gf::prime(5).unwrap();
        let e = |x: i64| f.from_i64(x);
        let a = Subspace::span(3, &[vec![e(1), e(0), e(0)], vec![e(0), e(1), e(0)]], &f);
        let b = Subspace::span(3, &[vec![e(0), e(1), e(0)], vec![e(0), e(0), e(1)]], &f);
        assert_eq!(a.intersection(&b, &f).dim(), 1);
        assert_eq!(a.sum(&b, &f).dim(), 3);
        assert!(a.sum(&b, &f) == Subspace::full(3, &f));
        assert!(a.contains_vector(&[e(2), e(3), e(0)], &f));
        assert!(!a.contains_vector(&[e(0), e(0), e(1)], &f));
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let f = Gf::prime(3).unwrap();
        let e = |x: i64| f.from_i64(x);
        let m = Matrix::from_rows(vec![vec![e(1), e(1)], vec![e(2), e(2)]]);
        let pre = Subspace::zero(2).preimage(&m, &f);
        assert_eq!(pre, Subspace::span(2, &[vec![e(1), e(2)]], &f));
    }
}

//! Dense matrices over an arbitrary [`Ring`], plus exact linear algebra.
//!
//! Elimination routines (`rref`, `rank`, `kernel`, `inverse`) need a
//! [`Field`]. Determinants and adjugates are computed division-free, so they
//! work over any commutative ring, including truncated polynomial rings where
//! the determinant may vanish at some points.

use crate::error::{Error, Result};
use crate::ring::{Field, Frobenius, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<T>]) -> Self
    where
        T: Default,
    {
        Matrix::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn zeros<R: Ring<Elem = T>>(rows: usize, cols: usize, ring: &R) -> Self {
        Matrix::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = T>>(n: usize, ring: &R) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn is_zero<R: Ring<Elem = T>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn add<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale<R: Ring<Elem = T>>(&self, c: &T, ring: &R) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    pub fn mul<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols, ring);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = ring.mul(a, other.get(l, j));
                    let cur = ring.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec<R: Ring<Elem = T>>(&self, v: &[T], ring: &R) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
            })
            .collect()
    }

    pub fn try_mul<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other, ring))
    }

    /// Entrywise `x -> x^(p^times)`.
    pub fn frobenius<R: Frobenius<Elem = T>>(&self, times: i64, ring: &R) -> Self {
        if times == 0 {
            return self.clone();
        }
        self.map(|x| ring.frobenius(x, times))
    }

    /// Block-diagonal sum.
    pub fn direct_sum<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Matrix::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                ring.zero()
            }
        })
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product.
    pub fn kronecker<R: Ring<Elem = T>>(&self, other: &Self, ring: &R) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            ring.mul(
                self.get(i / other.rows, j / other.cols),
                other.get(i % other.rows, j % other.cols),
            )
        })
    }
}

/// Determinant by the division-free subset recursion: `dp[S]` is the signed
/// sum over injections of the first `|S|` rows onto the column set `S`.
/// Cost is `O(2^n n)` ring operations.
pub fn determinant<R: Ring>(m: &Matrix<R::Elem>, ring: &R) -> R::Elem {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 20, "cofactor determinant limited to n <= 20");
    let full = 1usize << n;
    let mut dp: Vec<Option<R::Elem>> = vec![None; full];
    dp[0] = Some(ring.one());
    for mask in 0..full {
        let Some(acc) = dp[mask].clone() else {
            continue;
        };
        if ring.is_zero(&acc) {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let entry = m.get(row, c);
            if ring.is_zero(entry) {
                continue;
            }
            // Previously chosen columns larger than c each add an inversion.
            let inversions = (mask >> (c + 1)).count_ones();
            let mut term = ring.mul(&acc, entry);
            if inversions % 2 == 1 {
                term = ring.neg(&term);
            }
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                Some(x) => ring.add(&x, &term),
                None => term,
            });
        }
    }
    dp[full - 1].clone().unwrap_or_else(|| ring.zero())
}

/// The classical adjugate (transposed cofactor matrix). For `1 x 1` input the
/// result is `(1)` by the empty-minor convention.
pub fn adjugate<R: Ring>(m: &Matrix<R::Elem>, ring: &R) -> Matrix<R::Elem> {
    assert!(m.is_square(), "adjugate of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return m.clone();
    }
    Matrix::from_fn(n, n, |i, j| {
        // adj[i][j] = (-1)^(i+j) det(M with row j and column i removed)
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let minor = determinant(&m.submatrix(&rows, &cols), ring);
        if (i + j) % 2 == 1 {
            ring.neg(&minor)
        } else {
            minor
        }
    })
}

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref<F: Field>(m: &Matrix<F::Elem>, field: &F) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let tmp = a.get(r, j).clone();
                a.set(r, j, a.get(pr, j).clone());
                a.set(pr, j, tmp);
            }
        }
        let inv = field.inv(a.get(r, c)).expect("pivot is non-zero");
        for j in c..cols {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || field.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                let v = field.sub(a.get(i, j), &field.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(m: &Matrix<F::Elem>, field: &F) -> usize {
    rref(m, field).1.len()
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column.
pub fn kernel<F: Field>(m: &Matrix<F::Elem>, field: &F) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(m, field);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(row, fc));
            }
            v
        })
        .collect()
}

/// Basis of the column space (the pivot columns of `m`).
pub fn column_space<F: Field>(m: &Matrix<F::Elem>, field: &F) -> Vec<Vec<F::Elem>> {
    let (_, pivots) = rref(m, field);
    pivots.iter().map(|&c| m.col(c)).collect()
}

pub fn inverse<F: Field>(m: &Matrix<F::Elem>, field: &F) -> Option<Matrix<F::Elem>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            field.one()
        } else {
            field.zero()
        }
    });
    let (r, pivots) = rref(&aug, field);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Some(r.submatrix(&rows, &cols))
}

/// Determinant by Gaussian elimination, an independent route to
/// [`determinant`] over fields.
pub fn determinant_by_elimination<F: Field>(m: &Matrix<F::Elem>, field: &F) -> F::Elem {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !field.is_zero(a.get(i, c))) else {
            return field.zero();
        };
        if pr != c {
            for j in 0..n {
                let tmp = a.get(c, j).clone();
                a.set(c, j, a.get(pr, j).clone());
                a.set(pr, j, tmp);
            }
            det = field.neg(&det);
        }
        let piv = a.get(c, c).clone();
        det = field.mul(&det, &piv);
        let inv = field.inv(&piv).expect("non-zero pivot");
        for i in c + 1..n {
            let factor = field.mul(a.get(i, c), &inv);
            if field.is_zero(&factor) {
                continue;
            }
            for j in c..n {
                let v = field.sub(a.get(i, j), &field.mul(&factor, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf;
    use crate::ring::{Integers, Rationals};
    use num_bigint::BigInt;
    use num_rational::Ratio;

    fn z(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn adjugate_one_by_one_is_one() {
        let ring = Integers::<i64>::new();
        assert_eq!(adjugate(&z(vec![vec![7]]), &ring), z(vec![vec![1]]));
    }

    #[test]
    fn adjugate_two_by_two_classical() {
        let ring = Integers::<i64>::new();
        let m = z(vec![vec![2, 3], vec![5, 7]]);
        assert_eq!(adjugate(&m, &ring), z(vec![vec![7, -3], vec![-5, 2]]));
    }

    #[test]
    fn determinant_known_values() {
        let ring = Integers::<i64>::new();
        let m = z(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(determinant(&m, &ring), 0);
        let m = z(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m, &ring), -1);
        let id = Matrix::identity(5, &ring);
        assert_eq!(determinant(&id, &ring), 1);
    }

    #[test]
    fn adjugate_of_singular_matrix() {
        let ring = Integers::<i64>::new();
        let m = z(vec![vec![1, 2], vec![2, 4]]);
        let adj = adjugate(&m, &ring);
        assert!(m.mul(&adj, &ring).is_zero(&ring));
        assert_eq!(adj, z(vec![vec![4, -2], vec![-2, 1]]));
    }

    #[test]
    fn rational_inverse_and_kernel() {
        let q = Rationals::<BigInt>::new();
        let r = |a: i64| Ratio::from_integer(BigInt::from(a));
        let m = Matrix::from_rows(vec![vec![r(1), r(2)], vec![r(3), r(4)]]);
        let inv = inverse(&m, &q).unwrap();
        assert_eq!(m.mul(&inv, &q), Matrix::identity(2, &q));
        let s = Matrix::from_rows(vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]]);
        let ker = kernel(&s, &q);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(s.mul_vec(&v, &q).iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn rank_and_column_space_over_f3() {
        let f = Gf::prime(3).unwrap();
        let e = |x: i64| f.from_i64(x);
        let m = Matrix::from_rows(vec![
            vec![e(1), e(1), e(2)],
            vec![e(2), e(2), e(1)],
            vec![e(0), e(1), e(1)],
        ]);
        assert_eq!(rank(&m, &f), 2);
        assert_eq!(column_space(&m, &f).len(), 2);
        assert!(inverse(&m, &f).is_none());
        assert_eq!(determinant(&m, &f), f.zero());
        assert_eq!(determinant_by_elimination(&m, &f), f.zero());
    }
}

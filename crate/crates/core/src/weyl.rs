//! Shuffle representatives, automorphic weights and weight shifts.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{is_prime, Gf};
use crate::matrix::{rank, Matrix};
use crate::ring::Ring;

/// A permutation of `{1..n}` in one-line notation satisfying
/// `w^-1(1) < ... < w^-1(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shuffle {
    one_line: Vec<usize>,
}

impl Shuffle {
    /// The representative `w_r`: fixes `1..r-1`, sends `r` to `n` and
    /// shifts `r+1..n` down by one.
    pub fn w(n: usize, r: usize) -> Result<Shuffle> {
        if n < 2 || r < 1 || r > n {
            return Err(Error::OutOfRange(format!("w_r needs 1 <= r <= n, n >= 2; got n={n}, r={r}")));
        }
        let one_line = (1..=n)
            .map(|i| match i.cmp(&r) {
                std::cmp::Ordering::Less => i,
                std::cmp::Ordering::Equal => n,
                std::cmp::Ordering::Greater => i - 1,
            })
            .collect();
        Ok(Shuffle { one_line })
    }

    pub fn from_one_line(one_line: Vec<usize>) -> Result<Shuffle> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &x in &one_line {
            if x == 0 || x > n || seen[x] {
                return Err(Error::OutOfRange(format!("{one_line:?} is not a permutation")));
            }
            seen[x] = true;
        }
        let s = Shuffle { one_line };
        let inv = s.inverse();
        if inv[..n.saturating_sub(1)].windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::OutOfRange(format!("{:?} is not a shuffle", s.one_line)));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// `inverse()[i-1] = w^-1(i)`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.one_line.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        inv
    }

    /// `sum_{i<n} (w^-1(i) - i)`.
    pub fn length(&self) -> usize {
        let inv = self.inverse();
        (1..self.n()).map(|i| inv[i - 1] - i).sum()
    }

    pub fn inversions(&self) -> usize {
        let w = &self.one_line;
        (0..w.len())
            .flat_map(|i| (i + 1..w.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| w[i] > w[j])
            .count()
    }

    /// The `r` with `self == w_r`: the position sent to `n`.
    pub fn stratum_index(&self) -> usize {
        self.inverse()[self.n() - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(i, &x)| x == i + 1)
    }
}

impl std::fmt::Display for Shuffle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.one_line.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `[w_1, ..., w_n]`, in decreasing order of length.
pub fn shuffles(n: usize) -> Result<Vec<Shuffle>> {
    (1..=n).map(|r| Shuffle::w(n, r)).collect()
}

/// The closure of the stratum of `w_r`: `[w_r, w_{r+1}, ..., w_n]`.
pub fn closure_chain(n: usize, r: usize) -> Result<Vec<Shuffle>> {
    Shuffle::w(n, r)?;
    (r..=n).map(|s| Shuffle::w(n, s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphicWeight {
    pub k: Vec<i64>,
    pub w: i64,
}

impl AutomorphicWeight {
    pub fn new(k: Vec<i64>, w: i64) -> Result<Self> {
        check_dominant(&k)?;
        Ok(AutomorphicWeight { k, w })
    }

    /// Theta operators need `k_{n-1} >= 0`.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.k.last() {
            Some(&last) if last < 0 => Err(Error::WeightPrecondition(format!(
                "last entry of {:?} is negative",
                self.k
            ))),
            _ => Ok(()),
        }
    }

    pub fn shifted(&self, dk: &[i64], dw: i64) -> Result<Self> {
        if dk.len() != self.k.len() {
            return Err(Error::DimensionMismatch("weight lengths differ".into()));
        }
        let k = self.k.iter().zip(dk).map(|(a, b)| a + b).collect();
        AutomorphicWeight::new(k, self.w + dw)
    }

    /// The same weight with the determinant exponent reduced modulo `p - 1`,
    /// using the triviality of its `(p-1)`-th power.
    pub fn reduce_w(&self, p: u64) -> Self {
        let m = p as i64 - 1;
        let w = if m > 0 { self.w.rem_euclid(m) } else { 0 };
        AutomorphicWeight {
            k: self.k.clone(),
            w,
        }
    }
}

pub fn check_dominant(k: &[i64]) -> Result<()> {
    if k.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDominant(k.to_vec()));
    }
    Ok(())
}

fn check_stratum(r: usize, p: u64, n: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n < 2 || r < 1 || r > n - 1 {
        return Err(Error::OutOfRange(format!("need 1 <= r <= n-1; got n={n}, r={r}")));
    }
    Ok(())
}

/// `(p+1, p, ..., p, 1, ..., 1)` of length `n-1` with `r-1` trailing ones.
pub fn delta_shift(r: usize, p: u64, n: usize) -> Result<Vec<i64>> {
    check_stratum(r, p, n)?;
    let p = p as i64;
    let len = n - 1;
    Ok((0..len)
        .map(|i| {
            if i == 0 {
                p + 1
            } else if i >= len - (r - 1) {
                1
            } else {
                p
            }
        })
        .collect())
}

/// Weight of `A_r`: `p-1` in the first `n-r` entries, zero after.
pub fn hasse_weight(r: usize, p: u64, n: usize) -> Result<Vec<i64>> {
    check_stratum(r, p, n)?;
    Ok((0..n - 1)
        .map(|i| if i < n - r { p as i64 - 1 } else { 0 })
        .collect())
}

/// `(k_1-k_2, ..., k_{m-1}-k_m, k_m)`.
pub fn lambda_coords(k: &[i64]) -> Result<Vec<i64>> {
    check_dominant(k)?;
    let m = k.len();
    Ok((0..m)
        .map(|i| if i + 1 < m { k[i] - k[i + 1] } else { k[i] })
        .collect())
}

pub fn from_lambda(lambda: &[i64]) -> Vec<i64> {
    let mut k = vec![0; lambda.len()];
    let mut acc = 0;
    for i in (0..lambda.len()).rev() {
        acc += lambda[i];
        k[i] = acc;
    }
    k
}

/// Vector difference, used for weight bookkeeping.
pub fn weight_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn weight_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn to_u128(x: BigUint) -> Result<u128> {
    x.to_u128()
        .ok_or_else(|| Error::OutOfRange("dimension overflows u128".into()))
}

/// Dimension of the tensor construction
/// `prod_j Sym^{k_j - k_{j+1}}(wedge^j st)` for `st` of dimension `m`
/// (`k_{m+1} = 0`; a negative top exponent is read through the dual).
pub fn s_construction_dim(k: &[i64], m: usize) -> Result<u128> {
    check_dominant(k)?;
    if k.len() != m {
        return Err(Error::DimensionMismatch(format!("weight of length {} for m={m}", k.len())));
    }
    let mut acc = BigUint::one();
    for j in 1..=m {
        let next = if j < m { k[j] } else { 0 };
        let a = (k[j - 1] - next).unsigned_abs();
        let wedge = binomial(m as u64, j as u64).to_u64().expect("small binomial");
        acc *= binomial(wedge + a - 1, a);
    }
    to_u128(acc)
}

/// `prod_{i<j} (k_i - k_j + j - i) / (j - i)`.
pub fn weyl_product_dim(k: &[i64], m: usize) -> Result<u128> {
    check_dominant(k)?;
    if k.len() != m {
        return Err(Error::DimensionMismatch(format!("weight of length {} for m={m}", k.len())));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        for j in i + 1..m {
            num *= BigUint::from((k[i] - k[j]) as u64 + (j - i) as u64);
            den *= BigUint::from((j - i) as u64);
        }
    }
    debug_assert!((&num % &den) == BigUint::from(0u32));
    to_u128(num / den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionComparison {
    pub k: Vec<i64>,
    pub s_construction: u128,
    pub weyl_product: u128,
    pub mismatch: bool,
}

/// Both dimension counts side by side; a mismatch is reported, not raised.
pub fn compare_dims(k: &[i64], m: usize) -> Result<DimensionComparison> {
    let s = s_construction_dim(k, m)?;
    let w = weyl_product_dim(k, m)?;
    Ok(DimensionComparison {
        k: k.to_vec(),
        s_construction: s,
        weyl_product: w,
        mismatch: s != w,
    })
}

/// Matrix of `g` acting on `Sym^d` of a 2-dimensional space, in the basis
/// `x1^a x2^(d-a)` for `a = d, d-1, ..., 0`, where `g x_j = sum_i g_ij x_i`.
pub fn sym_power_action(g: &Matrix<crate::gf::GfElem>, d: usize, f: &Gf) -> Matrix<crate::gf::GfElem> {
    // Polynomials in x1 with x2 implicit: coefficient of x1^a x2^(deg-a).
    let lin = |j: usize| vec![*g.get(1, j), *g.get(0, j)];
    let mul = |a: &[crate::gf::GfElem], b: &[crate::gf::GfElem]| {
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        out
    };
    let mut m = Matrix::zeros(d + 1, d + 1, f);
    for col in 0..=d {
        let a = d - col;
        let mut poly = vec![f.one()];
        for _ in 0..a {
            poly = mul(&poly, &lin(0));
        }
        for _ in 0..d - a {
            poly = mul(&poly, &lin(1));
        }
        for (deg, c) in poly.into_iter().enumerate() {
            m.set(d - deg, col, c);
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct ReducibilityWitness {
    pub p: u64,
    /// `(p+1) x 2` matrix of `e_i -> e_i^p` into `Sym^p`.
    pub embedding: Matrix<crate::gf::GfElem>,
    pub sym_dim: usize,
    pub image_dim: usize,
    pub injective: bool,
    /// One entry per generator: `E12(1)`, `E21(1)`, `diag(c, 1)`.
    pub equivariant: Vec<bool>,
}

impl ReducibilityWitness {
    pub fn holds(&self) -> bool {
        self.injective && self.equivariant.iter().all(|&b| b) && self.image_dim < self.sym_dim
    }
}

/// The proper submodule `st^(p) -> Sym^p(st)` over `F_p`.
pub fn symp_reducibility_witness(p: u64) -> Result<ReducibilityWitness> {
    let f = Gf::prime(p)?;
    let d = p as usize;
    let mut e = Matrix::zeros(d + 1, 2, &f);
    e.set(0, 0, f.one());
    e.set(d, 1, f.one());
    let image_dim = rank(&e, &f);
    let c = f.generator();
    let gens = [
        Matrix::from_rows(vec![vec![f.one(), f.one()], vec![f.zero(), f.one()]]),
        Matrix::from_rows(vec![vec![f.one(), f.zero()], vec![f.one(), f.one()]]),
        Matrix::from_rows(vec![vec![c, f.zero()], vec![f.zero(), f.one()]]),
    ];
    let equivariant = gens
        .iter()
        .map(|g| {
            let lhs = sym_power_action(g, d, &f).mul(&e, &f);
            let rhs = e.mul(&g.frobenius(1, &f), &f);
            // Exact commutation, and the image is stable under Sym^p(g).
            let stacked = e.transpose().stack(&lhs.transpose());
            lhs == rhs && rank(&stacked, &f) == image_dim
        })
        .collect();
    Ok(ReducibilityWitness {
        p,
        embedding: e,
        sym_dim: d + 1,
        image_dim,
        injective: image_dim == 2,
        equivariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_shuffles() {
        let ws = shuffles(3).unwrap();
        let lines: Vec<Vec<usize>> = ws.iter().map(|w| w.one_line().to_vec()).collect();
        assert_eq!(lines, vec![vec![3, 1, 2], vec![1, 3, 2], vec![1, 2, 3]]);
        assert!(ws[2].is_identity());
        assert_eq!(ws.iter().map(Shuffle::length).collect::<Vec<_>>(), vec![2, 1, 0]);
    }

    #[test]
    fn lengths_match_inversions_and_formula() {
        for n in 2..=8 {
            let ws = shuffles(n).unwrap();
            assert_eq!(ws.len(), n);
            for (idx, w) in ws.iter().enumerate() {
                let r = idx + 1;
                assert_eq!(w.length(), n - r);
                assert_eq!(w.length(), w.inversions());
                assert_eq!(w.stratum_index(), r);
                assert_eq!(Shuffle::from_one_line(w.one_line().to_vec()).unwrap(), *w);
            }
        }
    }

    #[test]
    fn every_shuffle_is_some_w_r() {
        // Brute force over all permutations of 1..=5.
        fn perms(v: Vec<usize>) -> Vec<Vec<usize>> {
            if v.len() <= 1 {
                return vec![v];
            }
            let mut out = Vec::new();
            for i in 0..v.len() {
                let mut rest = v.clone();
                let x = rest.remove(i);
                for mut p in perms(rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let n = 5;
        let found: Vec<Shuffle> = perms((1..=n).collect())
            .into_iter()
            .filter_map(|p| Shuffle::from_one_line(p).ok())
            .collect();
        assert_eq!(found.len(), n);
        for s in found {
            assert_eq!(s, Shuffle::w(n, s.stratum_index()).unwrap());
        }
    }

    #[test]
    fn delta_and_hasse_examples() {
        assert_eq!(delta_shift(1, 5, 4).unwrap(), vec![6, 5, 5]);
        assert_eq!(delta_shift(3, 5, 4).unwrap(), vec![6, 1, 1]);
        assert_eq!(lambda_coords(&delta_shift(2, 5, 4).unwrap()).unwrap(), vec![1, 4, 1]);
        assert_eq!(lambda_coords(&[6, 5, 5]).unwrap(), vec![1, 0, 5]);
        assert_eq!(hasse_weight(1, 3, 4).unwrap(), vec![2, 2, 2]);
        assert_eq!(hasse_weight(3, 3, 4).unwrap(), vec![2, 0, 0]);
        assert!(delta_shift(4, 5, 4).is_err());
        assert!(delta_shift(1, 4, 4).is_err());
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
        assert!(s_construction_dim(&[0, 1], 2).is_err());
    }

    #[test]
    fn reducibility_witness_small_primes() {
        let w2 = symp_reducibility_witness(2).unwrap();
        assert_eq!((w2.sym_dim, w2.image_dim), (3, 2));
        assert!(w2.holds());
        let w3 = symp_reducibility_witness(3).unwrap();
        assert_eq!((w3.sym_dim, w3.image_dim), (4, 2));
        assert!(w3.holds());
    }

    #[test]
    fn sym_action_is_not_equivariant_without_frobenius_in_general() {
        // Over F_4 the Frobenius twist matters: diag(g,1) on Sym^2 sends
        // x1^2 to g^2 x1^2, not g x1^2.
        let f = Gf::new(2, 2).unwrap();
        let g = f.generator();
        let m = Matrix::from_rows(vec![vec![g, f.zero()], vec![f.zero(), f.one()]]);
        let s = sym_power_action(&m, 2, &f);
        assert_eq!(*s.get(0, 0), f.mul(&g, &g));
    }
}

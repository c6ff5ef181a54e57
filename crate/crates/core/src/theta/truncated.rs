//! `F_p[t_1, ..., t_d] / (terms of total degree > N)` with dense storage.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::is_prime;
use crate::multilinear::binomial;
use crate::ring::{Frobenius, Ring};

struct Tables {
    p: u32,
    nvars: usize,
    cutoff: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    degree: Vec<usize>,
    /// `mul[a * len + b]` is the index of `x^a x^b`, if it survives.
    mul: Vec<Option<u32>>,
    /// `deriv[j][a]` is `(index, exponent)` of `d/dt_j x^a`.
    deriv: Vec<Vec<Option<(u32, u32)>>>,
}

#[derive(Clone)]
pub struct TruncatedRing {
    t: Arc<Tables>,
}

/// Element of a [`TruncatedRing`]: coefficients in the ring's monomial order
/// (graded, then lexicographic in the exponents).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TPoly(Vec<u32>);

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly{:?}", self.0)
    }
}

impl TPoly {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[t_1..t_{}]/(deg > {})", self.t.p, self.t.nvars, self.t.cutoff)
    }
}

impl PartialEq for TruncatedRing {
    fn eq(&self, other: &Self) -> bool {
        (self.t.p, self.t.nvars, self.t.cutoff) == (other.t.p, other.t.nvars, other.t.cutoff)
    }
}

impl Eq for TruncatedRing {}

fn exponents(nvars: usize, deg: usize) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in exponents(nvars - 1, deg - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Upper bound on the number of monomials.
pub const MAX_MONOMIALS: usize = 4096;

impl TruncatedRing {
    pub fn new(p: u64, nvars: usize, cutoff: usize) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 / 2 {
            return Err(Error::NotPrime(p));
        }
        let len = binomial(cutoff + nvars, nvars);
        if len > MAX_MONOMIALS {
            return Err(Error::OutOfRange(format!(
                "{len} monomials in {nvars} variables up to degree {cutoff}"
            )));
        }
        let exps: Vec<Vec<u32>> = (0..=cutoff).flat_map(|d| exponents(nvars, d)).collect();
        let index: HashMap<Vec<u32>, usize> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let degree: Vec<usize> = exps.iter().map(|e| e.iter().sum::<u32>() as usize).collect();
        let n = exps.len();
        let mut mul = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if degree[a] + degree[b] <= cutoff {
                    let e: Vec<u32> = exps[a].iter().zip(&exps[b]).map(|(x, y)| x + y).collect();
                    mul[a * n + b] = Some(index[&e] as u32);
                }
            }
        }
        let deriv = (0..nvars)
            .map(|j| {
                exps.iter()
                    .map(|e| {
                        if e[j] == 0 || (e[j] as u64).is_multiple_of(p) {
                            return None;
                        }
                        let mut f = e.clone();
                        f[j] -= 1;
                        Some((index[&f] as u32, e[j] % p as u32))
                    })
                    .collect()
            })
            .collect();
        Ok(TruncatedRing {
            t: Arc::new(Tables {
                p: p as u32,
                nvars,
                cutoff,
                exps,
                index,
                degree,
                mul,
                deriv,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.t.p as u64
    }

    pub fn nvars(&self) -> usize {
        self.t.nvars
    }

    pub fn cutoff(&self) -> usize {
        self.t.cutoff
    }

    pub fn len(&self) -> usize {
        self.t.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.t.exps
    }

    pub fn constant(&self, c: u64) -> TPoly {
        let mut v = vec![0; self.len()];
        v[0] = (c % self.p()) as u32;
        TPoly(v)
    }

    /// `c * t^exps`, zero if the degree exceeds the cutoff.
    pub fn monomial(&self, exps: &[u32], c: u64) -> Result<TPoly> {
        if exps.len() != self.t.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} variables",
                exps.len(),
                self.t.nvars
            )));
        }
        let mut v = vec![0; self.len()];
        if let Some(&i) = self.t.index.get(exps) {
            v[i] = (c % self.p()) as u32;
        }
        Ok(TPoly(v))
    }

    /// The variable `t_{j+1}`.
    pub fn var(&self, j: usize) -> TPoly {
        let mut e = vec![0; self.t.nvars];
        e[j] = 1;
        self.monomial(&e, 1).expect("valid exponent vector")
    }

    /// `(exponents, coefficient)` of the non-zero terms.
    pub fn terms(&self, f: &TPoly) -> Vec<(Vec<u32>, u32)> {
        f.0.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.t.exps[i].clone(), c))
            .collect()
    }

    pub fn from_terms(&self, terms: &[(Vec<u32>, u64)]) -> Result<TPoly> {
        let mut acc = self.zero();
        for (e, c) in terms {
            acc = self.add(&acc, &self.monomial(e, *c)?);
        }
        Ok(acc)
    }

    pub fn constant_term(&self, f: &TPoly) -> u32 {
        f.0[0]
    }

    pub fn is_unit(&self, f: &TPoly) -> bool {
        f.0[0] != 0
    }

    /// Lowest degree of a non-zero term.
    pub fn order(&self, f: &TPoly) -> Option<usize> {
        f.0.iter().position(|&c| c != 0).map(|i| self.t.degree[i])
    }

    fn inv_mod_p(&self, a: u32) -> u32 {
        let p = self.t.p as u64;
        let mut acc = 1u64;
        let mut base = a as u64 % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Inverse of a unit by the geometric series, exact up to the cutoff.
    pub fn inverse(&self, f: &TPoly) -> Result<TPoly> {
        if !self.is_unit(f) {
            return Err(Error::NotUnit(format!("{f:?} vanishes at the origin")));
        }
        let c_inv = self.inv_mod_p(f.0[0]);
        let normalized = self.scale(f, c_inv);
        let x = self.sub(&self.one(), &normalized);
        let mut acc = self.one();
        let mut pw = self.one();
        for _ in 0..self.t.cutoff {
            pw = self.mul(&pw, &x);
            acc = self.add(&acc, &pw);
        }
        Ok(self.scale(&acc, c_inv))
    }

    pub fn scale(&self, f: &TPoly, c: u32) -> TPoly {
        let p = self.t.p as u64;
        TPoly(f.0.iter().map(|&x| (x as u64 * c as u64 % p) as u32).collect())
    }

    /// `d/dt_{j+1}`.
    pub fn derivative(&self, f: &TPoly, j: usize) -> TPoly {
        let p = self.t.p as u64;
        let mut out = vec![0u32; self.len()];
        for (a, &c) in f.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if let Some((i, e)) = self.t.deriv[j][a] {
                let i = i as usize;
                out[i] = ((out[i] as u64 + c as u64 * e as u64) % p) as u32;
            }
        }
        TPoly(out)
    }

    /// `df` as its coefficient vector in `dt_1, ..., dt_d`.
    pub fn differential(&self, f: &TPoly) -> Vec<TPoly> {
        (0..self.t.nvars).map(|j| self.derivative(f, j)).collect()
    }

    /// Drops all terms of degree `>= deg`.
    pub fn truncate(&self, f: &TPoly, deg: usize) -> TPoly {
        TPoly(
            f.0.iter()
                .enumerate()
                .map(|(i, &c)| if self.t.degree[i] < deg { c } else { 0 })
                .collect(),
        )
    }

    /// Equality of all terms of degree `< deg`.
    pub fn eq_below(&self, a: &TPoly, b: &TPoly, deg: usize) -> bool {
        (0..self.len()).all(|i| self.t.degree[i] >= deg || a.0[i] == b.0[i])
    }

    /// Evaluation at `t = 0`.
    pub fn at_origin(&self, f: &TPoly) -> u32 {
        f.0[0]
    }

    pub fn random<R: Rng>(&self, rng: &mut R, max_degree: usize) -> TPoly {
        TPoly(
            (0..self.len())
                .map(|i| if self.t.degree[i] <= max_degree { rng.gen_range(0..self.t.p) } else { 0 })
                .collect(),
        )
    }

    /// A random element with the given constant term.
    pub fn random_with_constant<R: Rng>(&self, rng: &mut R, max_degree: usize, c: u32) -> TPoly {
        let mut f = self.random(rng, max_degree);
        f.0[0] = c % self.t.p;
        f
    }
}

impl Ring for TruncatedRing {
    type Elem = TPoly;

    fn zero(&self) -> TPoly {
        TPoly(vec![0; self.len()])
    }

    fn one(&self) -> TPoly {
        self.constant(1)
    }

    fn add(&self, a: &TPoly, b: &TPoly) -> TPoly {
        let p = self.t.p;
        TPoly(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % p).collect())
    }

    fn neg(&self, a: &TPoly) -> TPoly {
        let p = self.t.p;
        TPoly(a.0.iter().map(|&x| (p - x) % p).collect())
    }

    fn mul(&self, a: &TPoly, b: &TPoly) -> TPoly {
        let n = self.len();
        let p = self.t.p as u64;
        let mut out = vec![0u64; n];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &self.t.mul[i * n..(i + 1) * n];
            for (j, &y) in b.0.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                if let Some(k) = row[j] {
                    out[k as usize] = (out[k as usize] + x as u64 * y as u64) % p;
                }
            }
        }
        TPoly(out.into_iter().map(|x| x as u32).collect())
    }

    fn is_zero(&self, a: &TPoly) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    fn from_i64(&self, n: i64) -> TPoly {
        self.constant(n.rem_euclid(self.t.p as i64) as u64)
    }
}

impl Frobenius for TruncatedRing {
    fn characteristic(&self) -> u64 {
        self.p()
    }

    /// `f -> f^(p^times)`. The ring is not perfect, so `times` must be
    /// non-negative.
    fn frobenius(&self, a: &TPoly, times: i64) -> TPoly {
        assert!(times >= 0, "inverse Frobenius does not exist on a truncated polynomial ring");
        let mut x = a.clone();
        for _ in 0..times {
            x = self.pow(&x, self.p());
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_and_truncation() {
        let r = TruncatedRing::new(3, 2, 3).unwrap();
        assert_eq!(r.len(), 10);
        let t1 = r.var(0);
        assert!(r.is_zero(&r.pow(&t1, 4)));
        assert!(!r.is_zero(&r.pow(&t1, 3)));
    }

    #[test]
    fn leibniz_and_constants() {
        let r = TruncatedRing::new(5, 3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = r.random(&mut rng, 4);
            let g = r.random(&mut rng, 4);
            for j in 0..3 {
                let lhs = r.derivative(&r.mul(&f, &g), j);
                let rhs = r.add(&r.mul(&r.derivative(&f, j), &g), &r.mul(&f, &r.derivative(&g, j)));
                assert!(r.eq_below(&lhs, &rhs, 4));
            }
        }
        assert!(r.differential(&r.constant(3)).iter().all(|x| r.is_zero(x)));
    }

    #[test]
    fn frobenius_is_killed_by_d() {
        for p in [2, 3, 5] {
            let r = TruncatedRing::new(p, 2, 6).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..20 {
                let f = r.random(&mut rng, 6);
                let fp = r.frobenius(&f, 1);
                assert!(r.differential(&fp).iter().all(|x| r.is_zero(x)));
            }
        }
    }

    #[test]
    fn unit_inverse() {
        let r = TruncatedRing::new(7, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let u = r.random_with_constant(&mut rng, 4, 3);
            let ui = r.inverse(&u).unwrap();
            assert_eq!(r.mul(&u, &ui), r.one());
        }
        assert!(r.inverse(&r.var(1)).is_err());
    }
}

//! Sections of `Sym^k` bundles in the wedge-monomial basis, with coefficients
//! in a truncated ring.
//!
//! A weight `k = (k_1, ..., k_m)` with `k_m >= 0` is realised inside
//! `Sym^{k_1-k_2}(V) (x) Sym^{k_2-k_3}(wedge^2 V) (x) ... (x) Sym^{k_m}(wedge^m V)`.
//! A basis monomial stores, for every `j`, the sorted multiset of `j`-subsets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multilinear::{multisets, subsets};
use crate::ring::Ring;

use super::truncated::{TPoly, TruncatedRing};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<Vec<Vec<usize>>>);

/// Sign of sorting a list that is sorted except possibly at `pos`, or `None`
/// if a repeated entry appears.
fn resort(mut s: Vec<usize>, pos: usize) -> Option<(bool, Vec<usize>)> {
    let x = s[pos];
    if s.iter().enumerate().any(|(i, &y)| i != pos && y == x) {
        return None;
    }
    let moved_past = s.iter().enumerate().filter(|&(i, &y)| (i < pos && y > x) || (i > pos && y < x)).count();
    s.sort_unstable();
    Some((moved_past % 2 == 1, s))
}

impl Monomial {
    pub fn unit(factors: usize) -> Self {
        Monomial(vec![Vec::new(); factors])
    }

    /// The weight `k` this monomial lives in.
    pub fn weight(&self) -> Vec<i64> {
        let m = self.0.len();
        (0..m).map(|j| self.0[j..].iter().map(|f| f.len() as i64).sum()).collect()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().flatten().flatten().copied()
    }

    pub fn count_where(&self, pred: impl Fn(usize) -> bool) -> usize {
        self.indices().filter(|&i| pred(i)).count()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices().max()
    }

    /// Product in the symmetric algebra: multisets are merged factorwise.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        if self.0.len() != other.0.len() {
            return Err(Error::DimensionMismatch(format!(
                "monomials with {} and {} factors",
                self.0.len(),
                other.0.len()
            )));
        }
        Ok(Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| {
                    let mut f: Vec<Vec<usize>> = a.iter().chain(b).cloned().collect();
                    f.sort();
                    f
                })
                .collect(),
        ))
    }

    /// Appends one `j`-subset to factor `j` (1-based).
    pub fn with_subset(&self, j: usize, s: Vec<usize>) -> Monomial {
        let mut out = self.clone();
        out.0[j - 1].push(s);
        out.0[j - 1].sort();
        out
    }

    /// Replaces one occurrence of index `old` (in subset `occ` of factor `j`,
    /// 0-based) by `new`; `None` if the wedge vanishes.
    pub fn replace(&self, j: usize, occ: usize, old: usize, new: usize) -> Option<(bool, Monomial)> {
        let s = &self.0[j][occ];
        let pos = s.iter().position(|&x| x == old)?;
        let mut t = s.clone();
        t[pos] = new;
        let (neg, t) = resort(t, pos)?;
        let mut out = self.clone();
        out.0[j][occ] = t;
        out.0[j].sort();
        Some((neg, out))
    }

    pub fn validate(&self, k: &[i64], ambient: usize) -> Result<()> {
        if self.0.len() != k.len() || self.weight() != k {
            return Err(Error::MalformedSection(format!("monomial {:?} does not have weight {k:?}", self.0)));
        }
        for (j, f) in self.0.iter().enumerate() {
            let mut prev: Option<&Vec<usize>> = None;
            for s in f {
                let sorted = s.windows(2).all(|w| w[0] < w[1]);
                if s.len() != j + 1 || !sorted || s.iter().any(|&x| x >= ambient) {
                    return Err(Error::MalformedSection(format!("bad {}-subset {s:?}", j + 1)));
                }
                if prev.is_some_and(|p| p > s) {
                    return Err(Error::MalformedSection(format!("factor {} is not sorted", j + 1)));
                }
                prev = Some(s);
            }
        }
        Ok(())
    }
}

pub fn check_weight(k: &[i64]) -> Result<()> {
    if k.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDominant(k.to_vec()));
    }
    if k.last().is_some_and(|&x| x < 0) {
        return Err(Error::WeightPrecondition(format!(
            "last entry of {k:?} is negative; the weight is not polynomial"
        )));
    }
    Ok(())
}

/// All basis monomials of weight `k` over the indices `0..ambient`.
pub fn basis(k: &[i64], ambient: usize) -> Result<Vec<Monomial>> {
    check_weight(k)?;
    let m = k.len();
    let mut out = vec![Monomial::unit(m)];
    for j in 1..=m {
        let a = (k[j - 1] - k.get(j).copied().unwrap_or(0)) as usize;
        let subs = subsets(ambient, j);
        let choices = multisets(subs.len(), a);
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for mono in &out {
            for c in &choices {
                let mut mo = mono.clone();
                mo.0[j - 1] = c.iter().map(|&i| subs[i].clone()).collect();
                next.push(mo);
            }
        }
        out = next;
    }
    Ok(out)
}

/// A section `sum_b c_b * b` of `Sym^k (x) delta^w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub k: Vec<i64>,
    pub w: i64,
    pub terms: BTreeMap<Monomial, TPoly>,
}

impl Section {
    pub fn zero(k: Vec<i64>, w: i64) -> Self {
        Section {
            k,
            w,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(k: Vec<i64>, w: i64, m: Monomial, c: TPoly) -> Self {
        let mut s = Section::zero(k, w);
        s.terms.insert(m, c);
        s
    }

    pub fn add_term(&mut self, m: Monomial, c: &TPoly, ring: &TruncatedRing) {
        let e = self.terms.entry(m).or_insert_with(|| ring.zero());
        *e = ring.add(e, c);
    }

    pub fn prune(&mut self, ring: &TruncatedRing) {
        self.terms.retain(|_, c| !ring.is_zero(c));
    }

    pub fn is_zero(&self, ring: &TruncatedRing) -> bool {
        self.terms.values().all(|c| ring.is_zero(c))
    }

    pub fn add(&self, other: &Section, ring: &TruncatedRing) -> Result<Section> {
        if self.k != other.k || self.w != other.w {
            return Err(Error::WeightPrecondition(format!(
                "cannot add sections of weights ({:?}, {}) and ({:?}, {})",
                self.k, self.w, other.k, other.w
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, ring);
        }
        out.prune(ring);
        Ok(out)
    }

    pub fn scale(&self, f: &TPoly, ring: &TruncatedRing) -> Section {
        let mut out = Section::zero(self.k.clone(), self.w);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), ring.mul(c, f));
        }
        out.prune(ring);
        out
    }

    /// Product `Sym^k (x) Sym^k' -> Sym^{k+k'}`, with delta exponents added.
    pub fn mul(&self, other: &Section, ring: &TruncatedRing) -> Result<Section> {
        if self.k.len() != other.k.len() {
            return Err(Error::WeightPrecondition(format!(
                "weights {:?} and {:?} have different lengths",
                self.k, other.k
            )));
        }
        let k = self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect();
        let mut out = Section::zero(k, self.w + other.w);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb)?, &ring.mul(ca, cb), ring);
            }
        }
        out.prune(ring);
        Ok(out)
    }

    /// Equality of weights and of all coefficients below degree `deg`.
    pub fn eq_below(&self, other: &Section, deg: usize, ring: &TruncatedRing) -> bool {
        if self.k != other.k || self.w != other.w {
            return false;
        }
        let zero = ring.zero();
        self.terms
            .keys()
            .chain(other.terms.keys())
            .all(|m| ring.eq_below(self.terms.get(m).unwrap_or(&zero), other.terms.get(m).unwrap_or(&zero), deg))
    }

    pub fn validate(&self, ambient: usize) -> Result<()> {
        check_weight(&self.k)?;
        for m in self.terms.keys() {
            m.validate(&self.k, ambient)?;
        }
        Ok(())
    }

    /// Replaces `w` by its residue mod `p - 1`, using `delta^(p-1) = O`.
    pub fn reduce_w(&self, p: u64) -> Section {
        let mut out = self.clone();
        out.w = self.w.rem_euclid(p as i64 - 1);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::binomial;

    #[test]
    fn basis_size_is_product_of_sym_dims() {
        let k = [3, 1, 1];
        let b = basis(&k, 4).unwrap();
        // Sym^2(4) * Sym^0(6) * Sym^1(4)
        assert_eq!(b.len(), 10 * 4);
        assert!(b.iter().all(|m| m.weight() == k));
        let b = basis(&[2, 2], 3).unwrap();
        assert_eq!(b.len(), binomial(3 + 1, 2));
    }

    #[test]
    fn replace_signs() {
        let m = Monomial(vec![vec![], vec![vec![0, 3]]]);
        let (neg, r) = m.replace(1, 0, 3, 1).unwrap();
        assert!(!neg);
        assert_eq!(r.0[1][0], vec![0, 1]);
        let m = Monomial(vec![vec![], vec![], vec![vec![1, 2, 3]]]);
        let (neg, r) = m.replace(2, 0, 3, 0).unwrap();
        // e1 e2 e0 -> e0 e1 e2 is an even permutation
        assert!(!neg);
        assert_eq!(r.0[2][0], vec![0, 1, 2]);
        let (neg, _) = m.replace(2, 0, 2, 4).unwrap();
        assert!(neg);
        assert!(m.replace(2, 0, 3, 2).is_none());
    }

    #[test]
    fn bad_weights_rejected() {
        assert!(matches!(basis(&[1, 2], 3), Err(Error::NotDominant(_))));
        assert!(matches!(basis(&[1, -1], 3), Err(Error::WeightPrecondition(_))));
    }
}

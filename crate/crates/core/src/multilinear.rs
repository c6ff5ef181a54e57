//! Monomial bases of exterior and symmetric powers, and the multiplication
//! maps between them.

use std::collections::BTreeMap;

use crate::matrix::{determinant, Matrix};
use crate::ring::Ring;

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All multisets of size `k` from `0..n`, as non-decreasing tuples in
/// lexicographic order.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Sign of the permutation sorting the concatenation of two disjoint sorted
/// index lists, together with the sorted union; `None` if they meet.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((inversions % 2 == 1, merged))
}

/// An element of `wedge^k` of an `n`-dimensional space in the subset basis.
pub fn wedge_of_vectors<R: Ring>(vectors: &[Vec<R::Elem>], n: usize, ring: &R) -> Vec<R::Elem> {
    let k = vectors.len();
    subsets(n, k)
        .iter()
        .map(|s| {
            let minor = Matrix::from_fn(k, k, |i, j| vectors[j][s[i]].clone());
            determinant(&minor, ring)
        })
        .collect()
}

/// Product `wedge^j x wedge^l -> wedge^(j+l)` in subset coordinates.
pub fn wedge_mul<R: Ring>(
    x: &[R::Elem],
    j: usize,
    y: &[R::Elem],
    l: usize,
    n: usize,
    ring: &R,
) -> Vec<R::Elem> {
    let (bj, bl, bt) = (subsets(n, j), subsets(n, l), subsets(n, j + l));
    let index: BTreeMap<Vec<usize>, usize> = bt.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = vec![ring.zero(); bt.len()];
    for (a, sa) in bj.iter().enumerate() {
        if ring.is_zero(&x[a]) {
            continue;
        }
        for (b, sb) in bl.iter().enumerate() {
            if ring.is_zero(&y[b]) {
                continue;
            }
            if let Some((neg, merged)) = merge_sign(sa, sb) {
                let mut t = ring.mul(&x[a], &y[b]);
                if neg {
                    t = ring.neg(&t);
                }
                let i = index[&merged];
                out[i] = ring.add(&out[i], &t);
            }
        }
    }
    out
}

/// Polynomial in `n` commuting variables, keyed by sorted variable lists.
pub type SymPoly<E> = BTreeMap<Vec<usize>, E>;

pub fn sym_mul<R: Ring>(a: &SymPoly<R::Elem>, b: &SymPoly<R::Elem>, ring: &R) -> SymPoly<R::Elem> {
    let mut out: SymPoly<R::Elem> = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<usize> = ma.iter().chain(mb).copied().collect();
            m.sort_unstable();
            let t = ring.mul(ca, cb);
            let e = out.entry(m).or_insert_with(|| ring.zero());
            *e = ring.add(e, &t);
        }
    }
    out.retain(|_, c| !ring.is_zero(c));
    out
}

pub fn linear_form<R: Ring>(v: &[R::Elem], ring: &R) -> SymPoly<R::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| (vec![i], c.clone()))
        .collect()
}

/// The product `v_1 ... v_k` in `Sym^k` of an `n`-space, in the multiset
/// basis of [`multisets`].
pub fn sym_product_of_vectors<R: Ring>(vectors: &[Vec<R::Elem>], n: usize, ring: &R) -> Vec<R::Elem> {
    let mut poly: SymPoly<R::Elem> = BTreeMap::from([(Vec::new(), ring.one())]);
    for v in vectors {
        poly = sym_mul(&poly, &linear_form(v, ring), ring);
    }
    multisets(n, vectors.len())
        .iter()
        .map(|m| poly.get(m).cloned().unwrap_or_else(|| ring.zero()))
        .collect()
}

//! Finite descending filtrations on explicit vector spaces and the
//! constructions built from them: tensor products, duals, Koszul
//! filtrations on exterior powers and filtrations on symmetric powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilinear::{binomial, multisets, subsets, sym_product_of_vectors, wedge_of_vectors};
use crate::ring::Field;
use crate::subspace::Subspace;

/// `F^0 = ambient ⊇ F^1 ⊇ ... ⊇ F^{r+1} = 0`; `steps` holds all `r + 2`
/// members.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredModule<F: Field> {
    field: F,
    dim: usize,
    steps: Vec<Subspace<F::Elem>>,
}

/// Graded dimensions together with the ambient dimension, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub ambient: usize,
    pub graded: Vec<usize>,
}

impl<F: Field + PartialEq> FilteredModule<F> {
    pub fn new(field: F, dim: usize, mut steps: Vec<Subspace<F::Elem>>) -> Result<Self> {
        if steps.first().map(Subspace::dim) != Some(dim) {
            return Err(Error::Filtration("first step must be the whole space".into()));
        }
        if steps.last().map(Subspace::dim) != Some(0) {
            steps.push(Subspace::zero(dim));
        }
        if steps.len() == 1 {
            steps.push(Subspace::zero(dim));
        }
        for w in steps.windows(2) {
            if w[0].ambient() != dim || !w[0].contains(&w[1], &field) {
                return Err(Error::Filtration("steps are not descending".into()));
            }
        }
        Ok(FilteredModule { field, dim, steps })
    }

    /// `F^0 = V`, `F^1 = 0`.
    pub fn trivial(field: F, dim: usize) -> Self {
        let full = Subspace::full(dim, &field);
        FilteredModule {
            dim,
            steps: vec![full, Subspace::zero(dim)],
            field,
        }
    }

    /// The filtration with `F^i` spanned by the first `sizes[i]` standard
    /// basis vectors; `sizes` must be non-increasing and start at `dim`.
    pub fn coordinate(field: F, dim: usize, sizes: &[usize]) -> Result<Self> {
        let steps = sizes
            .iter()
            .map(|&s| Subspace::coordinate(dim, &(0..s).collect::<Vec<_>>(), &field))
            .collect();
        Self::new(field, dim, steps)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `F^i`, zero beyond the last step.
    pub fn step(&self, i: usize) -> Subspace<F::Elem> {
        self.steps.get(i).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn steps(&self) -> &[Subspace<F::Elem>] {
        &self.steps
    }

    /// The index `r` with `F^{r+1} = 0` the last step.
    pub fn top(&self) -> usize {
        self.steps.len() - 2
    }

    /// `dim F^i - dim F^{i+1}` for `i = 0..=r`.
    pub fn graded_dims(&self) -> Vec<usize> {
        self.steps.windows(2).map(|w| w[0].dim() - w[1].dim()).collect()
    }

    pub fn report(&self) -> GradedDims {
        GradedDims {
            ambient: self.dim,
            graded: self.graded_dims(),
        }
    }

    /// Vectors of `F^i` whose images form a basis of `F^i / F^{i+1}`.
    pub fn graded_basis(&self, i: usize) -> Vec<Vec<F::Elem>> {
        let next = self.step(i + 1);
        let mut acc = next.clone();
        let mut out = Vec::new();
        for v in self.step(i).basis() {
            let grown = acc.sum(&Subspace::span(self.dim, std::slice::from_ref(v), &self.field), &self.field);
            if grown.dim() > acc.dim() {
                out.push(v.clone());
                acc = grown;
            }
        }
        out
    }

    /// A basis adapted to the filtration, each vector tagged with its level.
    pub fn adapted_basis(&self) -> Vec<(usize, Vec<F::Elem>)> {
        (0..=self.top())
            .flat_map(|i| self.graded_basis(i).into_iter().map(move |v| (i, v)))
            .collect()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("filtrations over different fields".into()));
        }
        Ok(())
    }
}

fn kron<F: Field>(a: &[F::Elem], b: &[F::Elem], field: &F) -> Vec<F::Elem> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| field.mul(x, y)))
        .collect()
}

/// `F^k(A ⊗ B) = sum_{i+j=k} F^i(A) ⊗ F^j(B)`, in the basis
/// `a_i ⊗ b_j -> i * dim B + j`.
pub fn tensor_filtration<F: Field + PartialEq>(
    a: &FilteredModule<F>,
    b: &FilteredModule<F>,
) -> Result<FilteredModule<F>> {
    a.check_field(b)?;
    let field = a.field.clone();
    let dim = a.dim * b.dim;
    let top = a.top() + b.top();
    let steps = (0..=top + 1)
        .map(|k| {
            let mut vecs = Vec::new();
            for i in 0..=k.min(a.top() + 1) {
                let j = k - i;
                let (fa, fb) = (a.step(i), b.step(j));
                for u in fa.basis() {
                    for v in fb.basis() {
                        vecs.push(kron(u, v, &field));
                    }
                }
            }
            Subspace::span(dim, &vecs, &field)
        })
        .collect();
    FilteredModule::new(field, dim, steps)
}

/// Iterated tensor product of several filtrations.
pub fn tensor_all<F: Field + PartialEq>(parts: &[FilteredModule<F>]) -> Result<FilteredModule<F>> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Filtration("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, x| tensor_filtration(&acc, x))
}

/// Predicted graded dimensions of a tensor product:
/// `sum_{|j| = k} prod_l dim gr^{j_l}(A_l)` over multi-indices.
pub fn tensor_graded_formula(graded: &[Vec<usize>]) -> Vec<usize> {
    let top: usize = graded.iter().map(|g| g.len() - 1).sum();
    let mut out = vec![0; top + 1];
    fn go(graded: &[Vec<usize>], level: usize, prod: usize, out: &mut [usize]) {
        match graded.split_first() {
            None => out[level] += prod,
            Some((g, rest)) => {
                for (j, &d) in g.iter().enumerate() {
                    if d > 0 {
                        go(rest, level + j, prod * d, out);
                    }
                }
            }
        }
    }
    go(graded, 0, 1, &mut out);
    out
}

/// `F^i(A^∨) = (A / F^{r-i+1})^∨`, realised as the annihilator of
/// `F^{r+1-i}` under the standard dot product.
pub fn dual_filtration<F: Field + PartialEq>(a: &FilteredModule<F>) -> FilteredModule<F> {
    let r = a.top();
    let steps = (0..=r + 1).map(|i| a.step(r + 1 - i).annihilator(&a.field)).collect();
    FilteredModule::new(a.field.clone(), a.dim, steps).expect("annihilators of a flag form a flag")
}

/// `K^i(wedge^j F) = image of wedge^i F' ⊗ wedge^{j-i} F` in the subset
/// basis of `wedge^j`.
pub fn koszul_filtration<F: Field + PartialEq>(
    field: &F,
    sub: &Subspace<F::Elem>,
    j: usize,
) -> Result<FilteredModule<F>> {
    let n = sub.ambient();
    if j > n {
        return Err(Error::OutOfRange(format!("wedge^{j} of a {n}-dimensional space")));
    }
    let dim = binomial(n, j);
    let full = Subspace::full(n, field);
    let sub_b = sub.basis();
    let full_b = full.basis();
    let steps = (0..=j + 1)
        .map(|i| {
            if i > j || i > sub_b.len() {
                return Subspace::zero(dim);
            }
            let mut vecs = Vec::new();
            for s in subsets(sub_b.len(), i) {
                for t in subsets(n, j - i) {
                    let mut factors: Vec<Vec<F::Elem>> = s.iter().map(|&x| sub_b[x].clone()).collect();
                    factors.extend(t.iter().map(|&x| full_b[x].clone()));
                    vecs.push(wedge_of_vectors(&factors, n, field));
                }
            }
            Subspace::span(dim, &vecs, field)
        })
        .collect();
    FilteredModule::new(field.clone(), dim, steps)
}

/// `dim gr^i = C(dim F', i) * C(dim F - dim F', j - i)`.
pub fn koszul_graded_formula(n: usize, sub_dim: usize, j: usize) -> Vec<usize> {
    (0..=j)
        .map(|i| if i <= sub_dim { binomial(sub_dim, i) * binomial(n - sub_dim, j - i) } else { 0 })
        .collect()
}

/// Exponent vectors `(e_0, ..., e_r)` with `sum e_i = j` and
/// `sum i * e_i = k`.
pub fn monomial_set(k: usize, j: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r + 1);
    fn go(i: usize, r: usize, left: usize, weight: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == r {
            if weight == i * left {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for e in 0..=left {
            if i * e > weight {
                break;
            }
            cur.push(e);
            go(i + 1, r, left - e, weight - i * e, cur, out);
            cur.pop();
        }
    }
    go(0, r, j, k, &mut cur, &mut out);
    out
}

/// `F^k(Sym^j A) = sum_{λ ∈ Λ(k)} image of ⊗_i Sym^{e_i(λ)} F^i`, in the
/// multiset basis of `Sym^j`.
pub fn sym_filtration<F: Field + PartialEq>(a: &FilteredModule<F>, j: usize) -> FilteredModule<F> {
    let field = &a.field;
    let n = a.dim;
    let r = a.top();
    let dim = multisets(n, j).len();
    let steps: Vec<Subspace<F::Elem>> = (0..=j * r + 1)
        .map(|k| {
            let mut vecs = Vec::new();
            for lam in monomial_set(k, j, r) {
                // Choose e_i vectors (with repetition) from a basis of F^i.
                let choices: Vec<Vec<Vec<usize>>> = lam
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| multisets(a.step(i).dim(), e))
                    .collect();
                let mut stack: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new()];
                for (i, opts) in choices.iter().enumerate() {
                    let basis = a.step(i);
                    let mut next = Vec::new();
                    for partial in &stack {
                        for pick in opts {
                            let mut f = partial.clone();
                            f.extend(pick.iter().map(|&x| basis.basis()[x].clone()));
                            next.push(f);
                        }
                    }
                    stack = next;
                }
                for factors in stack {
                    vecs.push(sym_product_of_vectors(&factors, n, field));
                }
            }
            Subspace::span(dim, &vecs, field)
        })
        .collect();
    FilteredModule::new(field.clone(), dim, steps).expect("symmetric power of a flag is a flag")
}

/// `dim gr^k = sum_{λ ∈ Λ(k)} prod_i C(g_i + e_i - 1, e_i)`.
pub fn sym_graded_formula(graded: &[usize], j: usize) -> Vec<usize> {
    let r = graded.len() - 1;
    (0..=j * r)
        .map(|k| {
            monomial_set(k, j, r)
                .iter()
                .map(|lam| {
                    lam.iter()
                        .zip(graded)
                        .map(|(&e, &g)| if e == 0 { 1 } else if g == 0 { 0 } else { binomial(g + e - 1, e) })
                        .product::<usize>()
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf;
    use crate::ring::Ring;

    #[test]
    fn trivial_tensor_is_trivial() {
        let f = Gf::prime(3).unwrap();
        let a = FilteredModule::trivial(f.clone(), 2);
        let b = FilteredModule::trivial(f.clone(), 3);
        let t = tensor_filtration(&a, &b).unwrap();
        assert_eq!(t.graded_dims(), vec![6]);
    }

    #[test]
    fn dual_of_two_step() {
        let f = Gf::prime(5).unwrap();
        let a = FilteredModule::coordinate(f.clone(), 4, &[4, 2, 0]).unwrap();
        let d = dual_filtration(&a);
        assert_eq!(d.graded_dims(), vec![2, 2]);
        let a = FilteredModule::coordinate(f.clone(), 4, &[4, 3, 0]).unwrap();
        assert_eq!(dual_filtration(&a).graded_dims(), vec![3, 1]);
        assert_eq!(dual_filtration(&dual_filtration(&a)).graded_dims(), a.graded_dims());
    }

    #[test]
    fn koszul_examples() {
        let f = Gf::prime(2).unwrap();
        let sub = Subspace::coordinate(4, &[0, 1], &f);
        let k = koszul_filtration(&f, &sub, 2).unwrap();
        assert_eq!(k.graded_dims(), vec![1, 4, 1]);
        let top = koszul_filtration(&f, &sub, 4).unwrap();
        assert_eq!(top.graded_dims(), vec![0, 0, 1, 0, 0]);
        let z = koszul_filtration(&f, &Subspace::zero(4), 2).unwrap();
        assert_eq!(z.graded_dims()[0], 6);
        assert!(koszul_filtration(&f, &sub, 5).is_err());
    }

    #[test]
    fn sym_examples() {
        let f = Gf::prime(3).unwrap();
        let a = FilteredModule::coordinate(f.clone(), 2, &[2, 1, 0]).unwrap();
        let s = sym_filtration(&a, 2);
        assert_eq!(s.graded_dims(), vec![1, 1, 1]);
        let s1 = sym_filtration(&a, 1);
        assert_eq!(s1.graded_dims(), a.graded_dims());
        assert_eq!(monomial_set(1, 2, 1), vec![vec![1, 1]]);
    }

    #[test]
    fn graded_basis_spans_quotients() {
        let f = Gf::prime(7).unwrap();
        let e = |x: i64| f.from_i64(x);
        let w1 = Subspace::span(3, &[vec![e(1), e(2), e(3)], vec![e(0), e(1), e(1)]], &f);
        let w2 = Subspace::span(3, &[vec![e(1), e(3), e(4)]], &f);
        let a = FilteredModule::new(f.clone(), 3, vec![Subspace::full(3, &f), w1, w2]).unwrap();
        assert_eq!(a.graded_dims(), vec![1, 1, 1]);
        let basis: Vec<Vec<_>> = a.adapted_basis().into_iter().map(|(_, v)| v).collect();
        assert_eq!(Subspace::span(3, &basis, &f).dim(), 3);
    }
}

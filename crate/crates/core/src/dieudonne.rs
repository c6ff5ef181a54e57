//! Dieudonne modules of `BT_1` group schemes with `O_E`-action of signature
//! `(n-1, 1)`.
//!
//! Coordinates: index `i - 1` is `e_i` (the sigma component), index
//! `n + j - 1` is `f_j` (the sigma-bar component). `F` acts as
//! `x -> M_F sigma(x)`. `V` is the linear map `D -> D^(p)` with matrix `M_V`,
//! so that as a `sigma^-1`-semilinear endomorphism of `D` it is
//! `x -> sigma^-1(M_V x)`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::matrix::{determinant, inverse, Matrix};
use crate::ring::Ring;
use crate::semilinear::SemilinearMap;
use crate::subspace::Subspace;
use crate::weyl::Shuffle;

/// Default cap on the number of candidate matrices enumerated by
/// [`brute_force_isomorphic`]; `EO_THETA_BUDGET` overrides it.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

pub const BUDGET_ENV: &str = "EO_THETA_BUDGET";

#[derive(Clone, Debug, PartialEq)]
pub struct DieudonneModule {
    pub field: Gf,
    pub n: usize,
    pub f: SemilinearMap,
    pub v: SemilinearMap,
    pub pairing: Matrix<GfElem>,
    pub sigma: Vec<usize>,
    pub sigmabar: Vec<usize>,
}

pub fn e(i: usize) -> usize {
    i - 1
}

pub fn f_index(n: usize, j: usize) -> usize {
    n + j - 1
}

/// The standard module of the stratum `w_r`.
pub fn standard_module(n: usize, r: usize, field: &Gf) -> Result<DieudonneModule> {
    if n < 2 || r < 1 || r > n {
        return Err(Error::OutOfRange(format!("standard module needs n >= 2, 1 <= r <= n; got n={n}, r={r}")));
    }
    let fd = field;
    let dim = 2 * n;
    let fi = |j| f_index(n, j);
    let mut mf = Matrix::zeros(dim, dim, fd);
    let mut mv = Matrix::zeros(dim, dim, fd);
    // Column c holds the image of basis vector c.
    mf.set(e(1), e(r), fd.one());
    for i in 1..=n {
        if i < r {
            mf.set(fi(i + 1), fi(i), fd.one());
        } else if i > r {
            mf.set(fi(i), fi(i), fd.one());
        }
    }
    for i in 2..=n {
        if i <= r {
            mv.set(e(i - 1), e(i), fd.one());
        } else {
            mv.set(e(i), e(i), fd.one());
        }
    }
    mv.set(fi(r), fi(1), fd.one());
    let pairing = Matrix::from_fn(dim, dim, |a, b| {
        if a < n && b == a + n {
            fd.one()
        } else if a >= n && b + n == a {
            fd.neg(&fd.one())
        } else {
            fd.zero()
        }
    });
    Ok(DieudonneModule {
        field: fd.clone(),
        n,
        f: SemilinearMap::new(fd.clone(), 1, mf),
        v: SemilinearMap::new(fd.clone(), 1, mv),
        pairing,
        sigma: (0..n).collect(),
        sigmabar: (n..2 * n).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bt1Report {
    pub checks: Vec<Check>,
}

impl Bt1Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRank {
    pub total: usize,
    pub sigmabar: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EoClass {
    pub r: usize,
    pub shuffle: Shuffle,
    pub length: usize,
    pub p_rank: PRank,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlagStep {
    pub space: Subspace<GfElem>,
    pub sigma_dim: usize,
    pub sigmabar_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub steps: Vec<FlagStep>,
}

impl Flag {
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.space.dim()).collect()
    }

    /// CM dimensions of each graded piece `W_{i+1} / W_i`.
    pub fn graded_tags(&self) -> Vec<(usize, usize)> {
        self.steps
            .windows(2)
            .map(|w| (w[1].sigma_dim - w[0].sigma_dim, w[1].sigmabar_dim - w[0].sigmabar_dim))
            .collect()
    }
}

impl DieudonneModule {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `V` as the `sigma^-1`-semilinear endomorphism `x -> sigma^-1(M_V x)`.
    pub fn v_semilinear(&self) -> SemilinearMap {
        SemilinearMap::new(self.field.clone(), -1, self.v.matrix.frobenius(-1, &self.field))
    }

    pub fn sigma_part(&self) -> Subspace<GfElem> {
        Subspace::coordinate(self.dim(), &self.sigma, &self.field)
    }

    pub fn sigmabar_part(&self) -> Subspace<GfElem> {
        Subspace::coordinate(self.dim(), &self.sigmabar, &self.field)
    }

    fn block_preserving(&self, m: &Matrix<GfElem>) -> bool {
        let fd = &self.field;
        let in_sigma: Vec<bool> = (0..self.dim()).map(|i| self.sigma.contains(&i)).collect();
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| in_sigma[i] == in_sigma[j] || fd.is_zero(m.get(i, j)))
        })
    }

    pub fn verify_bt1(&self) -> Bt1Report {
        let fd = &self.field;
        let dim = self.dim();
        let mut checks = Vec::new();
        let mut push = |name: &str, passed: bool| {
            checks.push(Check {
                name: name.to_string(),
                passed,
            })
        };
        let shapes_ok = [&self.f.matrix, &self.v.matrix, &self.pairing]
            .iter()
            .all(|m| m.rows() == dim && m.cols() == dim)
            && self.sigma.len() == self.n
            && self.sigmabar.len() == self.n
            && {
                let all: BTreeSet<usize> = self.sigma.iter().chain(&self.sigmabar).copied().collect();
                all.len() == dim && all.iter().all(|&i| i < dim)
            };
        push("dimensions", shapes_ok);
        if !shapes_ok {
            return Bt1Report { checks };
        }
        push("F twist is 1", self.f.twist == 1);
        push("V twist is 1", self.v.twist == 1);
        push("F preserves CM components", self.block_preserving(&self.f.matrix));
        push("V preserves CM components", self.block_preserving(&self.v.matrix));
        let ker_f = self.f.kernel();
        let im_f = self.f.image();
        let vs = self.v_semilinear();
        let ker_v = vs.kernel();
        let im_v = vs.image();
        push("ker F = im V", ker_f == im_v);
        push("ker V = im F", ker_v == im_f);
        push("pairing is perfect", !fd.is_zero(&determinant(&self.pairing, fd)));
        Bt1Report { checks }
    }

    fn require_bt1(&self) -> Result<()> {
        let rep = self.verify_bt1();
        match rep.first_failure() {
            None => Ok(()),
            Some(name) => Err(Error::NotBt1(name.to_string())),
        }
    }

    /// Stable rank of Frobenius, on `D` and on the sigma-bar component.
    pub fn p_rank(&self) -> Result<PRank> {
        self.require_bt1()?;
        let big = self.f.power(2 * self.n as u32);
        let total = big.rank();
        let cols: Vec<usize> = self.sigmabar.clone();
        let rows: Vec<usize> = (0..self.dim()).collect();
        let restricted = SemilinearMap::new(self.field.clone(), big.twist, big.matrix.submatrix(&rows, &cols));
        Ok(PRank {
            total,
            sigmabar: restricted.rank(),
        })
    }

    /// CM dimensions of `ker F`; signature `(n-1, 1)` means `(n-1, 1)`.
    pub fn hodge_signature(&self) -> (usize, usize) {
        let k = self.f.kernel();
        (
            k.intersection(&self.sigma_part(), &self.field).dim(),
            k.intersection(&self.sigmabar_part(), &self.field).dim(),
        )
    }

    pub fn eo_class(&self) -> Result<EoClass> {
        let sig = self.hodge_signature();
        if sig != (self.n - 1, 1) {
            return Err(Error::SignatureMismatch(format!(
                "ker F has CM dimensions {sig:?}, expected ({}, 1)",
                self.n - 1
            )));
        }
        let pr = self.p_rank()?;
        if pr.sigmabar >= self.n {
            return Err(Error::SignatureMismatch(format!(
                "sigma-bar p-rank {} is not below n = {}",
                pr.sigmabar, self.n
            )));
        }
        let r = self.n - pr.sigmabar;
        let shuffle = Shuffle::w(self.n, r)?;
        Ok(EoClass {
            r,
            length: shuffle.length(),
            shuffle,
            p_rank: pr,
        })
    }

    fn apply_f(&self, w: &Subspace<GfElem>) -> Subspace<GfElem> {
        w.frobenius(1, &self.field).image(&self.f.matrix, &self.field)
    }

    /// `{x : V x in W^(p)}`.
    fn v_preimage(&self, w: &Subspace<GfElem>) -> Subspace<GfElem> {
        w.frobenius(1, &self.field).preimage(&self.v.matrix, &self.field)
    }

    fn tag(&self, space: Subspace<GfElem>) -> FlagStep {
        FlagStep {
            sigma_dim: space.intersection(&self.sigma_part(), &self.field).dim(),
            sigmabar_dim: space.intersection(&self.sigmabar_part(), &self.field).dim(),
            space,
        }
    }

    /// Smallest set of subspaces containing `0` and `D` and closed under
    /// `F` and `V`-preimage, sorted by dimension.
    pub fn canonical_filtration(&self) -> Result<Flag> {
        self.require_bt1()?;
        let fd = &self.field;
        let dim = self.dim();
        let mut found = vec![Subspace::zero(dim), Subspace::full(dim, fd)];
        let mut queue = found.clone();
        while let Some(w) = queue.pop() {
            for next in [self.apply_f(&w), self.v_preimage(&w)] {
                if !found.contains(&next) {
                    found.push(next.clone());
                    queue.push(next);
                    if found.len() > dim + 1 {
                        return Err(Error::Filtration(format!(
                            "closure has more than {} members",
                            dim + 1
                        )));
                    }
                }
            }
        }
        found.sort_by_key(Subspace::dim);
        for w in found.windows(2) {
            if w[0].dim() == w[1].dim() || !w[1].contains(&w[0], fd) {
                return Err(Error::Filtration("closure is not a chain".into()));
            }
        }
        Ok(Flag {
            steps: found.into_iter().map(|s| self.tag(s)).collect(),
        })
    }

    /// Ranks of `im F` and `im V` on the sigma component.
    pub fn delta_torsion_ranks(&self) -> (usize, usize) {
        let s = self.sigma_part();
        let fd = &self.field;
        (
            self.f.image().intersection(&s, fd).dim(),
            self.v_semilinear().image().intersection(&s, fd).dim(),
        )
    }

    /// Transport along `x' = g x`.
    pub fn conjugate(&self, g: &Matrix<GfElem>) -> Result<DieudonneModule> {
        let fd = &self.field;
        let g_inv = inverse(g, fd).ok_or_else(|| Error::NotUnit("conjugating matrix is singular".into()))?;
        let pairing = g_inv.transpose().mul(&self.pairing, fd).mul(&g_inv, fd);
        Ok(DieudonneModule {
            field: fd.clone(),
            n: self.n,
            f: self.f.conjugate(g)?,
            v: self.v.conjugate_twisted(g)?,
            pairing,
            sigma: self.sigma.clone(),
            sigmabar: self.sigmabar.clone(),
        })
    }

    /// Block-diagonal `diag(g_sigma, g_sigmabar)` in this module's coordinates.
    pub fn equivariant_matrix(&self, g_sigma: &Matrix<GfElem>, g_sigmabar: &Matrix<GfElem>) -> Matrix<GfElem> {
        let fd = &self.field;
        let mut g = Matrix::zeros(self.dim(), self.dim(), fd);
        for (bi, &i) in self.sigma.iter().enumerate() {
            for (bj, &j) in self.sigma.iter().enumerate() {
                g.set(i, j, *g_sigma.get(bi, bj));
            }
        }
        for (bi, &i) in self.sigmabar.iter().enumerate() {
            for (bj, &j) in self.sigmabar.iter().enumerate() {
                g.set(i, j, *g_sigmabar.get(bi, bj));
            }
        }
        g
    }

    /// A uniformly random equivariant base change of `self`, with the
    /// matrix used.
    pub fn random_conjugate<R: Rng>(&self, rng: &mut R) -> (DieudonneModule, Matrix<GfElem>) {
        let gs = random_invertible(self.n, &self.field, rng);
        let gb = random_invertible(self.n, &self.field, rng);
        let g = self.equivariant_matrix(&gs, &gb);
        let d = self.conjugate(&g).expect("invertible by construction");
        (d, g)
    }

    fn block(&self, m: &Matrix<GfElem>, idx: &[usize]) -> Matrix<GfElem> {
        m.submatrix(idx, idx)
    }
}

pub fn random_invertible<R: Rng>(n: usize, field: &Gf, rng: &mut R) -> Matrix<GfElem> {
    let q = field.order() as u32;
    loop {
        let m = Matrix::from_fn(n, n, |_, _| field.from_code(rng.gen_range(0..q)).expect("code in range"));
        if !field.is_zero(&determinant(&m, field)) {
            return m;
        }
    }
}

/// The enumeration budget, read from `EO_THETA_BUDGET` when set.
pub fn enumeration_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn all_matrices(n: usize, field: &Gf) -> impl Iterator<Item = Matrix<GfElem>> + '_ {
    let q = field.order();
    let total = q.pow((n * n) as u32);
    (0..total).map(move |mut code| {
        Matrix::from_fn(n, n, |_, _| {
            let c = (code % q) as u32;
            code /= q;
            field.from_code(c).expect("code in range")
        })
    })
}

/// Exhaustive search for an equivariant isomorphism `D1 -> D2`, i.e.
/// `g = diag(g_sigma, g_sigmabar)` with `g F_1 = F_2 g`, `g V_1 = V_2 g`,
/// and pairings matching up to a non-zero scalar.
pub fn brute_force_isomorphic(d1: &DieudonneModule, d2: &DieudonneModule) -> Result<bool> {
    brute_force_isomorphic_with_budget(d1, d2, enumeration_budget())
}

pub fn brute_force_isomorphic_with_budget(d1: &DieudonneModule, d2: &DieudonneModule, budget: u64) -> Result<bool> {
    if d1.n != d2.n {
        return Ok(false);
    }
    if d1.field != d2.field {
        return Err(Error::FieldMismatch("modules over different fields".into()));
    }
    if d1.sigma != d2.sigma || d1.sigmabar != d2.sigmabar {
        return Err(Error::DimensionMismatch("modules use different CM index sets".into()));
    }
    d1.require_bt1()?;
    d2.require_bt1()?;
    let fd = &d1.field;
    let n = d1.n;
    let per_block = fd.order().checked_pow((n * n) as u32);
    match per_block {
        Some(c) if c.saturating_mul(2) <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{} candidate matrices per block over F_{} with n = {n} exceed budget {budget}",
                per_block.map_or("too many".to_string(), |c| c.to_string()),
                fd.order()
            )))
        }
    }
    let candidates = |idx: &[usize]| -> Vec<Matrix<GfElem>> {
        let (f1, f2) = (d1.block(&d1.f.matrix, idx), d2.block(&d2.f.matrix, idx));
        let (v1, v2) = (d1.block(&d1.v.matrix, idx), d2.block(&d2.v.matrix, idx));
        all_matrices(n, fd)
            .filter(|g| {
                // g F_1 sigma(g)^-1 = F_2 and sigma(g) V_1 g^-1 = V_2.
                let sg = g.frobenius(1, fd);
                !fd.is_zero(&determinant(g, fd))
                    && g.mul(&f1, fd) == f2.mul(&sg, fd)
                    && sg.mul(&v1, fd) == v2.mul(g, fd)
            })
            .collect()
    };
    let cs = candidates(&d1.sigma);
    if cs.is_empty() {
        return Ok(false);
    }
    let cb = candidates(&d1.sigmabar);
    let scalars: Vec<GfElem> = fd.elements().filter(|x| !fd.is_zero(x)).collect();
    for gs in &cs {
        for gb in &cb {
            let g = d1.equivariant_matrix(gs, gb);
            // P_2 = c g^-T P_1 g^-1, i.e. g^T P_2 g = c P_1.
            let lhs = g.transpose().mul(&d2.pairing, fd).mul(&g, fd);
            if scalars.iter().any(|c| lhs == d1.pairing.scale(c, fd)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

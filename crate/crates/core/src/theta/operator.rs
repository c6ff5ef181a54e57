//! The theta operator on a formal model and the identities it satisfies.
//!
//! `theta` is the composite
//!
//! ```text
//! gr S^k(omega) (x) delta^w --nabla--> gr S^k(H) (x) delta^w (x) Omega^1
//!   --A_r p_ur--> gr S^k(omega) (x) det(omega_mu)^(p-1) (x) Omega^1
//!   --ks^-1--> ... (x) omega_mu (x) det(omega) (x) delta^-1
//!   --mult--> gr S^{k+Delta_r}(omega) (x) delta^(w-1)
//! ```
//!
//! `delta` is identified with `det H`, so it carries the connection
//! `tr(Gamma)`. Outputs are exact below the truncation degree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{adjugate, Matrix};
use crate::multilinear::wedge_of_vectors;
use crate::ring::{Frobenius, Ring};
use crate::weyl::{delta_shift, hasse_weight, weight_add};

use super::model::{invert, FormalModel};
use super::section::{basis, check_weight, Monomial, Section};
use super::truncated::TPoly;

/// How `A_r p_ur` sends `e_n` into `omega_mu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionRoute {
    /// `adj(M_mu) M_{mu,n}`: ring operations only.
    Adjugate,
    /// `A_r * M_mu^-1 M_{mu,n}`: needs `A_r` to be a unit.
    Inverse,
}

/// Coordinates of `A_r p_ur(e_n)` on `omega_mu`.
pub fn projected_last(model: &FormalModel, route: ProjectionRoute) -> Result<Vec<TPoly>> {
    let ring = model.ring();
    let mu: Vec<usize> = model.mu().collect();
    let block = model.v().submatrix(&mu, &mu);
    let col: Vec<TPoly> = mu.iter().map(|&i| model.v().get(i, model.last()).clone()).collect();
    let solve = match route {
        ProjectionRoute::Adjugate => adjugate(&block, ring),
        ProjectionRoute::Inverse => invert(&block, ring)?.scale(&model.hasse_section(), ring),
    };
    Ok(solve.mul_vec(&col, ring))
}

/// `A_r * Sym^k(p_ur)` on one monomial with at most one `e_n`.
fn project_monomial(model: &FormalModel, last_image: &[TPoly], hasse: &TPoly, m: &Monomial) -> Vec<(Monomial, TPoly)> {
    let ring = model.ring();
    let last = model.last();
    let mut loc = None;
    for (j, f) in m.0.iter().enumerate() {
        for (occ, s) in f.iter().enumerate() {
            if s.contains(&last) {
                loc = Some((j, occ));
            }
        }
    }
    let Some((j, occ)) = loc else {
        return vec![(m.clone(), hasse.clone())];
    };
    let mut out = Vec::new();
    for (a, u) in model.mu().enumerate() {
        if ring.is_zero(&last_image[a]) {
            continue;
        }
        if let Some((neg, m2)) = m.replace(j, occ, last, u) {
            out.push((m2, if neg { ring.neg(&last_image[a]) } else { last_image[a].clone() }));
        }
    }
    out
}

/// The matrix of `A_r * gr Sym^k(p_ur)` on the penultimate step of the
/// filtration of `Sym^k(H)` (monomials with at most one `e_n`).
#[derive(Clone, Debug)]
pub struct Projection {
    pub k: Vec<i64>,
    pub source: Vec<Monomial>,
    pub target: Vec<Monomial>,
    /// `(source index, target index) -> coefficient`.
    pub entries: BTreeMap<(usize, usize), TPoly>,
}

pub fn unit_root_projection(model: &FormalModel, k: &[i64]) -> Result<Projection> {
    unit_root_projection_by(model, k, ProjectionRoute::Adjugate)
}

pub fn unit_root_projection_by(model: &FormalModel, k: &[i64], route: ProjectionRoute) -> Result<Projection> {
    check_weight(k)?;
    if k.len() != model.n() - 1 {
        return Err(Error::WeightPrecondition(format!("weight {k:?} should have {} entries", model.n() - 1)));
    }
    let last = model.last();
    let source: Vec<Monomial> = basis(k, model.n())?
        .into_iter()
        .filter(|m| m.count_where(|i| i == last) <= 1)
        .collect();
    let target = basis(k, model.n() - 1)?;
    let index: BTreeMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let image = projected_last(model, route)?;
    let hasse = model.hasse_section();
    let ring = model.ring();
    let mut entries: BTreeMap<(usize, usize), TPoly> = BTreeMap::new();
    for (s, m) in source.iter().enumerate() {
        for (m2, c) in project_monomial(model, &image, &hasse, m) {
            let e = entries.entry((s, index[&m2])).or_insert_with(|| ring.zero());
            *e = ring.add(e, &c);
        }
    }
    entries.retain(|_, c| !ring.is_zero(c));
    Ok(Projection {
        k: k.to_vec(),
        source,
        target,
        entries,
    })
}

/// `A_r` as a section of weight `(p-1, ..., p-1, 0, ..., 0)`, `w = 0`.
pub fn hasse_as_section(model: &FormalModel) -> Result<Section> {
    let (n, r, p) = (model.n(), model.r(), model.p());
    let k = hasse_weight(r, p, n)?;
    let mu: Vec<usize> = model.mu().collect();
    let mut m = Monomial::unit(n - 1);
    m.0[n - r - 1] = vec![mu; p as usize - 1];
    Ok(Section::monomial(k, 0, m, model.hasse_section()))
}

/// The function `f` as a section of weight zero.
pub fn function_section(model: &FormalModel, f: TPoly, w: i64) -> Section {
    Section::monomial(vec![0; model.n() - 1], w, Monomial::unit(model.n() - 1), f)
}

pub fn theta(model: &FormalModel, section: &Section) -> Result<Section> {
    let (n, r, p) = (model.n(), model.r(), model.p());
    if section.k.len() != n - 1 {
        return Err(Error::MalformedSection(format!("weight {:?} should have {} entries", section.k, n - 1)));
    }
    section.validate(n - 1)?;
    let ring = model.ring();
    let d = model.d();
    let last = model.last();
    let o0 = model.omega0();
    let hasse = model.hasse_section();
    let image = projected_last(model, ProjectionRoute::Adjugate)?;
    let kinv = invert(&model.ks_matrix(), ring)?;
    let trace: Vec<TPoly> = (0..d)
        .map(|l| ring.sum((0..n).map(|i| model.gamma()[l].get(i, i))))
        .collect();
    let w_elem = ring.from_i64(section.w);

    // One map per dt_l, before ks^-1.
    let mut acc: Vec<BTreeMap<Monomial, TPoly>> = vec![BTreeMap::new(); d];
    let push = |acc: &mut Vec<BTreeMap<Monomial, TPoly>>, l: usize, m: Monomial, c: TPoly| {
        if ring.is_zero(&c) {
            return;
        }
        let e = acc[l].entry(m).or_insert_with(|| ring.zero());
        *e = ring.add(e, &c);
    };

    for (b, f) in &section.terms {
        let df = ring.differential(f);
        let hf = ring.mul(&hasse, f);
        for l in 0..d {
            let mut c = ring.mul(&hasse, &df[l]);
            if section.w != 0 {
                c = ring.add(&c, &ring.mul(&ring.mul(&hf, &w_elem), &trace[l]));
            }
            push(&mut acc, l, b.clone(), c);
        }
        for (j, factor) in b.0.iter().enumerate() {
            for (occ, s) in factor.iter().enumerate() {
                for &i in s {
                    for target in 0..n {
                        // The graded connection drops components that move
                        // a vector of omega_mu into omega_0.
                        if o0.contains(&target) && !o0.contains(&i) {
                            continue;
                        }
                        let form = model.connection_form(target, i);
                        if form.iter().all(|x| ring.is_zero(x)) {
                            continue;
                        }
                        let Some((neg, b2)) = b.replace(j, occ, i, target) else {
                            continue;
                        };
                        let projected = if target == last {
                            project_monomial(model, &image, &hasse, &b2)
                        } else {
                            vec![(b2, hasse.clone())]
                        };
                        for (b3, c) in projected {
                            let c = if neg { ring.neg(&c) } else { c };
                            let cf = ring.mul(&c, f);
                            for l in 0..d {
                                push(&mut acc, l, b3.clone(), ring.mul(&cf, &form[l]));
                            }
                        }
                    }
                }
            }
        }
    }

    let k_out = weight_add(&section.k, &delta_shift(r, p, n)?);
    let mut out = Section::zero(k_out, section.w - 1);
    let mu: Vec<usize> = model.mu().collect();
    let omega: Vec<usize> = (0..n - 1).collect();
    for (l, terms) in acc.iter().enumerate() {
        for (b, c) in terms {
            for (a, &u) in mu.iter().enumerate() {
                let coeff = kinv.get(a, l);
                if ring.is_zero(coeff) {
                    continue;
                }
                let mut m = b.with_subset(1, vec![u]);
                for _ in 0..p - 1 {
                    m = m.with_subset(n - r, mu.clone());
                }
                m = m.with_subset(n - 1, omega.clone());
                out.add_term(m, &ring.mul(c, coeff), ring);
            }
        }
    }
    out.prune(ring);
    Ok(out)
}

/// `theta(fg) = f theta(g) + theta(f) g` below the truncation degree.
pub fn leibniz_check(model: &FormalModel, f: &Section, g: &Section) -> Result<bool> {
    let ring = model.ring();
    let lhs = theta(model, &f.mul(g, ring)?)?;
    let rhs = f.mul(&theta(model, g)?, ring)?.add(&theta(model, f)?.mul(g, ring)?, ring)?;
    Ok(lhs.eq_below(&rhs, ring.cutoff(), ring))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusKillReport {
    /// `(wedge^{n-1} V)(A_1) = A_1^p`, computed by minors against the determinant.
    pub wedge_identity: bool,
    /// `nabla^can` kills `x^(p)` for every basis section `x = t^a e_i`.
    pub frobenius_flat: bool,
    /// `V nabla = nabla^can V` on the basis.
    pub compatible: bool,
}

impl FrobeniusKillReport {
    pub fn passed(&self) -> bool {
        self.wedge_identity && self.frobenius_flat && self.compatible
    }
}

pub fn frobenius_kill_check(model: &FormalModel) -> Result<FrobeniusKillReport> {
    if model.r() != 1 {
        return Err(Error::OutOfRange(format!("the Frobenius-kill check is for r = 1, got r = {}", model.r())));
    }
    let ring = model.ring();
    let n = model.n();
    let images: Vec<Vec<TPoly>> = (0..n - 1).map(|j| model.v().col(j)).collect();
    // Subsets of size n-1 in lex order: the first one is omega itself.
    let wedge = wedge_of_vectors(&images, n, ring);
    let c = &wedge[0];
    let others_vanish = wedge[1..].iter().all(|x| ring.is_zero(x));
    let a = model.hasse_section();
    let p = model.p();
    let lhs = ring.mul(&a, &ring.pow(c, p - 1));
    let rhs = ring.frobenius(&a, 1);
    let wedge_identity = others_vanish && lhs == rhs;

    // nabla^can((t^a e_i)^(p)) = d(t^(pa)) e_i^(p), independent of i.
    let frobenius_flat = ring.exponents().iter().all(|e| {
        let x = ring.monomial(e, 1).expect("exponent from the ring");
        ring.differential(&ring.frobenius(&x, 1)).iter().all(|y| ring.is_zero(y))
    });

    Ok(FrobeniusKillReport {
        wedge_identity,
        frobenius_flat,
        compatible: model.compatible_on(0..n),
    })
}

/// Projection followed by the check that, on `omega`-monomials, it is
/// multiplication by `A_r`.
pub fn projection_restricts_to_hasse(model: &FormalModel, proj: &Projection) -> bool {
    let ring = model.ring();
    let hasse = model.hasse_section();
    let last = model.last();
    proj.source.iter().enumerate().all(|(s, m)| {
        if m.count_where(|i| i == last) > 0 {
            return true;
        }
        let row: Vec<(&(usize, usize), &TPoly)> = proj.entries.range((s, 0)..(s + 1, 0)).collect();
        match row.as_slice() {
            [] => ring.is_zero(&hasse),
            [((_, t), c)] => proj.target[*t] == *m && **c == hasse,
            _ => false,
        }
    })
}

/// Whether two projections agree entrywise below the truncation degree.
pub fn projections_agree(model: &FormalModel, a: &Projection, b: &Projection) -> bool {
    let ring = model.ring();
    let zero = ring.zero();
    a.source == b.source
        && a.target == b.target
        && a.entries
            .keys()
            .chain(b.entries.keys())
            .all(|key| ring.eq_below(a.entries.get(key).unwrap_or(&zero), b.entries.get(key).unwrap_or(&zero), ring.cutoff() + 1))
}

/// The matrix of a projection, with zeros filled in.
pub fn projection_matrix(model: &FormalModel, proj: &Projection) -> Matrix<TPoly> {
    let ring = model.ring();
    let mut m = Matrix::zeros(proj.source.len(), proj.target.len(), ring);
    for ((s, t), c) in &proj.entries {
        m.set(*s, *t, c.clone());
    }
    m
}

//! JSON encodings of matrices, Dieudonne modules and theta sections.
//!
//! Field elements are coefficient vectors over `F_p` of length `k`; basis
//! indices are 0-based throughout.

use serde::{Deserialize, Serialize};

use crate::dieudonne::DieudonneModule;
use crate::error::{Error, Result};
use crate::gf::{Gf, GfElem};
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::semilinear::SemilinearMap;
use crate::theta::{FormalModel, Monomial, Section, TPoly, TruncatedRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub twist: i64,
    pub rows: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksJson {
    pub sigma: Vec<usize>,
    pub sigmabar: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "V")]
    pub v: MatrixJson,
    pub pairing: MatrixJson,
    pub blocks: BlocksJson,
}

fn schema<E: std::fmt::Display>(e: E) -> Error {
    Error::Schema(e.to_string())
}

pub fn matrix_to_json(field: &Gf, twist: i64, m: &Matrix<GfElem>) -> MatrixJson {
    MatrixJson {
        p: field.p(),
        k: field.degree(),
        modulus: field.modulus().to_vec(),
        twist,
        rows: m.row_vecs().iter().map(|r| r.iter().map(|&x| field.coeffs(x)).collect()).collect(),
    }
}

/// Decodes a matrix, returning its field and twist.
pub fn matrix_from_json(j: &MatrixJson) -> Result<(Gf, i64, Matrix<GfElem>)> {
    if j.modulus.len() != j.k as usize + 1 {
        return Err(Error::Schema(format!("modulus has {} coefficients for k = {}", j.modulus.len(), j.k)));
    }
    let field = Gf::with_modulus(j.p, &j.modulus)?;
    let cols = j.rows.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(j.rows.len());
    for row in &j.rows {
        if row.len() != cols {
            return Err(Error::Schema("rows have different lengths".into()));
        }
        let mut out = Vec::with_capacity(cols);
        for c in row {
            if c.len() != j.k as usize || c.iter().any(|&x| x as u64 >= j.p) {
                return Err(Error::Schema(format!("entry {c:?} is not a coefficient vector over F_{} of length {}", j.p, j.k)));
            }
            out.push(field.from_coeffs(c));
        }
        rows.push(out);
    }
    let m = if rows.is_empty() { Matrix::from_fn(0, 0, |_, _| field.zero()) } else { Matrix::from_rows(rows) };
    Ok((field, j.twist, m))
}

pub fn module_to_json(d: &DieudonneModule) -> ModuleJson {
    ModuleJson {
        p: d.field.p(),
        k: d.field.degree(),
        n: d.n,
        f: matrix_to_json(&d.field, d.f.twist, &d.f.matrix),
        v: matrix_to_json(&d.field, d.v.twist, &d.v.matrix),
        pairing: matrix_to_json(&d.field, 0, &d.pairing),
        blocks: BlocksJson {
            sigma: d.sigma.clone(),
            sigmabar: d.sigmabar.clone(),
        },
    }
}

pub fn module_from_json(j: &ModuleJson) -> Result<DieudonneModule> {
    let (field, tf, f) = matrix_from_json(&j.f)?;
    let (fv, tv, v) = matrix_from_json(&j.v)?;
    let (fp, _, pairing) = matrix_from_json(&j.pairing)?;
    if field.p() != j.p || field.degree() != j.k || fv != field || fp != field {
        return Err(Error::Schema("matrices are not all over the declared field".into()));
    }
    let dim = 2 * j.n;
    for (name, m) in [("F", &f), ("V", &v), ("pairing", &pairing)] {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::Schema(format!("{name} is {}x{}, expected {dim}x{dim}", m.rows(), m.cols())));
        }
    }
    let mut seen = vec![false; dim];
    for &i in j.blocks.sigma.iter().chain(&j.blocks.sigmabar) {
        if i >= dim || seen[i] {
            return Err(Error::Schema(format!("block index {i} is out of range or repeated")));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) || j.blocks.sigma.len() != j.n {
        return Err(Error::Schema("blocks must split the basis into two halves".into()));
    }
    Ok(DieudonneModule {
        field: field.clone(),
        n: j.n,
        f: SemilinearMap::new(field.clone(), tf, f),
        v: SemilinearMap::new(field, tv, v),
        pairing,
        sigma: j.blocks.sigma.clone(),
        sigmabar: j.blocks.sigmabar.clone(),
    })
}

pub fn parse_module(text: &str) -> Result<DieudonneModule> {
    let j: ModuleJson = serde_json::from_str(text).map_err(schema)?;
    module_from_json(&j)
}

pub fn module_to_string(d: &DieudonneModule) -> String {
    serde_json::to_string_pretty(&module_to_json(d)).expect("module JSON serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionTermJson {
    /// For each `j`, the `j`-subsets of the wedge monomial.
    pub monomial: Vec<Vec<Vec<usize>>>,
    pub coeff: Vec<TermJson>,
}

/// A section of `Sym^k (x) delta^w` on the default formal model `(n, r, p, trunc)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionJson {
    pub n: usize,
    pub r: usize,
    pub p: u64,
    pub trunc: usize,
    pub k: Vec<i64>,
    pub w: i64,
    /// Optional `e_n`-coefficient of `nabla(e_n)`, one polynomial per variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_connection: Option<Vec<Vec<TermJson>>>,
    pub terms: Vec<SectionTermJson>,
}

pub fn poly_to_json(ring: &TruncatedRing, f: &TPoly) -> Vec<TermJson> {
    ring.terms(f).into_iter().map(|(exp, c)| TermJson { exp, c: c as u64 }).collect()
}

pub fn poly_from_json(ring: &TruncatedRing, terms: &[TermJson]) -> Result<TPoly> {
    let mut acc = ring.zero();
    for t in terms {
        if t.exp.len() != ring.nvars() {
            return Err(Error::MalformedSection(format!("exponent {:?} for {} variables", t.exp, ring.nvars())));
        }
        acc = ring.add(&acc, &ring.monomial(&t.exp, t.c)?);
    }
    Ok(acc)
}

pub fn section_to_json(model: &FormalModel, s: &Section) -> SectionJson {
    SectionJson {
        n: model.n(),
        r: model.r(),
        p: model.p(),
        trunc: model.ring().cutoff(),
        k: s.k.clone(),
        w: s.w,
        last_connection: None,
        terms: s
            .terms
            .iter()
            .map(|(m, c)| SectionTermJson {
                monomial: m.0.clone(),
                coeff: poly_to_json(model.ring(), c),
            })
            .collect(),
    }
}

/// Builds the formal model a section refers to, and the section on it.
pub fn section_from_json(j: &SectionJson) -> Result<(FormalModel, Section)> {
    let mut model = FormalModel::stratum_any(j.n, j.r, j.p, j.trunc)?;
    if let Some(eta) = &j.last_connection {
        let eta = eta.iter().map(|t| poly_from_json(model.ring(), t)).collect::<Result<Vec<_>>>()?;
        model = model.with_last_connection(&eta)?;
    }
    let ring = model.ring().clone();
    let mut s = Section::zero(j.k.clone(), j.w);
    for t in &j.terms {
        let m = Monomial(t.monomial.clone());
        m.validate(&j.k, j.n - 1)?;
        s.add_term(m, &poly_from_json(&ring, &t.coeff)?, &ring);
    }
    s.prune(&ring);
    Ok((model, s))
}

pub fn parse_section(text: &str) -> Result<(FormalModel, Section)> {
    let j: SectionJson = serde_json::from_str(text).map_err(schema)?;
    section_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dieudonne::standard_module;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn module_round_trip() {
        let field = Gf::new(3, 2).unwrap();
        let d = standard_module(3, 2, &field).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (c, _) = d.random_conjugate(&mut rng);
        let text = module_to_string(&c);
        let back = parse_module(&text).unwrap();
        assert_eq!(module_to_json(&back), module_to_json(&c));
        assert_eq!(back.eo_class().unwrap().r, 2);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_module("{"), Err(Error::Schema(_))));
        let field = Gf::prime(2).unwrap();
        let mut j = module_to_json(&standard_module(2, 1, &field).unwrap());
        j.v.rows.pop();
        assert!(matches!(module_from_json(&j), Err(Error::Schema(_))));
        let mut j = module_to_json(&standard_module(2, 1, &field).unwrap());
        j.blocks.sigma = vec![0, 0];
        assert!(matches!(module_from_json(&j), Err(Error::Schema(_))));
    }

    #[test]
    fn section_round_trip() {
        let model = FormalModel::stratum(4, 2, 3, 3).unwrap();
        let a = crate::theta::hasse_as_section(&model).unwrap();
        let j = section_to_json(&model, &a);
        let (m2, b) = section_from_json(&j).unwrap();
        assert_eq!(m2.n(), 4);
        assert_eq!(a, b);
        let bad = r#"{"n":3,"r":1,"p":3,"trunc":3,"k":[1,0],"w":0,"terms":[{"monomial":[[[5]],[]],"coeff":[]}]}"#;
        assert!(matches!(parse_section(bad), Err(Error::MalformedSection(_))));
    }
}

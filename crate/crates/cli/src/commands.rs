use std::time::Instant;

use serde::{Deserialize, Serialize};

use eotheta::dieudonne::{standard_module, Bt1Report, EoClass};
use eotheta::filtration::{
    dual_filtration, koszul_filtration, koszul_graded_formula, sym_filtration, sym_graded_formula, tensor_all,
    tensor_graded_formula, FilteredModule,
};
use eotheta::json::{parse_module, parse_section, section_to_json, SectionJson};
use eotheta::theta::theta;
use eotheta::weyl::{closure_chain, delta_shift, hasse_weight, lambda_coords, Shuffle};
use eotheta::{Error, Gf, Subspace};

use crate::config::Grid;
use crate::report::{Report, SuiteResult, Timing, VERSION};
use crate::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

fn schema_message(e: &Error) -> String {
    match e {
        Error::Schema(_) => e.to_string(),
        _ => format!("schema error: {e}"),
    }
}

/// What a command prints and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }

    fn fail(text: String, code: i32) -> Self {
        Output { text, code }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataRow {
    pub r: usize,
    pub shuffle: String,
    pub length: usize,
    pub p_rank_total: usize,
    pub p_rank_sigmabar: usize,
    /// Rank recovered by classifying the standard module.
    pub classified_r: usize,
    pub delta: Option<Vec<i64>>,
    pub hasse_weight: Option<Vec<i64>>,
    pub lambda_shift: Option<Vec<i64>>,
    pub closure: Vec<String>,
    pub closure_lengths: Vec<usize>,
}

pub fn strata_rows(n: usize, p: u64) -> eotheta::Result<Vec<StrataRow>> {
    let field = Gf::prime(p)?;
    (1..=n)
        .map(|r| {
            let w = Shuffle::w(n, r)?;
            let class = standard_module(n, r, &field)?.eo_class()?;
            let chain = closure_chain(n, r)?;
            let delta = if r < n { Some(delta_shift(r, p, n)?) } else { None };
            let lambda_shift = match &delta {
                Some(d) => Some(lambda_coords(d)?),
                None => None,
            };
            Ok(StrataRow {
                r,
                shuffle: w.to_string(),
                length: w.length(),
                p_rank_total: class.p_rank.total,
                p_rank_sigmabar: class.p_rank.sigmabar,
                classified_r: class.r,
                delta,
                hasse_weight: if r < n { Some(hasse_weight(r, p, n)?) } else { None },
                lambda_shift,
                closure: chain.iter().map(|s| s.to_string()).collect(),
                closure_lengths: chain.iter().map(Shuffle::length).collect(),
            })
        })
        .collect()
}

fn tuple(v: &Option<Vec<i64>>) -> String {
    v.as_ref()
        .map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")))
        .unwrap_or_default()
}

pub fn strata_csv(n: usize, p: u64, rows: &[StrataRow]) -> String {
    let mut out = String::from("n,p,r,w_r,length,p_rank_total,p_rank_sigmabar,delta,hasse_weight,lambda_shift,closure\n");
    for row in rows {
        out.push_str(&format!(
            "{n},{p},{},{},{},{},{},{},{},{},{}\n",
            row.r,
            row.shuffle,
            row.length,
            row.p_rank_total,
            row.p_rank_sigmabar,
            tuple(&row.delta),
            tuple(&row.hasse_weight),
            tuple(&row.lambda_shift),
            row.closure.join(" > ")
        ));
    }
    out
}

pub fn cmd_strata(n_min: usize, n_max: usize, p: u64, format: Format) -> Output {
    let mut tables = Vec::new();
    for n in n_min..=n_max {
        match strata_rows(n, p) {
            Ok(rows) => tables.push((n, rows)),
            Err(e) => return Output::fail(format!("strata: {e}"), EXIT_SCHEMA),
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = String::new();
            for (i, (n, rows)) in tables.iter().enumerate() {
                let csv = strata_csv(*n, p, rows);
                // One header for the whole table.
                s.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&tables).expect("rows serialize"),
        Format::Pretty => {
            let mut s = String::new();
            for (n, rows) in &tables {
                s.push_str(&format!("n = {n}, p = {p}\n"));
                for row in rows {
                    s.push_str(&format!(
                        "  r={} w={} l={} p-rank=({}, {}) Delta={} closure: {}\n",
                        row.r,
                        row.shuffle,
                        row.length,
                        row.p_rank_total,
                        row.p_rank_sigmabar,
                        tuple(&row.delta),
                        row.closure.join(" > ")
                    ));
                }
            }
            s
        }
    };
    Output::ok(text)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    /// One-line notation of the shuffle, e.g. `[1 3 2]`.
    pub w_r: Option<String>,
    pub bt1: Bt1Report,
    pub class: Option<EoClass>,
    pub canonical_filtration: Option<Vec<usize>>,
    pub graded_cm_dims: Option<Vec<(usize, usize)>>,
    pub error: Option<String>,
}

pub fn cmd_classify(text: &str) -> Output {
    let module = match parse_module(text) {
        Ok(m) => m,
        Err(e) => return Output::fail(schema_message(&e), EXIT_SCHEMA),
    };
    let bt1 = module.verify_bt1();
    let mut report = ClassifyReport {
        w_r: None,
        bt1: bt1.clone(),
        class: None,
        canonical_filtration: None,
        graded_cm_dims: None,
        error: None,
    };
    if bt1.passed() {
        match (module.eo_class(), module.canonical_filtration()) {
            (Ok(c), Ok(flag)) => {
                report.w_r = Some(c.shuffle.to_string());
                report.class = Some(c);
                report.canonical_filtration = Some(flag.dims());
                report.graded_cm_dims = Some(flag.graded_tags());
            }
            (Err(e), _) | (_, Err(e)) => report.error = Some(e.to_string()),
        }
    } else {
        report.error = bt1.first_failure().map(|f| format!("not a BT_1: {f}"));
    }
    let code = if report.class.is_some() { EXIT_OK } else { EXIT_VERIFY };
    Output::fail(serde_json::to_string_pretty(&report).expect("report serializes"), code)
}

pub fn cmd_theta_apply(text: &str) -> Output {
    let (model, section) = match parse_section(text) {
        Ok(x) => x,
        Err(e) => return Output::fail(schema_message(&e), EXIT_SCHEMA),
    };
    let input: Option<SectionJson> = serde_json::from_str(text).ok();
    match theta(&model, &section) {
        Ok(image) => {
            let mut j = section_to_json(&model, &image);
            j.last_connection = input.and_then(|i| i.last_connection);
            Output::ok(serde_json::to_string_pretty(&j).expect("section serializes"))
        }
        Err(e @ (Error::MalformedSection(_) | Error::WeightPrecondition(_) | Error::NotDominant(_))) => {
            Output::fail(schema_message(&e), EXIT_SCHEMA)
        }
        Err(e) => Output::fail(format!("theta failed: {e}"), EXIT_VERIFY),
    }
}

fn finish(command: &str, seed: u64, grid: serde_json::Value, results: Vec<(SuiteResult, u128)>, start: Instant) -> Report {
    let passed = results.iter().all(|(r, _)| r.passed);
    let timing = Timing {
        total_ms: start.elapsed().as_millis(),
        suites_ms: results.iter().map(|(r, t)| (r.name.clone(), *t)).collect(),
    };
    Report {
        version: VERSION.to_string(),
        command: command.to_string(),
        seed,
        grid,
        passed,
        results: serde_json::to_value(results.into_iter().map(|(r, _)| r).collect::<Vec<_>>()).expect("serializes"),
        timing: Some(timing),
    }
}

fn timed(f: impl FnOnce() -> SuiteResult) -> (SuiteResult, u128) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed().as_millis())
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json | Format::Csv => report.to_json(),
        Format::Pretty => {
            let mut s = format!("{} v{} seed={}\n", report.command, report.version, report.seed);
            if let Ok(results) = serde_json::from_value::<Vec<SuiteResult>>(report.results.clone()) {
                for r in results {
                    let verdict = if r.passed { "PASS" } else { "FAIL" };
                    s.push_str(&format!("{verdict} {} ({} checks)\n", r.name, r.checks));
                    for f in &r.failures {
                        s.push_str(&format!("    {f}\n"));
                    }
                    for n in &r.notes {
                        s.push_str(&format!("    note: {n}\n"));
                    }
                }
            }
            s
        }
    }
}

fn exit_for(report: &Report) -> i32 {
    if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

#[derive(Clone, Debug, Serialize)]
struct ThetaGrid {
    n: usize,
    r: usize,
    p: u64,
    trunc: usize,
}

pub fn theta_check_report(n: usize, r: usize, p: u64, trunc: usize, seed: u64) -> Report {
    let start = Instant::now();
    let grid = Grid {
        trunc,
        ..Grid::default()
    };
    let mut results = vec![
        timed(|| {
            let mut s = suites::theta_cell(&grid, seed, n, r, p);
            s.name = "theta identities".into();
            s
        }),
        timed(|| {
            let mut s = suites::division_free_cell(&grid, seed, n, r, p, 2);
            s.name = "division-free projection".into();
            s
        }),
    ];
    if r == 1 {
        results.push(timed(|| {
            let mut s = SuiteResult::new("Frobenius-kill lemma");
            match eotheta::theta::FormalModel::igusa(n, p, trunc).and_then(|m| eotheta::theta::frobenius_kill_check(&m)) {
                Ok(rep) => s.check(rep.passed(), || format!("{rep:?}")),
                Err(e) => s.check(false, || e.to_string()),
            }
            s
        }));
    }
    let g = serde_json::to_value(ThetaGrid { n, r, p, trunc }).expect("serializes");
    finish("theta-check", seed, g, results, start)
}

pub fn cmd_theta_check(n: usize, r: usize, p: u64, trunc: usize, seed: u64, format: Format) -> Output {
    if n < 2 || r < 1 || r >= n {
        return Output::fail(format!("need n >= 2 and 1 <= r <= n-1; got n={n}, r={r}"), EXIT_SCHEMA);
    }
    if let Err(e) = eotheta::theta::FormalModel::stratum_any(n, r, p, trunc) {
        return Output::fail(format!("config error: {e}"), EXIT_SCHEMA);
    }
    let report = theta_check_report(n, r, p, trunc, seed);
    Output::fail(render(&report, format), exit_for(&report))
}

pub fn verify_all_report(grid: &Grid, seed: u64) -> Report {
    let start = Instant::now();
    let results = vec![
        timed(|| suites::strata_tables(grid)),
        timed(|| suites::eo_classification(grid, seed)),
        timed(|| suites::bijection(seed)),
        timed(|| suites::adjugate_identity(grid, seed)),
        timed(|| suites::division_free(grid, seed)),
        timed(|| suites::theta_identities(grid, seed)),
        timed(|| suites::frobenius_kill(grid, seed)),
        timed(|| suites::filtration_calculus(grid, seed)),
        timed(|| suites::weight_ledger(grid)),
        timed(|| suites::torsion_bookkeeping(grid)),
        timed(suites::documented_discrepancy),
    ];
    finish("verify-all", seed, serde_json::to_value(grid).expect("grid serializes"), results, start)
}

pub fn cmd_verify_all(grid: &Grid, seed: u64, format: Format) -> Output {
    let report = verify_all_report(grid, seed);
    Output::fail(render(&report, format), exit_for(&report))
}

/// One filtration to build and measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FiltSpec {
    /// `F^i` spanned by the first `sizes[i]` basis vectors.
    Coordinate { sizes: Vec<usize> },
    Tensor { factors: Vec<Vec<usize>> },
    Dual { sizes: Vec<usize> },
    Koszul { dim: usize, sub: usize, j: usize },
    Sym { sizes: Vec<usize>, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltRequest {
    #[serde(default = "default_filt_prime")]
    pub p: u64,
    pub filtrations: Vec<FiltSpec>,
}

fn default_filt_prime() -> u64 {
    3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltRow {
    pub spec: FiltSpec,
    pub ambient: usize,
    pub graded: Vec<usize>,
    /// Graded dimensions predicted by the closed formula, when there is one.
    pub formula: Option<Vec<usize>>,
    pub consistent: bool,
}

impl Default for FiltRequest {
    fn default() -> Self {
        FiltRequest {
            p: 3,
            filtrations: vec![
                FiltSpec::Tensor {
                    factors: vec![vec![2, 1], vec![3, 1]],
                },
                FiltSpec::Dual { sizes: vec![4, 2] },
                FiltSpec::Koszul { dim: 4, sub: 2, j: 2 },
                FiltSpec::Sym { sizes: vec![2, 1], j: 2 },
                FiltSpec::Sym { sizes: vec![3, 1], j: 3 },
            ],
        }
    }
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn coord(field: &Gf, sizes: &[usize]) -> eotheta::Result<FilteredModule<Gf>> {
    let dim = *sizes
        .first()
        .ok_or_else(|| Error::Filtration("empty size list".into()))?;
    FilteredModule::coordinate(field.clone(), dim, sizes)
}

pub fn filt_row(field: &Gf, spec: &FiltSpec) -> eotheta::Result<FiltRow> {
    let (f, formula) = match spec {
        FiltSpec::Coordinate { sizes } => (coord(field, sizes)?, None),
        FiltSpec::Tensor { factors } => {
            let parts = factors.iter().map(|s| coord(field, s)).collect::<eotheta::Result<Vec<_>>>()?;
            let graded: Vec<Vec<usize>> = parts.iter().map(|p| p.graded_dims()).collect();
            (tensor_all(&parts)?, Some(tensor_graded_formula(&graded)))
        }
        FiltSpec::Dual { sizes } => {
            let a = coord(field, sizes)?;
            let mut rev = a.graded_dims();
            rev.reverse();
            (dual_filtration(&a), Some(rev))
        }
        FiltSpec::Koszul { dim, sub, j } => {
            if sub > dim {
                return Err(Error::Filtration(format!("sub = {sub} exceeds dim = {dim}")));
            }
            let s = Subspace::coordinate(*dim, &(0..*sub).collect::<Vec<_>>(), field);
            (koszul_filtration(field, &s, *j)?, Some(koszul_graded_formula(*dim, *sub, *j)))
        }
        FiltSpec::Sym { sizes, j } => {
            let a = coord(field, sizes)?;
            (sym_filtration(&a, *j), Some(sym_graded_formula(&a.graded_dims(), *j)))
        }
    };
    let graded = f.graded_dims();
    let consistent = graded.iter().sum::<usize>() == f.dim()
        && formula.as_ref().is_none_or(|x| trim(x.clone()) == trim(graded.clone()));
    Ok(FiltRow {
        spec: spec.clone(),
        ambient: f.dim(),
        graded,
        formula,
        consistent,
    })
}

pub fn cmd_filt_dims(request: Option<&str>) -> Output {
    let req: FiltRequest = match request {
        None => FiltRequest::default(),
        Some(text) => match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => return Output::fail(format!("schema error: {e}"), EXIT_SCHEMA),
        },
    };
    let field = match Gf::prime(req.p) {
        Ok(f) => f,
        Err(e) => return Output::fail(format!("config error: {e}"), EXIT_SCHEMA),
    };
    let mut rows = Vec::new();
    for spec in &req.filtrations {
        match filt_row(&field, spec) {
            Ok(r) => rows.push(r),
            Err(e) => return Output::fail(format!("schema error: {spec:?}: {e}"), EXIT_SCHEMA),
        }
    }
    let code = if rows.iter().all(|r| r.consistent) { EXIT_OK } else { EXIT_VERIFY };
    Output::fail(serde_json::to_string_pretty(&rows).expect("rows serialize"), code)
}

//! Runs every acceptance criterion at its tolerance and time limit and prints
//! one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use eotheta::weyl::{s_construction_dim, weyl_product_dim};
use eotheta_cli::report::SuiteResult;
use eotheta_cli::commands::verify_all_report;
use eotheta_cli::{suites, Grid};

const SEED: u64 = 1;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_suite(s: SuiteResult) -> Outcome {
    let detail = if s.passed {
        format!("{} checks", s.checks)
    } else {
        format!("{} of {} checks failed: {}", s.failed, s.checks, s.failures.join("; "))
    };
    Outcome { ok: s.passed, detail }
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took < limit;
    let ok = out.ok && in_time;
    let verdict = if ok { "PASS" } else { "FAIL" };
    let timing = if in_time {
        format!("{:.2}s < {}s", took.as_secs_f64(), limit.as_secs())
    } else {
        format!("{:.2}s exceeds {}s", took.as_secs_f64(), limit.as_secs())
    };
    println!("{verdict} {id:>2} {name}: {} ({timing})", out.detail);
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() -> ExitCode {
    let grid = Grid::default();
    let g = &grid;
    let results = [
        run(1, "strata tables", secs(1), || from_suite(suites::strata_tables(g))),
        run(2, "EO classification", secs(10), || from_suite(suites::eo_classification(g, SEED))),
        run(3, "bijection at n=3 over F_2", secs(30), || from_suite(suites::bijection(SEED))),
        run(4, "adjugate identity", secs(5), || from_suite(suites::adjugate_identity(g, SEED))),
        run(5, "division-free extension", secs(10), || from_suite(suites::division_free(g, SEED))),
        run(6, "theta identities", secs(30), || from_suite(suites::theta_identities(g, SEED))),
        run(7, "Frobenius-kill lemma", secs(5), || from_suite(suites::frobenius_kill(g, SEED))),
        run(8, "filtration calculus", secs(10), || from_suite(suites::filtration_calculus(g, SEED))),
        run(9, "weight ledger", secs(1), || from_suite(suites::weight_ledger(g))),
        run(10, "torsion bookkeeping", secs(1), || from_suite(suites::torsion_bookkeeping(g))),
        run(11, "documented discrepancy", secs(1), || {
            let s = suites::documented_discrepancy();
            let direct = s_construction_dim(&[2, 1, 0], 3).ok() == Some(9) && weyl_product_dim(&[2, 1, 0], 3).ok() == Some(8);
            let flagged = !s.notes.is_empty();
            let mut out = from_suite(s);
            out.ok &= direct && flagged;
            out.detail = format!("9 vs 8 flagged as a mismatch, {}", out.detail);
            out
        }),
        run(12, "verify-all runtime and reproducibility", secs(60), || {
            let a = verify_all_report(g, SEED);
            let b = verify_all_report(g, SEED);
            let same = a.payload() == b.payload();
            Outcome {
                ok: a.passed && same,
                detail: format!("passed={} byte-identical={same}", a.passed),
            }
        }),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

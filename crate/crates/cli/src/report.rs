use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// At most this many failure messages are kept per suite.
const MAX_FAILURES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    /// Expected-fail controls and documented discrepancies.
    pub notes: Vec<String>,
}

impl SuiteResult {
    pub fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            passed: true,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    /// Records an error as a failed check.
    pub fn check_result<T>(&mut self, r: eotheta::Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => {
                self.check(true, String::new);
                Some(v)
            }
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: SuiteResult) {
        self.checks += other.checks;
        self.failed += other.failed;
        self.passed &= other.passed;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u128,
    pub suites_ms: Vec<(String, u128)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub grid: serde_json::Value,
    pub passed: bool,
    pub results: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    /// The report without its timing field; identical runs produce identical payloads.
    pub fn payload(&self) -> String {
        let mut r = self.clone();
        r.timing = None;
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

//! Pass/fail bookkeeping shared by the verification routines.

use serde::Serialize;

/// Outcome of one identity check over a finite family of cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of individual cases examined.
    pub checked: u64,
    pub summary: String,
    /// The first counterexample, if any.
    pub failure: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Accumulates cases, remembering only the first failure.
#[derive(Debug)]
pub struct Checker {
    name: String,
    checked: u64,
    failure: Option<String>,
}

impl Checker {
    pub fn new(name: impl Into<String>) -> Self {
        Checker { name: name.into(), checked: 0, failure: None }
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    pub fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.check(false, describe);
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn finish(self, summary: impl Into<String>) -> CheckReport {
        CheckReport { name: self.name, checked: self.checked, summary: summary.into(), failure: self.failure }
    }
}

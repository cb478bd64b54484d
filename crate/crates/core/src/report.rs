//! Pass/warn/fail records shared by all verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

/// One named check with a count of cases examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub cases: u64,
    pub detail: String,
    /// First counterexample in canonical text form, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, cases: u64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status, cases, detail: detail.into(), counterexample: None }
    }

    pub fn pass(name: impl Into<String>, cases: u64, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Pass, cases, detail)
    }

    pub fn with_counterexample(mut self, c: impl Into<String>) -> Self {
        self.counterexample = Some(c.into());
        self
    }
}

/// Tracks the first failure of a sweep.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    pub first: Option<String>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    /// PASS when no failures, otherwise `on_failure`.
    pub fn into_check(self, name: &str, on_failure: Status, detail: impl Into<String>) -> Check {
        let status = if self.failures == 0 { Status::Pass } else { on_failure };
        let detail = if self.failures == 0 {
            detail.into()
        } else {
            format!("{} ({} of {} cases fail)", detail.into(), self.failures, self.cases)
        };
        let mut c = Check::new(name, status, self.cases, detail);
        c.counterexample = self.first;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }
}

//! Per-triple verification reports.

use serde::{Deserialize, Serialize};

use crate::ledger::Triple;
use crate::theorems::{run_checks, CheckResult, Params, Status, TheoremError};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub partial: usize,
    pub fail: usize,
}

impl Summary {
    pub fn of(checks: &[CheckResult]) -> Summary {
        let mut s = Summary::default();
        for c in checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Partial => s.partial += 1,
                Status::Fail => s.fail += 1,
            }
        }
        s
    }

    pub fn merge(self, o: Summary) -> Summary {
        Summary { pass: self.pass + o.pass, partial: self.partial + o.partial, fail: self.fail + o.fail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub params: Params,
    pub engine_version: String,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn run(t: Triple, only: Option<&[String]>) -> Result<Report, TheoremError> {
        let checks = run_checks(t, only)?;
        let summary = Summary::of(&checks);
        Ok(Report { params: t.into(), engine_version: ENGINE_VERSION.to_string(), checks, summary })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Worst status over all checks.
    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }
}

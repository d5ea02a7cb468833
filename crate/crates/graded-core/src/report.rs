//! Pass/fail reports for batches of identity checks.
//!
//! Verification operations record one entry per identity family they test,
//! with a human-readable witness on failure. Reports serialize to JSON for
//! the command-line front end and convert into hard errors on demand.

use serde::Serialize;

use crate::error::{Error, Result};

/// One verified (or refuted) identity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Which identity was checked, e.g. `"paruni"` or `"cocycle"`.
    pub tag: String,
    /// Whether the identity held exactly.
    pub pass: bool,
    /// Description of the first failing site, present iff `pass` is false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// An ordered list of identity checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    /// Record a passed identity.
    pub fn pass(&mut self, tag: impl Into<String>) {
        self.checks.push(Check {
            tag: tag.into(),
            pass: true,
            witness: None,
        });
    }

    /// Record a failed identity together with a witness description.
    pub fn fail(&mut self, tag: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(Check {
            tag: tag.into(),
            pass: false,
            witness: Some(witness.into()),
        });
    }

    /// Record an outcome where `Err` carries the failure witness.
    pub fn record(&mut self, tag: impl Into<String>, outcome: std::result::Result<(), String>) {
        match outcome {
            Ok(()) => self.pass(tag),
            Err(w) => self.fail(tag, w),
        }
    }

    /// Append all checks of `other`.
    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Did every recorded check pass?
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// First failing check, if any.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// Convert the first failure (if any) into an error built by `make`;
    /// otherwise return the report unchanged.
    pub fn require(self, make: impl FnOnce(String) -> Error) -> Result<Report> {
        let msg = self.first_failure().map(|c| match &c.witness {
            Some(w) => format!("{} [{}]", c.tag, w),
            None => c.tag.clone(),
        });
        match msg {
            None => Ok(self),
            Some(m) => Err(make(m)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn require_surfaces_first_failure() {
        let mut rep = Report::new();
        rep.pass("a");
        rep.fail("b", "entry (0,1)");
        rep.fail("c", "later");
        assert!(!rep.all_pass());
        let err = rep.require(Error::AxiomViolation).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('b') && msg.contains("entry (0,1)"), "{msg}");
    }

    #[test]
    fn all_pass_round_trip() {
        let mut rep = Report::new();
        rep.pass("x");
        rep.record("y", Ok(()));
        assert!(rep.all_pass());
        assert!(rep.clone().require(Error::AxiomViolation).is_ok());
        let js = serde_json::to_string(&rep).unwrap();
        assert!(js.contains("\"tag\":\"x\""));
        assert!(!js.contains("witness"));
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// One violated clause together with the element(s) witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub claim: String,
    pub witness: String,
}

/// Outcome of a verifier: passes iff no violations were recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, claim: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            claim: claim.into(),
            witness: witness.into(),
        });
    }

    /// Record a violation unless `ok`.
    pub fn check(&mut self, ok: bool, claim: impl Into<String>, witness: impl FnOnce() -> String) {
        if !ok {
            self.push(claim, witness());
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_pass() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn has_claim(&self, claim: &str) -> bool {
        self.violations.iter().any(|v| v.claim == claim)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict())?;
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.claim, v.witness)?;
        }
        Ok(())
    }
}

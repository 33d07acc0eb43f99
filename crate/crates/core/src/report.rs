//! Pass/fail bookkeeping shared by the checks.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub equation: String,
    pub witness: String,
}

/// Outcome of a verification: empty iff every identity held exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub findings: Vec<Finding>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, equation: impl Into<String>, witness: impl Into<String>) {
        self.findings.push(Finding {
            equation: equation.into(),
            witness: witness.into(),
        });
    }

    /// Records a failure when `witness` is `Some`.
    pub fn check(&mut self, equation: &str, witness: Option<String>) {
        if let Some(w) = witness {
            self.fail(equation, w);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.findings.extend(other.findings);
    }

    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn mentions(&self, equation: &str) -> bool {
        self.findings.iter().any(|f| f.equation == equation)
    }

    pub fn into_result(self) -> Result<()> {
        match self.findings.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(Error::axiom(f.equation, f.witness)),
        }
    }
}

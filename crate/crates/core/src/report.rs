//! Machine-readable verdicts shared by validation and the verification
//! suites.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub tag: String,
    pub detail: String,
}

/// Outcome of a check that may fail in several independent ways.
///
/// `ok` is true exactly when `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport {
            ok: true,
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, tag: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            tag: tag.into(),
            detail: detail.into(),
        });
        self.ok = false;
    }

    pub fn extend(&mut self, other: ValidationReport) {
        for v in other.violations {
            self.push(v.tag, v.detail);
        }
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.violations.iter().any(|v| v.tag == tag)
    }

    pub fn count_tag(&self, tag: &str) -> usize {
        self.violations.iter().filter(|v| v.tag == tag).count()
    }
}

impl Default for ValidationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] {}", v.tag, v.detail)?;
        }
        Ok(())
    }
}

/// A failed case inside a verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: String,
    pub detail: String,
}

/// Summary of a verification suite: `{"suite", "cases", "failures"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    /// Records one case; `outcome` carries the failure detail, if any.
    pub fn record(&mut self, case: impl Into<String>, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(detail) = outcome {
            self.failures.push(CaseFailure {
                case: case.into(),
                detail,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds `other` into `self`, prefixing its case names with its suite.
    pub fn absorb(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        for f in other.failures {
            self.failures.push(CaseFailure {
                case: format!("{}/{}", other.suite, f.case),
                detail: f.detail,
            });
        }
    }
}

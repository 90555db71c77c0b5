//! Structured pass/fail records. Every verdict is a named check carrying the
//! measured value and the threshold it was held to, so reports stay traceable
//! to the invariant that produced them.

use serde::{Deserialize, Serialize};

/// How a check's value relates to its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Pass when value <= threshold (residual-style).
    ResidualAtMost,
    /// Pass when value >= threshold (gap- or eigenvalue-style).
    ValueAtLeast,
}

/// A single named verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl Check {
    pub fn residual(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            kind: CheckKind::ResidualAtMost,
            pass: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            kind: CheckKind::ValueAtLeast,
            pass: value >= threshold,
        }
    }
}

/// A labeled collection of checks with an overall verdict.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub label: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(label: impl Into<String>) -> Self {
        Report {
            label: label.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Overall verdict: every check passed.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Worst residual-style value, if any.
    pub fn max_residual(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::ResidualAtMost)
            .map(|c| c.value)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }
}

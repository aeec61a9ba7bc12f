use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A labeled numeric result emitted by diagnostics and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub label: String,
    pub value: f64,
    /// Absolute error estimate; 0 when the value is exact.
    pub error: f64,
    /// Named auxiliary quantities (arguments, maximizers, the two sides of a bound).
    pub witnesses: BTreeMap<String, f64>,
    /// Outcome of the check this record belongs to, if any.
    pub pass: Option<bool>,
}

impl ReportRecord {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
            error: 0.0,
            witnesses: BTreeMap::new(),
            pass: None,
        }
    }

    pub fn with_error(mut self, error: f64) -> Self {
        self.error = error;
        self
    }

    pub fn witness(mut self, name: impl Into<String>, value: f64) -> Self {
        self.witnesses.insert(name.into(), value);
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.witnesses.get(name).copied()
    }

    pub fn passed(&self) -> bool {
        self.pass.unwrap_or(true)
    }
}

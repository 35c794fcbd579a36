use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one numerical check: every residual with a tolerance must be
/// at most that tolerance for `pass` to hold. Residuals without a tolerance
/// are informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: String,
    pub pass: bool,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub instance: serde_json::Value,
}

impl Certificate {
    pub fn new(statement: impl Into<String>) -> Self {
        Self {
            statement: statement.into(),
            pass: true,
            residuals: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            instance: serde_json::Value::Null,
        }
    }

    /// Records `value` and requires `value ≤ tol`. NaN fails.
    pub fn bound(mut self, name: &str, value: f64, tol: f64) -> Self {
        self.pass &= value <= tol;
        self.residuals.insert(name.to_owned(), value);
        self.tolerances.insert(name.to_owned(), tol);
        self
    }

    /// Records `value` without a requirement.
    pub fn metric(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_owned(), value);
        self
    }

    /// Records a boolean condition as a 0/1 residual that must be 0.
    pub fn require(self, name: &str, holds: bool) -> Self {
        self.bound(name, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with_instance(mut self, instance: serde_json::Value) -> Self {
        self.instance = instance;
        self
    }

    pub fn fail(mut self) -> Self {
        self.pass = false;
        self
    }
}

//! Machine-readable verification reports.
//!
//! Field order is fixed by the struct definitions. Floats are written in
//! scientific notation with 17 significant digits; non-finite values become
//! `null`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// One verified property.
///
/// `passed` always equals `max_error <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The result this check verifies.
    pub anchor: String,
    pub passed: bool,
    #[serde(serialize_with = "sig17")]
    pub max_error: f64,
    #[serde(serialize_with = "sig17")]
    pub tolerance: f64,
    pub details: String,
}

impl Check {
    pub fn within(
        name: &str,
        anchor: &str,
        max_error: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            details: details.into(),
        }
    }

    /// Pass/fail property; the error is 0 on success and 1 on failure.
    pub fn exact(name: &str, anchor: &str, ok: bool, details: impl Into<String>) -> Self {
        Check::within(name, anchor, if ok { 0.0 } else { 1.0 }, 0.0, details)
    }

    /// `value >= bound`, recorded as an error of `bound - value`.
    pub fn at_least(
        name: &str,
        anchor: &str,
        value: f64,
        bound: f64,
        details: impl Into<String>,
    ) -> Self {
        Check::within(name, anchor, bound - value, 0.0, details)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.max_error <= tolerance;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub timing_ms: u64,
    pub config_echo: serde_json::Value,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Replace tolerances: `per_check` by check name, then `global` for all.
    pub fn apply_overrides(&mut self, per_check: &BTreeMap<String, f64>, global: Option<f64>) {
        for check in &mut self.checks {
            let tol = global.or_else(|| per_check.get(&check.name).copied());
            if let Some(tol) = tol {
                *check = check.clone().with_tolerance(tol);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// The report with `timing_ms` zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            timing_ms: 0,
            ..self.clone()
        }
    }
}

pub fn format_f64(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    match format_f64(*x) {
        Some(text) => {
            let raw = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        }
        None => s.serialize_none(),
    }
}

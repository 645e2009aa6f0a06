//! Machine-readable verification reports.
//!
//! Every JSON document written by the CLI is an object with
//! `schema_version`, `command`, `inputs` and a command-specific body; see
//! `schema/report.schema.json` for the full layout. Indices in JSON are
//! 0-based.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `|actual − expected| ≤ tolerance`.
    pub fn close(name: &str, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            expected,
            actual,
            tolerance,
            passed: (actual - expected).abs() <= tolerance,
        }
    }

    /// A yes/no fact, stored as 1.0 / 0.0 with zero tolerance.
    pub fn flag(name: &str, expected: bool, actual: bool) -> Self {
        Self::close(name, f64::from(u8::from(expected)), f64::from(u8::from(actual)), 0.0)
    }

    /// An exact count.
    pub fn count(name: &str, expected: usize, actual: usize) -> Self {
        Self::close(name, expected as f64, actual as f64, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub overall: bool,
    pub details: Value,
}

impl VerificationReport {
    pub fn new(command: &str, inputs: Value, checks: Vec<Check>, details: Value) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            checks,
            overall,
            details,
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render_checks(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {:<40} expected {:<22} actual {:<22} tol {:e}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt_value(c.expected),
                fmt_value(c.actual),
                c.tolerance
            ));
        }
        out.push_str(&format!("overall: {}\n", if self.overall { "PASS" } else { "FAIL" }));
        out
    }
}

/// Plain decimal for ordinary magnitudes, scientific notation for tiny ones.
fn fmt_value(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Wraps a plain result (RIC report, OMP trace) in the common envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, inputs: Value, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            result,
        }
    }
}

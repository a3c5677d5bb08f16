//! Named numeric checks and their one-line reports.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Measured quantity, or NaN when it could not be measured.
    pub value: f64,
    /// Human-readable bound the value is compared against.
    pub bound: String,
    pub passed: bool,
}

impl Check {
    /// `value < limit`.
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: format!("< {limit:e}"),
            passed: value < limit,
        }
    }

    /// `|value - target| <= tol`.
    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: format!("{target} ± {tol:e}"),
            passed: (value - target).abs() <= tol,
        }
    }

    /// `|value / target - 1| <= rel`.
    pub fn relative(name: impl Into<String>, value: f64, target: f64, rel: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: format!("{target} within {}%", rel * 100.0),
            passed: ((value - target) / target).abs() <= rel,
        }
    }

    /// `lo <= value <= hi`.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: format!("in [{lo}, {hi}]"),
            passed: value >= lo && value <= hi,
        }
    }

    pub fn flag(name: impl Into<String>, value: bool, bound: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: if value { 1.0 } else { 0.0 },
            bound: bound.into(),
            passed: value,
        }
    }

    /// A failure whose value could not be computed.
    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            value: f64::NAN,
            bound: format!("error: {err}"),
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} = {:.6e} ({})",
            if self.passed { "ok  " } else { "FAIL" },
            self.name,
            self.value,
            self.bound
        )
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(Check::below("a", 1.0, 2.0).passed);
        assert!(!Check::below("a", f64::NAN, 2.0).passed);
        assert!(Check::near("b", 1.04, 1.0, 0.05).passed);
        assert!(!Check::relative("c", 1.2, 1.0, 0.1).passed);
        assert!(Check::within("d", 0.5, 0.0, 1.0).passed);
        assert!(!Check::within("d", f64::NAN, 0.0, 1.0).passed);
    }
}

use std::fmt::Display;

use serde::{Deserialize, Serialize};

/// One failed comparison, with both sides in canonical exact serialization
/// (or shortest round-trip decimal for floating-point checks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
}

/// Pass/fail record of one identity checked over an index range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_name: String,
    pub index_range: (u64, u64),
    /// Number of comparisons made.
    pub checked: u64,
    /// Absolute tolerance for floating-point checks; absent for exact ones.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn builder(identity_name: impl Into<String>, n_min: u64, n_max: u64) -> ReportBuilder {
        ReportBuilder {
            report: VerificationReport {
                identity_name: identity_name.into(),
                index_range: (n_min, n_max),
                checked: 0,
                tolerance: None,
                failures: Vec::new(),
                passed: true,
            },
        }
    }

    /// Same comparisons with the same outcome, ignoring the identity name.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.index_range == other.index_range
            && self.checked == other.checked
            && self.failures == other.failures
            && self.passed == other.passed
    }
}

pub struct ReportBuilder {
    report: VerificationReport,
}

impl ReportBuilder {
    pub fn exact<T: PartialEq + Display>(&mut self, n: u64, lhs: &T, rhs: &T) -> &mut Self {
        self.report.checked += 1;
        if lhs != rhs {
            self.report.failures.push(Failure { n, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
        self
    }

    /// Records `|lhs - rhs| <= tol`; NaN on either side fails.
    pub fn close(&mut self, n: u64, lhs: f64, rhs: f64, tol: f64) -> &mut Self {
        self.report.checked += 1;
        self.report.tolerance = Some(tol);
        let within = (lhs - rhs).abs() <= tol;
        if !within {
            self.report.failures.push(Failure { n, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
        self
    }

    pub fn tolerance(&mut self, tol: f64) -> &mut Self {
        self.report.tolerance = Some(tol);
        self
    }

    pub fn finish(&mut self) -> VerificationReport {
        let mut r = self.report.clone();
        r.passed = r.failures.is_empty();
        r
    }
}

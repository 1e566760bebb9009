//! Check outcomes and the tolerance policy shared by every suite.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// Tolerances for inequality verdicts.
///
/// A scalar inequality lhs <= rhs passes iff
///   rhs - lhs >= -(tol_abs + tol_rel * max(1, |lhs|, |rhs|)).
/// A Loewner inequality L <= R passes iff
///   lambda_min(R - L) >= -(tol_abs + loewner_tol * scale)
/// where scale is the sum of the spectral norms of the inputs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ToleranceConfig {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub loewner_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { tol_abs: 1e-10, tol_rel: 1e-9, loewner_tol: 1e-8 }
    }
}

impl ToleranceConfig {
    /// Normalized slack of lhs <= rhs and its pass verdict.
    pub fn scalar_slack(&self, lhs: f64, rhs: f64) -> (f64, bool) {
        let denom = 1.0f64.max(lhs.abs()).max(rhs.abs());
        let margin = (rhs - lhs) / denom;
        let passed = rhs - lhs >= -(self.tol_abs + self.tol_rel * denom);
        (margin, passed)
    }

    /// Pass verdict for a Loewner gap (min eigenvalue of RHS - LHS) at the
    /// given spectral scale.
    pub fn loewner_pass(&self, gap: f64, scale: f64) -> bool {
        gap >= -(self.tol_abs + self.loewner_tol * scale)
    }

    /// Comparison tolerance handed to `loewner_compare` when gating
    /// order-shaped preconditions.
    pub fn loewner_threshold(&self, scale: f64) -> f64 {
        self.tol_abs + self.loewner_tol * scale
    }
}

/// Named matrix inside a witness; serializes as the matrix text fields
/// plus a name.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    #[serde(flatten)]
    pub matrix: Matrix,
}

/// Inputs of a failed check, embedded in the report.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<(String, Matrix)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<(String, f64)>,
}

impl Witness {
    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty() && self.params.is_empty()
    }
}

/// Outcome of a single inequality evaluation.
///
/// For scalar checks `lhs`/`rhs` are the two sides and `margin` the
/// normalized slack (rhs - lhs) / max(1, |lhs|, |rhs|). For Loewner checks
/// `lhs` and `margin` hold the minimum eigenvalue of RHS - LHS (the gap)
/// and `rhs` is zero. `precondition_ok = false` marks inputs outside the
/// inequality's hypothesis; the runner turns that into a skip, never a
/// failure. Values are `None` when the hypothesis failure prevented
/// evaluation altogether.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckResult {
    pub suite: String,
    pub variant: String,
    pub r_or_nu: Option<f64>,
    pub dim: usize,
    pub trial: u64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub passed: bool,
    pub precondition_ok: bool,
    #[serde(default)]
    pub expected_failure: bool,
    #[serde(default, skip_serializing_if = "Witness::is_empty")]
    pub witness: Witness,
}

impl CheckResult {
    fn base(variant: &str, r_or_nu: f64, dim: usize) -> Self {
        CheckResult {
            suite: String::new(),
            variant: variant.to_string(),
            r_or_nu: if r_or_nu.is_nan() { None } else { Some(r_or_nu) },
            dim,
            trial: 0,
            lhs: None,
            rhs: None,
            margin: None,
            passed: false,
            precondition_ok: true,
            expected_failure: false,
            witness: Witness::default(),
        }
    }

    /// Scalar-shaped result.
    pub fn scalar(
        variant: &str,
        r_or_nu: f64,
        dim: usize,
        lhs: f64,
        rhs: f64,
        margin: f64,
        passed: bool,
    ) -> Self {
        let mut c = Self::base(variant, r_or_nu, dim);
        c.lhs = Some(lhs);
        c.rhs = Some(rhs);
        c.margin = Some(margin);
        c.passed = passed;
        c
    }

    /// Loewner-shaped result carrying the eigenvalue gap of RHS - LHS.
    pub fn loewner(variant: &str, r_or_nu: f64, dim: usize, gap: f64, passed: bool) -> Self {
        let mut c = Self::base(variant, r_or_nu, dim);
        c.lhs = Some(gap);
        c.rhs = Some(0.0);
        c.margin = Some(gap);
        c.passed = passed;
        c
    }

    /// Result for inputs whose hypothesis failed before evaluation.
    pub fn unevaluated(variant: &str, r_or_nu: f64, dim: usize) -> Self {
        let mut c = Self::base(variant, r_or_nu, dim);
        c.precondition_ok = false;
        c
    }

    pub fn with_precondition(mut self, ok: bool) -> Self {
        self.precondition_ok = ok;
        self
    }

    pub fn with_matrix(mut self, name: &str, m: &Matrix) -> Self {
        self.witness.matrices.push((name.to_string(), m.clone()));
        self
    }

    pub fn with_param(mut self, name: &str, v: f64) -> Self {
        self.witness.params.push((name.to_string(), v));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_slack_signs() {
        let tol = ToleranceConfig::default();
        let (m, ok) = tol.scalar_slack(1.0, 2.0);
        assert!(ok);
        assert!((m - 0.5).abs() < 1e-15);
        let (m, ok) = tol.scalar_slack(2.0, 1.0);
        assert!(!ok);
        assert!((m + 0.5).abs() < 1e-15);
    }

    #[test]
    fn scalar_slack_tolerates_roundoff() {
        let tol = ToleranceConfig::default();
        // a violation below the absolute tolerance still passes
        let (_, ok) = tol.scalar_slack(1.0 + 5e-11, 1.0);
        assert!(ok);
        // relative term scales with magnitude
        let (_, ok) = tol.scalar_slack(1e6 + 0.5e-3, 1e6);
        assert!(ok);
        let (_, ok) = tol.scalar_slack(1e6 + 1.0, 1e6);
        assert!(!ok);
    }

    #[test]
    fn loewner_pass_scales() {
        let tol = ToleranceConfig::default();
        assert!(tol.loewner_pass(-5e-9, 1.0));
        assert!(!tol.loewner_pass(-5e-6, 1.0));
        assert!(tol.loewner_pass(-5e-6, 1000.0));
    }

    #[test]
    fn nan_weight_serializes_as_null() {
        let c = CheckResult::scalar("chain", f64::NAN, 2, 1.0, 2.0, 0.5, true);
        assert_eq!(c.r_or_nu, None);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"r_or_nu\":null"));
        let back: CheckResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn witness_roundtrip() {
        let m = Matrix::diag(&[1.0, 2.0]);
        let c = CheckResult::loewner("reverse", 1.0, 2, -0.5, false)
            .with_matrix("A", &m)
            .with_param("r", 1.0);
        let json = serde_json::to_string(&c).unwrap();
        let back: CheckResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.witness.matrices[0].1, m);
        assert_eq!(back, c);
    }
}

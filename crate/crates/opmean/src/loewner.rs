use serde::{Deserialize, Serialize};

use crate::eigen::sym_eigen;
use crate::error::Result;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoewnerRelation {
    LessEq,
    GreaterEq,
    Equal,
    Incomparable,
}

/// Outcome of a semidefinite-order comparison of A against B, carrying the
/// extreme eigenvalues of B - A.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LoewnerVerdict {
    pub relation: LoewnerRelation,
    pub min_eig_diff: f64,
    pub max_eig_diff: f64,
}

impl LoewnerVerdict {
    /// True when A <= B holds up to the comparison tolerance.
    pub fn le(&self) -> bool {
        matches!(self.relation, LoewnerRelation::LessEq | LoewnerRelation::Equal)
    }

    pub fn ge(&self) -> bool {
        matches!(self.relation, LoewnerRelation::GreaterEq | LoewnerRelation::Equal)
    }
}

/// Compares symmetric matrices in the Loewner order via the spectrum of
/// B - A. `Equal` wins over the one-sided relations when both extreme
/// eigenvalues sit within the tolerance.
pub fn loewner_compare(a: &Matrix, b: &Matrix, tol: f64) -> Result<LoewnerVerdict> {
    let diff = b.sub(a);
    let dec = sym_eigen(&diff)?;
    let min_eig_diff = dec.min_eigenvalue();
    let max_eig_diff = dec.max_eigenvalue();
    let relation = if min_eig_diff.abs() <= tol && max_eig_diff.abs() <= tol {
        LoewnerRelation::Equal
    } else if min_eig_diff >= -tol {
        LoewnerRelation::LessEq
    } else if max_eig_diff <= tol {
        LoewnerRelation::GreaterEq
    } else {
        LoewnerRelation::Incomparable
    };
    Ok(LoewnerVerdict { relation, min_eig_diff, max_eig_diff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity_is_less_eq() {
        let a = Matrix::identity(2);
        let b = Matrix::diag(&[2.0, 2.0]);
        let v = loewner_compare(&a, &b, 1e-10).unwrap();
        assert_eq!(v.relation, LoewnerRelation::LessEq);
        assert!((v.min_eig_diff - 1.0).abs() < 1e-12);
        assert!((v.max_eig_diff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_within_tolerance() {
        let a = Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 2.0]]).unwrap();
        let v = loewner_compare(&a, &a, 1e-10).unwrap();
        assert_eq!(v.relation, LoewnerRelation::Equal);
        assert!(v.le() && v.ge());
    }

    #[test]
    fn indefinite_difference_is_incomparable() {
        let a = Matrix::diag(&[1.0, 2.0]);
        let b = Matrix::diag(&[2.0, 1.0]);
        let v = loewner_compare(&a, &b, 1e-10).unwrap();
        assert_eq!(v.relation, LoewnerRelation::Incomparable);
    }

    #[test]
    fn greater_eq() {
        let a = Matrix::diag(&[3.0, 3.0]);
        let b = Matrix::diag(&[1.0, 2.0]);
        let v = loewner_compare(&a, &b, 1e-10).unwrap();
        assert_eq!(v.relation, LoewnerRelation::GreaterEq);
        assert!(v.ge() && !v.le());
    }
}

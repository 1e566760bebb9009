use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Pairwise orthogonality threshold for one-sided Jacobi convergence.
pub const SVD_ORTH_TOL: f64 = 1e-14;

/// Sweep cap for the one-sided Jacobi iteration.
pub const SVD_MAX_SWEEPS: usize = 100;

/// Singular values in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValues {
    pub values: Vec<f64>,
}

impl SingularValues {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.values.last().expect("nonempty")
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Singular values of a rectangular matrix by one-sided Jacobi.
///
/// Plane rotations orthogonalize the columns of the working copy (the
/// transpose is taken first when the input is wide); the singular values
/// are the final column norms, sorted descending. The Gram matrix is never
/// formed, so small singular values keep high relative accuracy. A column
/// pair counts as orthogonal once |<a_p, a_q>| <= SVD_ORTH_TOL * |a_p||a_q|.
pub fn singular_values(x: &Matrix) -> Result<SingularValues> {
    let mut g = if x.rows() >= x.cols() { x.clone() } else { x.transpose() };
    let (n, m) = (g.rows(), g.cols());

    if m > 1 {
        let mut converged = false;
        for _sweep in 0..SVD_MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..m - 1 {
                for q in p + 1..m {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for i in 0..n {
                        let gp = g.get(i, p);
                        let gq = g.get(i, q);
                        alpha += gp * gp;
                        beta += gq * gq;
                        gamma += gp * gq;
                    }
                    if gamma == 0.0 || gamma.abs() <= SVD_ORTH_TOL * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..n {
                        let gp = g.get(i, p);
                        let gq = g.get(i, q);
                        g.set(i, p, c * gp - s * gq);
                        g.set(i, q, s * gp + c * gq);
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { sweeps: SVD_MAX_SWEEPS });
        }
    }

    let mut values: Vec<f64> = (0..m)
        .map(|j| (0..n).map(|i| g.get(i, j).powi(2)).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(SingularValues { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_2x2() {
        let x = Matrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = singular_values(&x).unwrap();
        assert!((s.values[0] - 2.0).abs() < 1e-14);
        assert!(s.values[1].abs() < 1e-14);
    }

    #[test]
    fn diagonal_takes_absolute_values() {
        let x = Matrix::diag(&[3.0, -4.0]);
        let s = singular_values(&x).unwrap();
        assert!((s.values[0] - 4.0).abs() < 1e-13);
        assert!((s.values[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn rectangular_column() {
        let x = Matrix::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let s = singular_values(&x).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.values[0] - 5.0).abs() < 1e-13);
    }

    #[test]
    fn wide_matches_tall() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let s1 = singular_values(&x).unwrap();
        let s2 = singular_values(&x.transpose()).unwrap();
        assert_eq!(s1.len(), 2);
        for (a, b) in s1.values.iter().zip(&s2.values) {
            assert!((a - b).abs() <= 1e-12 * s1.largest());
        }
    }

    #[test]
    fn rotation_matrix_has_unit_values() {
        let th: f64 = 0.83;
        let q = Matrix::from_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]).unwrap();
        let s = singular_values(&q).unwrap();
        for v in &s.values {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn frobenius_identity() {
        let x = Matrix::from_fn(5, 5, |i, j| ((3 * i + 7 * j) as f64).sin() + 0.2 * (i as f64));
        let s = singular_values(&x).unwrap();
        let sum_sq: f64 = s.values.iter().map(|v| v * v).sum();
        let fro2 = x.frobenius_norm().powi(2);
        assert!((sum_sq - fro2).abs() <= 1e-10 * fro2.max(1.0));
    }

    #[test]
    fn psd_matrix_singular_values_are_eigenvalues() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        assert!((s.values[0] - 3.0).abs() < 1e-13);
        assert!((s.values[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn one_by_one() {
        let s = singular_values(&Matrix::diag(&[-2.5])).unwrap();
        assert_eq!(s.values, vec![2.5]);
    }

    #[test]
    fn zero_matrix() {
        let s = singular_values(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0, 0.0]);
    }
}

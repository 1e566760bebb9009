use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Relative symmetry tolerance accepted by `sym_eigen`.
pub const SYMMETRY_REL_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius threshold for Jacobi convergence, relative to ||A||_F.
pub const JACOBI_OFF_TOL: f64 = 1e-14;

/// Sweep cap for the cyclic Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues are sorted in descending order; `eigenvectors` holds the
/// matching orthonormal eigenvectors as columns, so
/// A = U diag(eigenvalues) U^T with U = `eigenvectors`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// U f(diag) U^T, symmetrized so the output is exactly symmetric.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let fvals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = u.scale_cols(&fvals);
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += scaled.get(i, k) * u.get(j, k);
                }
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        out
    }

    /// U diag(eigenvalues) U^T.
    pub fn reconstruct(&self) -> Matrix {
        self.apply(|l| l)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps rotate every off-diagonal pair (p, q) in row order until the
/// off-diagonal Frobenius norm falls below `JACOBI_OFF_TOL * ||A||_F`,
/// erroring out after `JACOBI_MAX_SWEEPS` sweeps. Input asymmetry up to
/// `SYMMETRY_REL_TOL * ||A||_F` is accepted; the upper triangle is used.
pub fn sym_eigen(a: &Matrix) -> Result<SpectralDecomposition> {
    let n = a.require_square()?;
    let norm = a.frobenius_norm();
    let defect = a.symmetry_defect();
    if defect > SYMMETRY_REL_TOL * norm.max(1.0) {
        return Err(Error::NotSymmetric { defect, tol: SYMMETRY_REL_TOL * norm.max(1.0) });
    }

    // work on the exactly-symmetric mirror of the upper triangle
    let mut w = Matrix::from_fn(n, n, |i, j| if i <= j { a.get(i, j) } else { a.get(j, i) });
    let mut u = Matrix::identity(n);
    let threshold = JACOBI_OFF_TOL * norm;

    if n > 1 {
        let mut converged = false;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&w) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut w, &mut u, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&w) > threshold {
            return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable descending sort on the diagonal
    order.sort_by(|&i, &j| w.get(j, j).partial_cmp(&w.get(i, i)).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w.get(i, i)).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| u.get(i, order[j]));
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v = w.get(i, j);
            s += 2.0 * v * v;
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating w[p][q], accumulated into u.
fn rotate(w: &mut Matrix, u: &mut Matrix, p: usize, q: usize) {
    let apq = w.get(p, q);
    if apq == 0.0 {
        return;
    }
    let theta = (w.get(q, q) - w.get(p, p)) / (2.0 * apq);
    // stable tangent of the rotation angle
    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = w.rows();

    let app = w.get(p, p);
    let aqq = w.get(q, q);
    w.set(p, p, app - t * apq);
    w.set(q, q, aqq + t * apq);
    w.set(p, q, 0.0);
    w.set(q, p, 0.0);
    for i in 0..n {
        if i != p && i != q {
            let aip = w.get(i, p);
            let aiq = w.get(i, q);
            let new_p = c * aip - s * aiq;
            let new_q = s * aip + c * aiq;
            w.set(i, p, new_p);
            w.set(p, i, new_p);
            w.set(i, q, new_q);
            w.set(q, i, new_q);
        }
    }
    for i in 0..n {
        let uip = u.get(i, p);
        let uiq = u.get(i, q);
        u.set(i, p, c * uip - s * uiq);
        u.set(i, q, s * uip + c * uiq);
    }
}

/// Tolerance below which an eigenvalue disqualifies a matrix as positive
/// definite: 1e-10 * max(1, ||A||_F).
pub fn pd_tolerance(a: &Matrix) -> f64 {
    1e-10 * a.frobenius_norm().max(1.0)
}

/// Checks positive definiteness via the spectrum: min eigenvalue > tol.
pub fn is_positive_definite(a: &Matrix, tol: f64) -> Result<bool> {
    Ok(sym_eigen(a)?.min_eigenvalue() > tol)
}

/// Eigendecomposition that additionally certifies positive definiteness.
pub fn pd_eigen(a: &Matrix) -> Result<SpectralDecomposition> {
    let dec = sym_eigen(a)?;
    let tol = pd_tolerance(a);
    let min_eig = dec.min_eigenvalue();
    if min_eig <= tol {
        return Err(Error::NotPositiveDefinite { min_eig, tol });
    }
    Ok(dec)
}

/// A^p for symmetric positive definite A: U diag(eig^p) U^T.
pub fn matrix_power(a: &Matrix, p: f64) -> Result<Matrix> {
    if !p.is_finite() {
        return Err(Error::InvalidInput("power must be finite".into()));
    }
    Ok(pd_eigen(a)?.apply(|l| l.powf(p)))
}

/// Inverse of a symmetric positive definite matrix.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    matrix_power(a, -1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eigen_2x2_known_values() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let dec = sym_eigen(&a).unwrap();
        assert_close(dec.eigenvalues[0], 3.0, 1e-12);
        assert_close(dec.eigenvalues[1], 1.0, 1e-12);
    }

    #[test]
    fn eigen_identity() {
        let dec = sym_eigen(&Matrix::identity(3)).unwrap();
        for l in &dec.eigenvalues {
            assert_close(*l, 1.0, 1e-14);
        }
        let r = dec.reconstruct();
        assert!((&r - &Matrix::identity(3)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn eigen_diagonal_sorted_descending() {
        let a = Matrix::diag(&[5.0, -2.0]);
        let dec = sym_eigen(&a).unwrap();
        assert_eq!(dec.eigenvalues, vec![5.0, -2.0]);
        let b = Matrix::diag(&[-2.0, 5.0]);
        let dec = sym_eigen(&b).unwrap();
        assert_eq!(dec.eigenvalues, vec![5.0, -2.0]);
    }

    #[test]
    fn eigen_1x1() {
        let dec = sym_eigen(&Matrix::diag(&[7.5])).unwrap();
        assert_eq!(dec.eigenvalues, vec![7.5]);
        assert_eq!(dec.eigenvectors.get(0, 0), 1.0);
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        assert!(matches!(sym_eigen(&a), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigen_orthogonality_and_reconstruction() {
        // deterministic ill-scaled symmetric matrix
        let n = 6;
        let a = Matrix::from_fn(n, n, |i, j| {
            let (i, j) = (i as f64, j as f64);
            ((i + 1.0) * (j + 1.0)).sin() + if i == j { 3.0 + i } else { 0.0 }
        })
        .symmetrize();
        let dec = sym_eigen(&a).unwrap();
        let u = &dec.eigenvectors;
        let gram = &u.transpose() * u;
        assert!((&gram - &Matrix::identity(n)).frobenius_norm() <= 1e-12 * n as f64);
        let resid = (&dec.reconstruct() - &a).frobenius_norm();
        assert!(resid <= 1e-12 * n as f64 * a.frobenius_norm());
    }

    #[test]
    fn matrix_power_sqrt() {
        let a = Matrix::diag(&[4.0, 9.0]);
        let r = matrix_power(&a, 0.5).unwrap();
        assert!((&r - &Matrix::diag(&[2.0, 3.0])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn matrix_power_zero_gives_identity() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let r = matrix_power(&a, 0.0).unwrap();
        assert!((&r - &Matrix::identity(2)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn matrix_power_negative() {
        let a = Matrix::diag(&[4.0]);
        let r = matrix_power(&a, -2.0).unwrap();
        assert_close(r.get(0, 0), 1.0 / 16.0, 1e-14);
    }

    #[test]
    fn matrix_power_group_law() {
        let a = Matrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let p = matrix_power(&a, 0.7).unwrap();
        let q = matrix_power(&a, 0.3).unwrap();
        let pq = &p * &q;
        assert!((&pq - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn matrix_power_integer_matches_repeated_multiplication() {
        let a = Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.5]]).unwrap();
        let p3 = matrix_power(&a, 3.0).unwrap();
        let direct = &(&a * &a) * &a;
        assert!((&p3 - &direct).frobenius_norm() <= 1e-10 * direct.frobenius_norm());
    }

    #[test]
    fn matrix_power_rejects_non_pd() {
        let a = Matrix::diag(&[1.0, -1.0]);
        assert!(matches!(matrix_power(&a, 0.5), Err(Error::NotPositiveDefinite { .. })));
        let z = Matrix::diag(&[1.0, 0.0]);
        assert!(matrix_power(&z, 0.5).is_err());
    }

    #[test]
    fn inverse_diagonal() {
        let a = Matrix::diag(&[2.0, 4.0]);
        let inv = inverse(&a).unwrap();
        assert!((&inv - &Matrix::diag(&[0.5, 0.25])).frobenius_norm() < 1e-13);
    }

    #[test]
    fn inverse_residual() {
        let a = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let resid = (&(&a * &inv) - &Matrix::identity(2)).frobenius_norm();
        assert!(resid <= 1e-10 * 2.0);
    }

    #[test]
    fn is_pd_thresholds() {
        assert!(is_positive_definite(&Matrix::diag(&[1.0, 2.0]), 1e-10).unwrap());
        assert!(!is_positive_definite(&Matrix::diag(&[1.0, 0.0]), 1e-10).unwrap());
        assert!(!is_positive_definite(&Matrix::diag(&[1.0, -2.0]), 1e-10).unwrap());
    }
}

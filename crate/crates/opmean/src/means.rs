//! Weighted matrix means on positive definite pairs.
//!
//! For a weight nu (any real, not just [0, 1]):
//!   arithmetic  A nabla_nu B = (1 - nu) A + nu B
//!   geometric   A #_nu B     = A^(1/2) (A^(-1/2) B A^(-1/2))^nu A^(1/2)
//!   harmonic    A !_nu B     = ((1 - nu) A^(-1) + nu B^(-1))^(-1)
//!   heinz       H_nu(A, B)   = (A #_nu B + A #_(1-nu) B) / 2
//!
//! Outside [0, 1] the harmonic combination can lose definiteness; that is
//! reported as a domain error naming the failed hypothesis, never as a
//! silently wrong value.

use crate::eigen::{pd_eigen, pd_tolerance, sym_eigen};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest admissible |nu|; far beyond every grid used here, but keeps
/// powered spectra inside double range.
pub const MAX_WEIGHT: f64 = 64.0;

/// Validated mean weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanWeight(f64);

impl MeanWeight {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > MAX_WEIGHT {
            return Err(Error::InvalidInput(format!(
                "mean weight nu = {nu} outside admissible range [-{MAX_WEIGHT}, {MAX_WEIGHT}]"
            )));
        }
        Ok(MeanWeight(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    let n = a.require_square()?;
    let m = b.require_square()?;
    if n != m {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("{m}x{m}"),
        });
    }
    Ok(())
}

/// (1 - nu) A + nu B. Positive definiteness of the inputs is the caller's
/// contract; shape and weight are enforced here.
pub fn arithmetic_mean(a: &Matrix, b: &Matrix, nu: f64) -> Result<Matrix> {
    let nu = MeanWeight::new(nu)?.value();
    check_pair(a, b)?;
    Ok(Matrix::linear_comb(1.0 - nu, a, nu, b))
}

/// A^(1/2) (A^(-1/2) B A^(-1/2))^nu A^(1/2), positive definite for every
/// real nu. Two spectral decompositions: one of A, one of the inner term.
pub fn geometric_mean(a: &Matrix, b: &Matrix, nu: f64) -> Result<Matrix> {
    let nu = MeanWeight::new(nu)?.value();
    check_pair(a, b)?;
    let dec_a = pd_eigen(a)?;
    let a_half = dec_a.apply(|l| l.sqrt());
    let a_neg_half = dec_a.apply(|l| 1.0 / l.sqrt());
    let w = (&(&a_neg_half * b) * &a_neg_half).symmetrize();
    let dec_w = pd_eigen(&w)?;
    let w_nu = dec_w.apply(|l| l.powf(nu));
    Ok((&(&a_half * &w_nu) * &a_half).symmetrize())
}

/// ((1 - nu) A^(-1) + nu B^(-1))^(-1). For weights outside [0, 1] the inner
/// combination may fail to be positive definite; that case is a domain
/// error naming the violated hypothesis.
pub fn harmonic_mean(a: &Matrix, b: &Matrix, nu: f64) -> Result<Matrix> {
    let nu = MeanWeight::new(nu)?.value();
    check_pair(a, b)?;
    let ia = pd_eigen(a)?.apply(|l| 1.0 / l);
    let ib = pd_eigen(b)?.apply(|l| 1.0 / l);
    let comb = Matrix::linear_comb(1.0 - nu, &ia, nu, &ib);
    let dec = sym_eigen(&comb)?;
    let tol = pd_tolerance(&comb);
    if dec.min_eigenvalue() <= tol {
        return Err(Error::Domain(format!(
            "harmonic mean undefined at nu = {nu}: (1-nu)*A^-1 + nu*B^-1 \
             is not positive definite (min eigenvalue {:.6e})",
            dec.min_eigenvalue()
        )));
    }
    Ok(dec.apply(|l| 1.0 / l))
}

/// (A #_nu B + A #_(1-nu) B) / 2.
///
/// The two exponents are canonicalized so that calls with nu and with
/// 1 - nu evaluate the same geometric-mean pair and return bitwise
/// identical results.
pub fn heinz_mean(a: &Matrix, b: &Matrix, nu: f64) -> Result<Matrix> {
    MeanWeight::new(nu)?;
    let w = 1.0 - nu;
    let nu_c = 1.0 - w;
    let g1 = geometric_mean(a, b, nu_c)?;
    let g2 = geometric_mean(a, b, w)?;
    Ok(g1.add(&g2).scale(0.5))
}

//! Unitarily invariant norms, compound matrices, and log-majorization.

use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, ToleranceConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::{singular_values, SingularValues};

/// Relative threshold under which a singular value counts as zero for
/// log-majorization purposes (products would be meaningless).
pub const LOG_MAJOR_ZERO_TOL: f64 = 1e-13;

/// Family of unitarily invariant norms, evaluated from singular values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// (sum s_j^p)^(1/p) for p >= 1; p = infinity gives the spectral norm.
    Schatten(f64),
    /// Sum of the k largest singular values.
    KyFan(usize),
    /// Schatten-2.
    HilbertSchmidt,
    /// Schatten-1.
    Trace,
    /// Largest singular value.
    Spectral,
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKind::Schatten(p) if p.is_infinite() => write!(f, "schatten-inf"),
            NormKind::Schatten(p) => write!(f, "schatten-{p}"),
            NormKind::KyFan(k) => write!(f, "kyfan-{k}"),
            NormKind::HilbertSchmidt => write!(f, "hilbert-schmidt"),
            NormKind::Trace => write!(f, "trace"),
            NormKind::Spectral => write!(f, "spectral"),
        }
    }
}

/// The five norm families at canonical parameters, as exercised by the
/// suites: trace, Hilbert-Schmidt, spectral, Schatten-3, Ky Fan-min(2, n).
pub fn canonical_kinds(n: usize) -> Vec<NormKind> {
    vec![
        NormKind::Trace,
        NormKind::HilbertSchmidt,
        NormKind::Spectral,
        NormKind::Schatten(3.0),
        NormKind::KyFan(2.min(n)),
    ]
}

fn norm_from_values(s: &SingularValues, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::Schatten(p) => {
            if p.is_nan() || p < 1.0 {
                return Err(Error::InvalidInput(format!("Schatten exponent p = {p} must be >= 1")));
            }
            if p.is_infinite() {
                return Ok(s.largest());
            }
            Ok(s.values.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p))
        }
        NormKind::KyFan(k) => {
            if k == 0 || k > s.len() {
                return Err(Error::InvalidInput(format!(
                    "Ky Fan order k = {k} outside 1..={}",
                    s.len()
                )));
            }
            Ok(s.values[..k].iter().sum())
        }
        NormKind::HilbertSchmidt => Ok(s.values.iter().map(|v| v * v).sum::<f64>().sqrt()),
        NormKind::Trace => Ok(s.sum()),
        NormKind::Spectral => Ok(s.largest()),
    }
}

/// Unitarily invariant norm of X, computed from its singular values.
pub fn ui_norm(x: &Matrix, kind: NormKind) -> Result<f64> {
    norm_from_values(&singular_values(x)?, kind)
}

/// Hilbert-Schmidt norm straight from the entries; the independent route
/// against which the singular-value evaluation is cross-checked.
pub fn hs_norm_entrywise(x: &Matrix) -> f64 {
    x.frobenius_norm()
}

/// k-element subsets of 0..n in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// k-th compound (multiplicative) matrix: entry (r, s) is the k x k minor
/// det X[rows r | cols s], with the subsets in lexicographic order.
pub fn compound_matrix(x: &Matrix, k: usize) -> Result<Matrix> {
    let n = x.require_square()?;
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("compound order k = {k} outside 1..={n}")));
    }
    let subsets = k_subsets(n, k);
    let m = subsets.len();
    let mut out = Matrix::zeros(m, m);
    let mut minor = Matrix::zeros(k, k);
    for (ri, rows) in subsets.iter().enumerate() {
        for (ci, cols) in subsets.iter().enumerate() {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    minor.set(i, j, x.get(r, c));
                }
            }
            out.set(ri, ci, minor.determinant()?);
        }
    }
    Ok(out)
}

/// Prefix-product comparison underlying log-majorization.
///
/// `prefix_lhs[k-1]` is the product of the k largest lhs values;
/// `prefix_rhs` multiplies the factored right side, each factor being a
/// singular value vector raised to its exponent. `holds` requires every
/// prefix of the left side to dominate the right within the relative
/// tolerance, and the full products to agree within it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub prefix_lhs: Vec<f64>,
    pub prefix_rhs: Vec<f64>,
    pub holds: bool,
    pub final_equality_gap: f64,
}

fn validate_log_vector(v: &SingularValues) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty singular value vector".into()));
    }
    let top = v.largest();
    for w in v.values.windows(2) {
        if w[1] > w[0] {
            return Err(Error::InvalidInput("singular values must be sorted descending".into()));
        }
    }
    if v.smallest() <= LOG_MAJOR_ZERO_TOL * top || top <= 0.0 {
        return Err(Error::Domain(format!(
            "singular value {:.3e} is zero relative to {:.3e}; log-majorization needs \
             an effectively invertible matrix",
            v.smallest(),
            top
        )));
    }
    Ok(())
}

/// Checks that `lhs` log-majorizes the factored product on the right:
/// for every k, prod of k largest lhs values >= prod over factors of
/// (prod of k largest factor values)^exponent, with equality of the full
/// products. Zero or negative values are rejected.
pub fn log_majorization_check(
    lhs: &SingularValues,
    rhs_factors: &[(SingularValues, f64)],
    rel_tol: f64,
) -> Result<MajorizationReport> {
    validate_log_vector(lhs)?;
    let n = lhs.len();
    for (f, e) in rhs_factors {
        if f.len() != n {
            return Err(Error::DimensionMismatch {
                left: format!("lhs length {n}"),
                right: format!("factor length {}", f.len()),
            });
        }
        if !e.is_finite() {
            return Err(Error::InvalidInput("factor exponent must be finite".into()));
        }
        validate_log_vector(f)?;
    }

    let mut prefix_lhs = Vec::with_capacity(n);
    let mut acc = 1.0;
    for v in &lhs.values {
        acc *= v;
        prefix_lhs.push(acc);
    }
    let mut prefix_rhs = vec![1.0; n];
    for (f, e) in rhs_factors {
        let mut acc = 1.0;
        for (k, v) in f.values.iter().enumerate() {
            acc *= v;
            prefix_rhs[k] *= acc.powf(*e);
        }
    }

    let mut holds = true;
    for k in 0..n {
        if prefix_lhs[k] < prefix_rhs[k] * (1.0 - rel_tol) {
            holds = false;
        }
    }
    let final_equality_gap = prefix_lhs[n - 1] / prefix_rhs[n - 1] - 1.0;
    if final_equality_gap.abs() > rel_tol {
        holds = false;
    }
    Ok(MajorizationReport { prefix_lhs, prefix_rhs, holds, final_equality_gap })
}

/// Singular-value pairing bounds for a product:
/// sum_j s_j(A) s_(n-j+1)(B) <= sum_j s_j(AB) <= sum_j s_j(A) s_j(B).
/// The lower bound pairs the largest values of A with the smallest of B.
pub fn sv_sum_bounds(a: &Matrix, b: &Matrix, tol: &ToleranceConfig) -> Result<CheckResult> {
    let n = a.require_square()?;
    let m = b.require_square()?;
    if n != m {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("{m}x{m}"),
        });
    }
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let sab = singular_values(&(a * b))?;
    let lower: f64 = (0..n).map(|j| sa.values[j] * sb.values[n - 1 - j]).sum();
    let mid = sab.sum();
    let upper: f64 = (0..n).map(|j| sa.values[j] * sb.values[j]).sum();

    let (m1, p1) = tol.scalar_slack(lower, mid);
    let (m2, p2) = tol.scalar_slack(mid, upper);
    let mut result = CheckResult::scalar("chain", f64::NAN, n, lower, upper, m1.min(m2), p1 && p2);
    result.witness.matrices.push(("A".into(), a.clone()));
    result.witness.matrices.push(("B".into(), b.clone()));
    result.witness.params.push(("sum_lower".into(), lower));
    result.witness.params.push(("sum_product".into(), mid));
    result.witness.params.push(("sum_upper".into(), upper));
    Ok(result)
}

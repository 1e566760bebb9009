//! Deterministic matrix samplers feeding the verification suites.
//!
//! All randomness flows through a counter-based ChaCha8 stream cipher RNG:
//! one master seed plus a per-trial stream id reproduces any trial in
//! isolation, bitwise, regardless of execution order or thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::singular_values;

/// Name of the RNG recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8 counter-based stream cipher (rand_chacha)";

/// Rejection threshold for near-singular general samples: smallest singular
/// value below 1e-6 of the largest.
pub const GENERAL_COND_REJECT: f64 = 1e-6;

const MAX_ATTEMPTS: usize = 100;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub dim_range: (usize, usize),
    pub eig_range: (f64, f64),
    pub r_grid_pos: Vec<f64>,
    pub r_grid_neg: Vec<f64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            dim_range: (1, 6),
            eig_range: (0.5, 4.0),
            r_grid_pos: vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0],
            r_grid_neg: vec![-0.5, -0.75, -1.0, -1.5, -2.0],
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.eig_range;
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi < lo {
            return Err(Error::InvalidInput(format!(
                "eigenvalue range [{lo}, {hi}] must be finite, positive, ordered"
            )));
        }
        if self.dim_range.0 == 0 || self.dim_range.1 < self.dim_range.0 {
            return Err(Error::InvalidInput(format!(
                "dimension range {:?} must be ordered and start at 1 or above",
                self.dim_range
            )));
        }
        if self.r_grid_pos.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidInput("positive r grid must be finite and >= 0".into()));
        }
        if self.r_grid_neg.iter().any(|r| !r.is_finite() || *r >= 0.0) {
            return Err(Error::InvalidInput("negative r grid must be finite and < 0".into()));
        }
        Ok(())
    }
}

/// Stable 64-bit stream id for a (suite, variant, dim, trial) cell
/// (FNV-1a over the labels), so every trial owns an independent RNG
/// substream no matter which suites run or in what order.
pub fn stream_id(suite: &str, variant: &str, dim: usize, trial: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(suite.as_bytes());
    eat(b"/");
    eat(variant.as_bytes());
    eat(b"/");
    eat(&dim.to_le_bytes());
    eat(&trial.to_le_bytes());
    h
}

/// Randomness source for one trial.
pub struct Sampler {
    rng: ChaCha8Rng,
    eig_range: (f64, f64),
}

impl Sampler {
    /// Seeds from the config and jumps to the given stream. Re-creating a
    /// sampler with the same (seed, stream) replays the trial bitwise.
    pub fn for_trial(cfg: &SamplerConfig, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Sampler { rng, eig_range: cfg.eig_range }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            self.rng.gen_range(lo..=hi)
        }
    }

    /// Standard normal via Box-Muller on the uniform stream.
    pub fn gaussian(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>(); // (0, 1]
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.gaussian());
            }
        }
        m
    }

    /// Random orthogonal matrix: modified Gram-Schmidt with one
    /// re-orthogonalization pass over a Gaussian matrix.
    pub fn orthogonal(&mut self, n: usize) -> Result<Matrix> {
        'attempt: for _ in 0..MAX_ATTEMPTS {
            let mut q = self.gaussian_matrix(n, n);
            for j in 0..n {
                for _pass in 0..2 {
                    for k in 0..j {
                        let mut dot = 0.0;
                        for i in 0..n {
                            dot += q.get(i, k) * q.get(i, j);
                        }
                        for i in 0..n {
                            let v = q.get(i, j) - dot * q.get(i, k);
                            q.set(i, j, v);
                        }
                    }
                }
                let norm = (0..n).map(|i| q.get(i, j).powi(2)).sum::<f64>().sqrt();
                if norm < 1e-8 {
                    continue 'attempt;
                }
                for i in 0..n {
                    q.set(i, j, q.get(i, j) / norm);
                }
            }
            return Ok(q);
        }
        Err(Error::InvalidInput("orthogonal sampling failed to produce independent columns".into()))
    }

    fn conjugate_diag(q: &Matrix, eigs: &[f64]) -> Matrix {
        let n = eigs.len();
        let scaled = q.scale_cols(eigs);
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += scaled.get(i, k) * q.get(j, k);
                }
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        out
    }

    fn eig_draws(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Random positive definite matrix: Q diag(eigs) Q^T with eigenvalues
    /// uniform in the configured range.
    pub fn pd(&mut self, n: usize) -> Result<Matrix> {
        let (lo, hi) = self.eig_range;
        let eigs = self.eig_draws(n, lo, hi);
        let q = self.orthogonal(n)?;
        Ok(Self::conjugate_diag(&q, &eigs))
    }

    /// Pair with lambda_min(A) >= m >= lambda_max(B) by construction; the
    /// split point m is drawn from the interior of the eigenvalue range.
    pub fn ordered_pair(&mut self, n: usize) -> Result<(Matrix, Matrix, f64)> {
        let (lo, hi) = self.eig_range;
        let span = hi - lo;
        let m = self.uniform(lo + 0.25 * span, hi - 0.25 * span);
        let a_eigs = self.eig_draws(n, m, hi);
        let b_eigs = self.eig_draws(n, lo, m);
        let qa = self.orthogonal(n)?;
        let qb = self.orthogonal(n)?;
        Ok((Self::conjugate_diag(&qa, &a_eigs), Self::conjugate_diag(&qb, &b_eigs), m))
    }

    /// Several pairs sharing one split point m, so that
    /// min_j lambda_min(A_j) >= m >= max_j lambda_max(B_j).
    pub fn ordered_group(&mut self, n: usize, count: usize) -> Result<Vec<(Matrix, Matrix)>> {
        let (lo, hi) = self.eig_range;
        let span = hi - lo;
        let m = self.uniform(lo + 0.25 * span, hi - 0.25 * span);
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let a_eigs = self.eig_draws(n, m, hi);
            let b_eigs = self.eig_draws(n, lo, m);
            let qa = self.orthogonal(n)?;
            let qb = self.orthogonal(n)?;
            pairs.push((Self::conjugate_diag(&qa, &a_eigs), Self::conjugate_diag(&qb, &b_eigs)));
        }
        Ok(pairs)
    }

    /// Pair with A <= B in the Loewner order: B = A + P for a random
    /// positive semidefinite P (occasionally with exact zero eigenvalues).
    /// Both spectra stay inside the configured eigenvalue range.
    pub fn dominated_pair(&mut self, n: usize) -> Result<(Matrix, Matrix)> {
        let (lo, hi) = self.eig_range;
        let mid = 0.5 * (lo + hi);
        let a_eigs = self.eig_draws(n, lo, mid);
        let qa = self.orthogonal(n)?;
        let a = Self::conjugate_diag(&qa, &a_eigs);
        let p_eigs: Vec<f64> = (0..n)
            .map(|_| {
                let v = self.uniform(0.0, hi - mid);
                // exact zeros exercise the semidefinite boundary
                if self.rng.gen::<f64>() < 0.125 {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        let qp = self.orthogonal(n)?;
        let p = Self::conjugate_diag(&qp, &p_eigs);
        Ok((a.clone(), a.add(&p).symmetrize()))
    }

    /// Pair with A >= (r/(r+1)) B by construction: A = (r/(r+1)) B + P
    /// for positive definite P.
    pub fn ratio_pair(&mut self, n: usize, r: f64) -> Result<(Matrix, Matrix)> {
        assert!(r >= 0.0, "ratio pair requires r >= 0");
        let b = self.pd(n)?;
        let p = self.pd(n)?;
        let a = Matrix::linear_comb(r / (r + 1.0), &b, 1.0, &p).symmetrize();
        Ok((a, b))
    }

    /// General (nonsymmetric) Gaussian matrix, rejected while the smallest
    /// singular value is below `GENERAL_COND_REJECT` of the largest.
    pub fn general(&mut self, n: usize) -> Result<Matrix> {
        for _ in 0..MAX_ATTEMPTS {
            let x = self.gaussian_matrix(n, n);
            let s = singular_values(&x)?;
            if s.smallest() >= GENERAL_COND_REJECT * s.largest() && s.largest() > 0.0 {
                return Ok(x);
            }
        }
        Err(Error::InvalidInput("general sampling kept hitting near-singular matrices".into()))
    }

    /// Invertible matrix with singular values in [0.5, 2]: orthogonal,
    /// diagonal, orthogonal. Used where a congruence needs to stay far
    /// from singular.
    pub fn well_conditioned(&mut self, n: usize) -> Result<Matrix> {
        let q1 = self.orthogonal(n)?;
        let q2 = self.orthogonal(n)?;
        let d: Vec<f64> = (0..n).map(|_| self.uniform(0.5, 2.0)).collect();
        Ok(&q1.scale_cols(&d) * &q2.transpose())
    }

    /// Unit column vector (Gaussian direction, normalized).
    pub fn unit_vector(&mut self, n: usize) -> Result<Matrix> {
        for _ in 0..MAX_ATTEMPTS {
            let v = self.gaussian_matrix(n, 1);
            let norm = v.frobenius_norm();
            if norm > 1e-6 {
                return Ok(v.scale(1.0 / norm));
            }
        }
        Err(Error::InvalidInput("unit vector sampling failed".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::sym_eigen;

    fn cfg() -> SamplerConfig {
        SamplerConfig { seed: 42, ..SamplerConfig::default() }
    }

    #[test]
    fn pd_samples_stay_in_eig_envelope() {
        let cfg = cfg();
        for trial in 0..50 {
            let mut s = Sampler::for_trial(&cfg, trial);
            let n = 1 + (trial as usize % 6);
            let a = s.pd(n).unwrap();
            let dec = sym_eigen(&a).unwrap();
            assert!(dec.min_eigenvalue() > 0.5 - 1e-9, "min {}", dec.min_eigenvalue());
            assert!(dec.max_eigenvalue() < 4.0 + 1e-9, "max {}", dec.max_eigenvalue());
            // condition-number cap 8 under the default range
            assert!(dec.max_eigenvalue() / dec.min_eigenvalue() <= 8.0 + 1e-6);
        }
    }

    #[test]
    fn same_stream_replays_bitwise() {
        let cfg = cfg();
        let a1 = Sampler::for_trial(&cfg, 7).pd(4).unwrap();
        let a2 = Sampler::for_trial(&cfg, 7).pd(4).unwrap();
        assert_eq!(a1, a2);
        for (x, y) in a1.data().iter().zip(a2.data()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let b = Sampler::for_trial(&cfg, 8).pd(4).unwrap();
        assert_ne!(a1, b);
    }

    #[test]
    fn different_seeds_differ() {
        let c1 = cfg();
        let c2 = SamplerConfig { seed: 43, ..cfg() };
        assert_ne!(
            Sampler::for_trial(&c1, 0).pd(3).unwrap(),
            Sampler::for_trial(&c2, 0).pd(3).unwrap()
        );
    }

    #[test]
    fn ordered_pair_is_split_by_m() {
        let cfg = cfg();
        for trial in 0..30 {
            let mut s = Sampler::for_trial(&cfg, 1000 + trial);
            let (a, b, m) = s.ordered_pair(3).unwrap();
            let da = sym_eigen(&a).unwrap();
            let db = sym_eigen(&b).unwrap();
            assert!(da.min_eigenvalue() >= m - 1e-9);
            assert!(db.max_eigenvalue() <= m + 1e-9);
        }
    }

    #[test]
    fn dominated_pair_orders_and_stays_bounded() {
        let cfg = cfg();
        for trial in 0..30 {
            let mut s = Sampler::for_trial(&cfg, 2000 + trial);
            let (a, b) = s.dominated_pair(4).unwrap();
            let gap = sym_eigen(&b.sub(&a)).unwrap();
            assert!(gap.min_eigenvalue() >= -1e-10);
            let db = sym_eigen(&b).unwrap();
            assert!(db.max_eigenvalue() <= 4.0 + 1e-8);
            assert!(db.min_eigenvalue() >= 0.5 - 1e-8);
        }
    }

    #[test]
    fn ratio_pair_satisfies_hypothesis() {
        let cfg = cfg();
        for (trial, r) in [(0u64, 0.5), (1, 1.0), (2, 4.0)] {
            let mut s = Sampler::for_trial(&cfg, 3000 + trial);
            let (a, b) = s.ratio_pair(3, r).unwrap();
            let gap = a.sub(&b.scale(r / (r + 1.0)));
            assert!(sym_eigen(&gap).unwrap().min_eigenvalue() > 0.0);
        }
    }

    #[test]
    fn general_rejects_near_singular() {
        let cfg = cfg();
        for trial in 0..30 {
            let mut s = Sampler::for_trial(&cfg, 4000 + trial);
            let x = s.general(4).unwrap();
            let sv = singular_values(&x).unwrap();
            assert!(sv.smallest() >= GENERAL_COND_REJECT * sv.largest());
        }
    }

    #[test]
    fn unit_vector_has_unit_norm() {
        let cfg = cfg();
        for n in 1..=6 {
            let mut s = Sampler::for_trial(&cfg, 5000 + n as u64);
            let v = s.unit_vector(n).unwrap();
            assert_eq!(v.cols(), 1);
            assert!((v.frobenius_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_sample_is_orthogonal() {
        let cfg = cfg();
        let q = Sampler::for_trial(&cfg, 60).orthogonal(5).unwrap();
        let gram = &q.transpose() * &q;
        assert!((&gram - &Matrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn stream_ids_are_distinct_across_cells() {
        let a = stream_id("suite-a", "v", 3, 7);
        let b = stream_id("suite-a", "v", 3, 8);
        let c = stream_id("suite-a", "v", 4, 7);
        let d = stream_id("suite-b", "v", 3, 7);
        let e = stream_id("suite-a", "w", 3, 7);
        let ids = [a, b, c, d, e];
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                assert_ne!(ids[i], ids[j]);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let bad = SamplerConfig { eig_range: (-1.0, 2.0), ..cfg() };
        assert!(bad.validate().is_err());
        let bad = SamplerConfig { dim_range: (3, 2), ..cfg() };
        assert!(bad.validate().is_err());
        let bad = SamplerConfig { r_grid_neg: vec![0.5], ..cfg() };
        assert!(bad.validate().is_err());
    }
}

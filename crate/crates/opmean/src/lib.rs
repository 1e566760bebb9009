//! Weighted operator means, unitarily invariant norms, and a verification
//! harness for reverse Young-type matrix inequalities.
//!
//! The crate is organized in three layers:
//!
//! * dense symmetric kernels — a cyclic Jacobi eigensolver, a one-sided
//!   Jacobi SVD, and a pivoted determinant ([`eigen`], [`svd`], [`matrix`]);
//! * the operator-mean and norm algebra built on those kernels ([`means`],
//!   [`norms`], [`loewner`]);
//! * a randomized check harness that samples matrices under each
//!   inequality's hypothesis and reports normalized margins ([`suites`],
//!   [`runner`], [`sampling`]).
//!
//! All arithmetic is real `f64`; matrices are dense and row-major.

pub mod check;
pub mod eigen;
pub mod error;
pub mod loewner;
pub mod matrix;
pub mod means;
pub mod norms;
pub mod runner;
pub mod sampling;
pub mod suites;
pub mod svd;

pub use check::{CheckResult, ToleranceConfig, Witness};
pub use eigen::{inverse, is_positive_definite, matrix_power, pd_eigen, sym_eigen, SpectralDecomposition};
pub use error::{Error, Result};
pub use loewner::{loewner_compare, LoewnerRelation, LoewnerVerdict};
pub use matrix::Matrix;
pub use means::{arithmetic_mean, geometric_mean, harmonic_mean, heinz_mean, MeanWeight};
pub use norms::{compound_matrix, hs_norm_entrywise, log_majorization_check, ui_norm, NormKind};
pub use runner::{registry, resolve_suites, run_suites, RunConfig, SuiteReport};
pub use sampling::{stream_id, Sampler, SamplerConfig};
pub use svd::{singular_values, SingularValues};

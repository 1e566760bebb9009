//! Suite registry and the harness that runs registered suites over sampled
//! inputs, producing a deterministic, serializable report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, ToleranceConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::norms::{canonical_kinds, sv_sum_bounds};
use crate::sampling::{stream_id, Sampler, SamplerConfig, RNG_ALGORITHM};
use crate::suites::{
    check_det, check_holder_mccarthy, check_hs, check_hs_monotone, check_log_major,
    check_operator_mean, check_reference, check_scalar, check_trace, check_ui_norm, HsVariant,
    LogMajorVariant, MeanVariant, RefVariant, ScalarVariant, UiVariant,
};

pub const REPORT_SCHEMA: &str = "opmean.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteKind {
    ScalarBasic,
    ScalarSquared,
    ScalarRefined,
    ScalarCounterexample,
    HsOrdered,
    HsWeak,
    HsMonotone,
    UiRatio,
    UiLinear,
    UiRefined,
    MeanReverseAg,
    MeanRefined,
    MeanHarmonic,
    MeanHeinz,
    MeanEqualityGap,
    HolderMccarthy,
    TraceReverse,
    DetReverse,
    LogMajorI,
    LogMajorII,
    RefAghChain,
    RefKittanehSandwich,
    RefHeinzInterpolation,
    RefNormInterp,
    RefSpectralHeinz,
    RefSvSum,
}

/// A registered suite: the checker plus the documentation `explain` prints.
pub struct SuiteSpec {
    pub name: &'static str,
    pub statement: &'static str,
    pub hypothesis: &'static str,
    pub sampling: &'static str,
    /// Regression suites whose single check is supposed to violate its
    /// inequality; a pass there is the failure.
    pub expected_failure: bool,
    kind: SuiteKind,
}

static REGISTRY: &[SuiteSpec] = &[
    SuiteSpec {
        name: "scalar-basic",
        statement: "(1+r)a - rb <= a^(1+r) b^(-r) for positive scalars",
        hypothesis: "a, b > 0; r >= 0 or r <= -1",
        sampling: "a, b uniform in the eigenvalue range; r rotates through the admissible grid",
        expected_failure: false,
        kind: SuiteKind::ScalarBasic,
    },
    SuiteSpec {
        name: "scalar-squared",
        statement: "((1+r)a - rb)^2 <= (a^(1+r) b^(-r))^2",
        hypothesis: "a >= b > 0 with r >= 0, or b >= a > 0 with r <= -1 (squaring is invalid when the linear side is negative)",
        sampling: "a, b uniform, swapped to satisfy the ordering for the branch of r",
        expected_failure: false,
        kind: SuiteKind::ScalarSquared,
    },
    SuiteSpec {
        name: "scalar-refined",
        statement: "(1+r)a - rb + r(sqrt(a) - sqrt(b))^2 <= a^(1+r) b^(-r)",
        hypothesis: "a, b > 0; r >= 0 or r <= -1/2",
        sampling: "a, b uniform in the eigenvalue range; r rotates through the admissible grid",
        expected_failure: false,
        kind: SuiteKind::ScalarRefined,
    },
    SuiteSpec {
        name: "scalar-squared-counterexample",
        statement: "the squared inequality evaluated outside its hypothesis at (a, b, r) = (1, 4, 2): 25 > 1/256",
        hypothesis: "deliberately violated: a < b with r >= 0",
        sampling: "fixed inputs (1, 4, 2); a single regression trial",
        expected_failure: true,
        kind: SuiteKind::ScalarCounterexample,
    },
    SuiteSpec {
        name: "hs-ordered",
        statement: "||(1+r)AX - rXB||_2 <= ||A^(1+r) X B^(-r)||_2",
        hypothesis: "lambda_min(A) >= lambda_max(B) > 0 (r >= 0), roles swapped for r <= -1",
        sampling: "spectra split around a shared point m; X dense Gaussian",
        expected_failure: false,
        kind: SuiteKind::HsOrdered,
    },
    SuiteSpec {
        name: "hs-weak",
        statement: "||(1+r)AX - rXB||_2^2 <= ||A^(1+r) X B^(-r)||_2^2 + r^2 ||AX - XB||_2^2",
        hypothesis: "A, B > 0; r >= 0 or r <= -1/2; no ordering between A and B",
        sampling: "independent positive definite pair; X dense Gaussian",
        expected_failure: false,
        kind: SuiteKind::HsWeak,
    },
    SuiteSpec {
        name: "hs-monotone",
        statement: "the ordered Hilbert-Schmidt inequality applied to sums of t^s images of ordered pairs",
        hypothesis: "each pair ordered across one shared split point; s in (0, 1]; r >= 0 or r <= -1",
        sampling: "three ordered pairs sharing one split point; s rotates through {1, 0.5, 0.25, 0.75}",
        expected_failure: false,
        kind: SuiteKind::HsMonotone,
    },
    SuiteSpec {
        name: "ui-ratio",
        statement: "|||AX|||^(1+r) |||XB|||^(-r) <= |||A^(1+r) X B^(-r)||| for every unitarily invariant norm",
        hypothesis: "A, B > 0; X != 0; r >= 0 or r <= -1",
        sampling: "positive definite pair and Gaussian X; checked against the five canonical norm kinds",
        expected_failure: false,
        kind: SuiteKind::UiRatio,
    },
    SuiteSpec {
        name: "ui-linear",
        statement: "(1+r)|||AX||| - r|||XB||| <= |||A^(1+r) X B^(-r)|||",
        hypothesis: "A, B > 0; X != 0; r >= 0 or r <= -1",
        sampling: "positive definite pair and Gaussian X; checked against the five canonical norm kinds",
        expected_failure: false,
        kind: SuiteKind::UiLinear,
    },
    SuiteSpec {
        name: "ui-refined",
        statement: "(1+r)|||AX||| - r|||XB||| + r(sqrt|||AX||| - sqrt|||XB|||)^2 <= |||A^(1+r) X B^(-r)|||",
        hypothesis: "A, B > 0; X != 0; r >= 0",
        sampling: "positive definite pair and Gaussian X; checked against the five canonical norm kinds",
        expected_failure: false,
        kind: SuiteKind::UiRefined,
    },
    SuiteSpec {
        name: "mean-reverse-ag",
        statement: "A nabla_(-r) B <= A #_(-r) B: the arithmetic-geometric inequality reverses at negative weights",
        hypothesis: "A, B > 0; r >= 0 or r <= -1",
        sampling: "independent positive definite pair",
        expected_failure: false,
        kind: SuiteKind::MeanReverseAg,
    },
    SuiteSpec {
        name: "mean-refined",
        statement: "A nabla_(-r) B + 2r(A nabla B - A # B) <= A #_(-r) B",
        hypothesis: "A, B > 0; r >= 0",
        sampling: "independent positive definite pair",
        expected_failure: false,
        kind: SuiteKind::MeanRefined,
    },
    SuiteSpec {
        name: "mean-harmonic",
        statement: "A #_(-r) B <= A !_(-r) B: the geometric-harmonic inequality reverses at negative weights",
        hypothesis: "0 < A <= B; r >= 0 (keeps the weighted combination of inverses positive definite)",
        sampling: "dominated pair B = A + P with P positive semidefinite",
        expected_failure: false,
        kind: SuiteKind::MeanHarmonic,
    },
    SuiteSpec {
        name: "mean-heinz",
        statement: "A nabla B <= H_(-r)(A, B): the Heinz mean at negative weights dominates the arithmetic mean",
        hypothesis: "A, B > 0; r >= 0 or r <= -1",
        sampling: "independent positive definite pair",
        expected_failure: false,
        kind: SuiteKind::MeanHeinz,
    },
    SuiteSpec {
        name: "mean-equality-gap",
        statement: "g = tr(A #_(-r) B - A nabla_(-r) B) >= 2r d with d = tr(A nabla B - A # B), and d > 0 iff A != B",
        hypothesis: "A, B > 0; r > 0",
        sampling: "independent positive definite pair (almost surely distinct)",
        expected_failure: false,
        kind: SuiteKind::MeanEqualityGap,
    },
    SuiteSpec {
        name: "holder-mccarthy",
        statement: "0 <= 2r(1 - <A^(1/2)x,x> <Ax,x>^(-1/2)) <= <A^(-r)x,x> <Ax,x>^r - 1",
        hypothesis: "A > 0; x a unit vector; r > 0",
        sampling: "positive definite A and a normalized Gaussian vector",
        expected_failure: false,
        kind: SuiteKind::HolderMccarthy,
    },
    SuiteSpec {
        name: "trace-reverse",
        statement: "tr((1+r)A - rB) <= tr|A^(1+r) B^(-r)| - r(sqrt(tr A) - sqrt(tr B))^2",
        hypothesis: "A, B > 0; r >= 0",
        sampling: "independent positive definite pair",
        expected_failure: false,
        kind: SuiteKind::TraceReverse,
    },
    SuiteSpec {
        name: "det-reverse",
        statement: "det((1+r)A - rB) <= det(A)^(1+r) det(B)^(-r) - r^n det(A + B - 2(A # B))",
        hypothesis: "A >= (r/(r+1)) B in the Loewner order; r >= 0",
        sampling: "A = (r/(r+1)) B + P with P positive definite",
        expected_failure: false,
        kind: SuiteKind::DetReverse,
    },
    SuiteSpec {
        name: "log-major-i",
        statement: "s(A^(1+r) X B^(1+r)) log-majorizes s^(1+r)(AXB) s^(-r)(X), with equality of the full products",
        hypothesis: "A, B > 0; X invertible; r >= 0",
        sampling: "positive definite pair and Gaussian X rejected while nearly singular",
        expected_failure: false,
        kind: SuiteKind::LogMajorI,
    },
    SuiteSpec {
        name: "log-major-ii",
        statement: "s(A^(1+r) X B^(-r)) log-majorizes s^(1+r)(AX) s^(-r)(XB), with equality of the full products",
        hypothesis: "A, B > 0; X invertible; r >= 0",
        sampling: "positive definite pair and Gaussian X rejected while nearly singular",
        expected_failure: false,
        kind: SuiteKind::LogMajorII,
    },
    SuiteSpec {
        name: "ref-agh-chain",
        statement: "A !_v B <= A #_v B <= A nabla_v B: the forward arithmetic-geometric-harmonic chain",
        hypothesis: "A, B > 0; v in [0, 1]",
        sampling: "independent positive definite pair; v rotates through {0, 0.25, 0.5, 0.75, 1}",
        expected_failure: false,
        kind: SuiteKind::RefAghChain,
    },
    SuiteSpec {
        name: "ref-kittaneh-sandwich",
        statement: "2 min(v,1-v)(A nabla B - A # B) <= A nabla_v B - A #_v B <= 2 max(v,1-v)(A nabla B - A # B)",
        hypothesis: "A, B > 0; v in [0, 1]",
        sampling: "independent positive definite pair; v rotates through {0, 0.25, 0.5, 0.75, 1}",
        expected_failure: false,
        kind: SuiteKind::RefKittanehSandwich,
    },
    SuiteSpec {
        name: "ref-heinz-interpolation",
        statement: "A # B <= H_v(A, B) <= A nabla B: the Heinz mean interpolates for v in [0, 1]",
        hypothesis: "A, B > 0; v in [0, 1]",
        sampling: "independent positive definite pair; v rotates through {0, 0.25, 0.5, 0.75, 1}",
        expected_failure: false,
        kind: SuiteKind::RefHeinzInterpolation,
    },
    SuiteSpec {
        name: "ref-norm-interp",
        statement: "|||A^(1-v) X B^v||| <= |||AX|||^(1-v) |||XB|||^v for every unitarily invariant norm",
        hypothesis: "A, B > 0; X != 0; v in [0, 1]",
        sampling: "positive definite pair and Gaussian X; all five canonical norm kinds per trial",
        expected_failure: false,
        kind: SuiteKind::RefNormInterp,
    },
    SuiteSpec {
        name: "ref-spectral-heinz",
        statement: "|||X|||^(-r) |||AXB|||^(1+r) <= |||A^(1+r) X B^(1+r)|||",
        hypothesis: "A, B > 0; X != 0; r >= 0",
        sampling: "positive definite pair and Gaussian X; all five canonical norm kinds per trial",
        expected_failure: false,
        kind: SuiteKind::RefSpectralHeinz,
    },
    SuiteSpec {
        name: "ref-sv-sum",
        statement: "sum_j s_j(A) s_(n-j+1)(B) <= sum_j s_j(AB) <= sum_j s_j(A) s_j(B)",
        hypothesis: "any square A, B of equal dimension",
        sampling: "two independent Gaussian matrices",
        expected_failure: false,
        kind: SuiteKind::RefSvSum,
    },
];

/// All registered suites in registration order.
pub fn registry() -> &'static [SuiteSpec] {
    REGISTRY
}

pub fn find_suite(name: &str) -> Option<&'static SuiteSpec> {
    REGISTRY.iter().find(|s| s.name == name)
}

/// Resolve a `--suite` selection: `all`, an exact name, or a prefix group
/// such as `scalar` / `mean` / `ref`.
pub fn resolve_suites(selection: &str) -> Result<Vec<&'static SuiteSpec>> {
    if selection == "all" {
        return Ok(REGISTRY.iter().collect());
    }
    let mut picked: Vec<&'static SuiteSpec> = Vec::new();
    for part in selection.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some(spec) = find_suite(part) {
            picked.push(spec);
            continue;
        }
        let group: Vec<_> = REGISTRY
            .iter()
            .filter(|s| s.name.starts_with(&format!("{part}-")))
            .collect();
        if group.is_empty() {
            return Err(Error::InvalidInput(format!(
                "unknown suite '{part}'; see `explain all` for the registry"
            )));
        }
        picked.extend(group);
    }
    if picked.is_empty() {
        return Err(Error::InvalidInput("empty suite selection".into()));
    }
    picked.dedup_by_key(|s| s.name);
    Ok(picked)
}

impl SuiteSpec {
    /// Weight grid the suite's hypothesis admits, drawn from the configured
    /// positive and negative grids.
    pub fn admissible_weights(&self, cfg: &SamplerConfig) -> Vec<f64> {
        let pos = cfg.r_grid_pos.iter().copied();
        let neg = |cut: f64| cfg.r_grid_neg.iter().copied().filter(move |&r| r <= cut);
        match self.kind {
            SuiteKind::ScalarBasic
            | SuiteKind::ScalarSquared
            | SuiteKind::HsOrdered
            | SuiteKind::HsMonotone
            | SuiteKind::UiRatio
            | SuiteKind::UiLinear
            | SuiteKind::MeanReverseAg
            | SuiteKind::MeanHeinz => pos.chain(neg(-1.0)).collect(),
            SuiteKind::ScalarRefined | SuiteKind::HsWeak => pos.chain(neg(-0.5)).collect(),
            SuiteKind::UiRefined
            | SuiteKind::MeanRefined
            | SuiteKind::MeanHarmonic
            | SuiteKind::TraceReverse
            | SuiteKind::DetReverse
            | SuiteKind::LogMajorI
            | SuiteKind::LogMajorII
            | SuiteKind::RefSpectralHeinz => pos.collect(),
            SuiteKind::MeanEqualityGap | SuiteKind::HolderMccarthy => {
                pos.filter(|&r| r > 0.0).collect()
            }
            SuiteKind::RefAghChain
            | SuiteKind::RefKittanehSandwich
            | SuiteKind::RefHeinzInterpolation
            | SuiteKind::RefNormInterp => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            SuiteKind::ScalarCounterexample | SuiteKind::RefSvSum => vec![],
        }
    }

    /// Dimensions the suite runs at; scalar suites ignore the matrix dims.
    fn dims(&self, lo: usize, hi: usize) -> Vec<usize> {
        match self.kind {
            SuiteKind::ScalarBasic
            | SuiteKind::ScalarSquared
            | SuiteKind::ScalarRefined
            | SuiteKind::ScalarCounterexample => vec![1],
            _ => (lo..=hi).collect(),
        }
    }

    fn trials(&self, requested: usize) -> usize {
        match self.kind {
            // a single fixed regression case
            SuiteKind::ScalarCounterexample => requested.min(1),
            _ => requested,
        }
    }

    /// Run one trial; most suites emit one result, the unitarily-invariant
    /// norm suites emit one per canonical norm kind.
    fn run_trial(
        &self,
        cfg: &SamplerConfig,
        tol: &ToleranceConfig,
        dim: usize,
        trial: u64,
    ) -> Result<Vec<CheckResult>> {
        let mut s = Sampler::for_trial(cfg, stream_id(self.name, "", dim, trial));
        let weights = self.admissible_weights(cfg);
        let r = if weights.is_empty() {
            0.0
        } else {
            weights[(trial as usize) % weights.len()]
        };
        let (lo, hi) = cfg.eig_range;
        let results = match self.kind {
            SuiteKind::ScalarBasic | SuiteKind::ScalarRefined => {
                let a = s.uniform(lo, hi);
                let b = s.uniform(lo, hi);
                let variant = if self.kind == SuiteKind::ScalarBasic {
                    ScalarVariant::Basic
                } else {
                    ScalarVariant::Refined
                };
                vec![check_scalar(a, b, r, variant, tol)?]
            }
            SuiteKind::ScalarSquared => {
                let u = s.uniform(lo, hi);
                let v = s.uniform(lo, hi);
                let (a, b) = if r >= 0.0 { (u.max(v), u.min(v)) } else { (u.min(v), u.max(v)) };
                vec![check_scalar(a, b, r, ScalarVariant::Squared, tol)?]
            }
            SuiteKind::ScalarCounterexample => {
                vec![check_scalar(1.0, 4.0, 2.0, ScalarVariant::Squared, tol)?]
            }
            SuiteKind::HsOrdered => {
                let (top, bottom, _m) = s.ordered_pair(dim)?;
                let x = s.general(dim)?;
                let (a, b) = if r >= 0.0 { (top, bottom) } else { (bottom, top) };
                vec![check_hs(&a, &b, &x, r, HsVariant::Ordered, tol)?]
            }
            SuiteKind::HsWeak => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let x = s.general(dim)?;
                vec![check_hs(&a, &b, &x, r, HsVariant::Weak, tol)?]
            }
            SuiteKind::HsMonotone => {
                let pairs = s.ordered_group(dim, 3)?;
                let x = s.general(dim)?;
                let power = [1.0, 0.5, 0.25, 0.75][(trial as usize) % 4];
                let oriented: Vec<(Matrix, Matrix)> = if r >= 0.0 {
                    pairs
                } else {
                    pairs.into_iter().map(|(a, b)| (b, a)).collect()
                };
                vec![check_hs_monotone(&oriented, &x, r, power, tol)?]
            }
            SuiteKind::UiRatio | SuiteKind::UiLinear | SuiteKind::UiRefined => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let x = s.general(dim)?;
                let variant = match self.kind {
                    SuiteKind::UiRatio => UiVariant::Ratio,
                    SuiteKind::UiLinear => UiVariant::Linear,
                    _ => UiVariant::Refined,
                };
                canonical_kinds(dim)
                    .into_iter()
                    .map(|kind| check_ui_norm(&a, &b, &x, r, kind, variant, tol))
                    .collect::<Result<Vec<_>>>()?
            }
            SuiteKind::MeanReverseAg
            | SuiteKind::MeanRefined
            | SuiteKind::MeanHeinz
            | SuiteKind::MeanEqualityGap => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let variant = match self.kind {
                    SuiteKind::MeanReverseAg => MeanVariant::ReverseAg,
                    SuiteKind::MeanRefined => MeanVariant::Refined,
                    SuiteKind::MeanHeinz => MeanVariant::Heinz,
                    _ => MeanVariant::EqualityGap,
                };
                vec![check_operator_mean(&a, &b, r, variant, tol)?]
            }
            SuiteKind::MeanHarmonic => {
                let (a, b) = s.dominated_pair(dim)?;
                vec![check_operator_mean(&a, &b, r, MeanVariant::Harmonic, tol)?]
            }
            SuiteKind::HolderMccarthy => {
                let a = s.pd(dim)?;
                let x = s.unit_vector(dim)?;
                vec![check_holder_mccarthy(&a, &x, r, tol)?]
            }
            SuiteKind::TraceReverse => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                vec![check_trace(&a, &b, r, tol)?]
            }
            SuiteKind::DetReverse => {
                let (a, b) = s.ratio_pair(dim, r)?;
                vec![check_det(&a, &b, r, tol)?]
            }
            SuiteKind::LogMajorI | SuiteKind::LogMajorII => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let x = s.general(dim)?;
                let variant = if self.kind == SuiteKind::LogMajorI {
                    LogMajorVariant::BothSides
                } else {
                    LogMajorVariant::Split
                };
                vec![check_log_major(&a, &b, &x, r, variant)?]
            }
            SuiteKind::RefAghChain
            | SuiteKind::RefKittanehSandwich
            | SuiteKind::RefHeinzInterpolation => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let e = Matrix::identity(dim);
                let which = match self.kind {
                    SuiteKind::RefAghChain => RefVariant::AghChain,
                    SuiteKind::RefKittanehSandwich => RefVariant::KittanehSandwich,
                    _ => RefVariant::HeinzInterpolation,
                };
                vec![check_reference(&a, &b, &e, r, which, tol)?]
            }
            SuiteKind::RefNormInterp | SuiteKind::RefSpectralHeinz => {
                let a = s.pd(dim)?;
                let b = s.pd(dim)?;
                let x = s.general(dim)?;
                let which = if self.kind == SuiteKind::RefNormInterp {
                    RefVariant::NormInterp
                } else {
                    RefVariant::SpectralHeinz
                };
                vec![check_reference(&a, &b, &x, r, which, tol)?]
            }
            SuiteKind::RefSvSum => {
                let a = s.general(dim)?;
                let b = s.general(dim)?;
                vec![sv_sum_bounds(&a, &b, tol)?]
            }
        };
        Ok(results
            .into_iter()
            .map(|mut c| {
                c.suite = self.name.to_string();
                c.trial = trial;
                c.expected_failure = self.expected_failure;
                if c.dim == 1 && dim != 1 {
                    c.dim = dim;
                }
                c
            })
            .collect())
    }
}

/// How a result counts toward totals and the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
    Skipped,
    FailedAsExpected,
}

pub fn classify(result: &CheckResult) -> Status {
    if result.expected_failure {
        // the check is supposed to violate its inequality; passing means
        // the regression case no longer demonstrates anything
        if result.passed {
            Status::Failed
        } else {
            Status::FailedAsExpected
        }
    } else if !result.precondition_ok {
        Status::Skipped
    } else if result.passed {
        Status::Passed
    } else {
        Status::Failed
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct SuiteTotals {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failed_as_expected: usize,
}

impl SuiteTotals {
    fn add(&mut self, status: Status) {
        match status {
            Status::Passed => self.passed += 1,
            Status::Failed => self.failed += 1,
            Status::Skipped => self.skipped += 1,
            Status::FailedAsExpected => self.failed_as_expected += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed + self.skipped + self.failed_as_expected
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub sampler: SamplerConfig,
    pub tolerances: ToleranceConfig,
    pub suites: Vec<String>,
    pub trials: usize,
    pub verbose: bool,
    /// Worker threads; 0 means "let the pool decide". Never echoed into
    /// reports so that parallelism cannot affect report bytes.
    #[serde(skip)]
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sampler: SamplerConfig::default(),
            tolerances: ToleranceConfig::default(),
            suites: vec!["all".into()],
            trials: 100,
            verbose: false,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub schema: String,
    pub tool_version: String,
    pub rng_algorithm: String,
    pub started: String,
    pub finished: String,
    pub config: RunConfig,
    /// Failures and skips always; passes only under `verbose`.
    pub results: Vec<CheckResult>,
    pub totals: BTreeMap<String, SuiteTotals>,
    pub genuine_failures: usize,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed report: {e}")))
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Run the selected suites over every (dim, trial) cell.
///
/// Deterministic for a fixed config: every trial derives its own RNG stream
/// from (suite, dim, trial), results are sorted before aggregation, and the
/// thread count is excluded from the report.
pub fn run_suites(config: &RunConfig) -> Result<SuiteReport> {
    config.sampler.validate()?;
    if !(config.tolerances.tol_abs > 0.0
        && config.tolerances.tol_rel > 0.0
        && config.tolerances.loewner_tol > 0.0)
    {
        return Err(Error::InvalidInput("tolerances must be positive".into()));
    }
    let started = timestamp();
    let mut selected: Vec<&'static SuiteSpec> = Vec::new();
    for sel in &config.suites {
        selected.extend(resolve_suites(sel)?);
    }
    selected.dedup_by_key(|s| s.name);

    let (dim_lo, dim_hi) = config.sampler.dim_range;
    let mut work: Vec<(&'static SuiteSpec, usize, u64)> = Vec::new();
    for spec in &selected {
        for dim in spec.dims(dim_lo, dim_hi) {
            for trial in 0..spec.trials(config.trials) {
                work.push((spec, dim, trial as u64));
            }
        }
    }

    let run_one = |&(spec, dim, trial): &(&'static SuiteSpec, usize, u64)| {
        spec.run_trial(&config.sampler, &config.tolerances, dim, trial)
            .map_err(|e| {
                Error::InvalidInput(format!("suite {} dim {dim} trial {trial}: {e}", spec.name))
            })
    };
    let outcomes: Vec<Result<Vec<CheckResult>>> = if config.threads == 1 {
        work.iter().map(run_one).collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if config.threads > 1 {
            builder = builder.num_threads(config.threads);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
        pool.install(|| work.par_iter().map(run_one).collect())
    };

    let mut results: Vec<CheckResult> = Vec::with_capacity(work.len());
    for outcome in outcomes {
        results.extend(outcome?);
    }
    results.sort_by(|a, b| {
        (&a.suite, a.dim, a.trial, &a.variant).cmp(&(&b.suite, b.dim, b.trial, &b.variant))
    });

    let mut totals: BTreeMap<String, SuiteTotals> = BTreeMap::new();
    for spec in &selected {
        totals.insert(spec.name.to_string(), SuiteTotals::default());
    }
    let mut genuine_failures = 0usize;
    let mut kept: Vec<CheckResult> = Vec::new();
    for result in results {
        let status = classify(&result);
        totals.get_mut(&result.suite).expect("suite registered").add(status);
        if status == Status::Failed {
            genuine_failures += 1;
        }
        if config.verbose || status != Status::Passed {
            kept.push(result);
        } else {
            drop(result);
        }
    }

    // thread count must not influence report bytes or equality
    let mut echoed = config.clone();
    echoed.threads = 0;
    Ok(SuiteReport {
        schema: REPORT_SCHEMA.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        started,
        finished: timestamp(),
        config: echoed,
        results: kept,
        totals,
        genuine_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(suites: &[&str], trials: usize) -> RunConfig {
        RunConfig {
            sampler: SamplerConfig {
                seed: 7,
                dim_range: (1, 3),
                ..SamplerConfig::default()
            },
            tolerances: ToleranceConfig::default(),
            suites: suites.iter().map(|s| s.to_string()).collect(),
            trials,
            verbose: false,
            threads: 1,
        }
    }

    #[test]
    fn registry_names_are_unique_and_resolvable() {
        let mut names: Vec<_> = registry().iter().map(|s| s.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), registry().len());
        assert_eq!(resolve_suites("all").unwrap().len(), registry().len());
        for spec in registry() {
            assert_eq!(resolve_suites(spec.name).unwrap().len(), 1);
            assert!(!spec.statement.is_empty() && !spec.hypothesis.is_empty());
        }
    }

    #[test]
    fn resolve_supports_groups_and_rejects_unknown() {
        let scalars = resolve_suites("scalar").unwrap();
        assert_eq!(scalars.len(), 4);
        let means = resolve_suites("mean").unwrap();
        assert_eq!(means.len(), 5);
        assert!(resolve_suites("nonexistent").is_err());
        let multi = resolve_suites("hs-weak,trace-reverse").unwrap();
        assert_eq!(multi.len(), 2);
    }

    #[test]
    fn zero_trials_runs_empty() {
        let report = run_suites(&small_config(&["all"], 0)).unwrap();
        assert!(report.results.is_empty());
        assert!(report.totals.values().all(|t| t.total() == 0));
        assert_eq!(report.genuine_failures, 0);
    }

    #[test]
    fn counterexample_suite_fails_as_expected() {
        let report =
            run_suites(&small_config(&["scalar-squared-counterexample"], 10)).unwrap();
        let totals = &report.totals["scalar-squared-counterexample"];
        assert_eq!(totals.failed_as_expected, 1, "single fixed regression trial");
        assert_eq!(totals.failed, 0);
        assert_eq!(report.genuine_failures, 0);
        // the violating inputs are embedded as a witness
        assert_eq!(report.results.len(), 1);
        assert!(report.results[0].witness.params.iter().any(|(k, v)| k == "b" && *v == 4.0));
    }

    #[test]
    fn small_sweep_has_no_failures() {
        let report = run_suites(&small_config(&["all"], 6)).unwrap();
        assert_eq!(report.genuine_failures, 0, "results: {:?}", report.results);
        // passes are summarized, not listed
        assert_eq!(report.results.len(), 1, "only the expected-failure witness remains");
        let executed: usize = report.totals.values().map(|t| t.total()).sum();
        assert!(executed > 0);
    }

    #[test]
    fn verbose_keeps_every_result() {
        let mut cfg = small_config(&["scalar-basic"], 5);
        cfg.verbose = true;
        let report = run_suites(&cfg).unwrap();
        assert_eq!(report.results.len(), 5);
        assert!(report.results.iter().all(|r| !r.witness.params.is_empty()));
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let mut cfg = small_config(&["mean", "ui-ratio", "log-major-ii"], 4);
        cfg.verbose = true;
        let one = run_suites(&cfg).unwrap();
        cfg.threads = 4;
        let many = run_suites(&cfg).unwrap();
        assert_eq!(one.results, many.results);
        assert_eq!(one.totals, many.totals);
        let strip = |r: &SuiteReport| {
            let mut r = r.clone();
            r.started = String::new();
            r.finished = String::new();
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(strip(&one), strip(&many), "byte-identical modulo timestamps");
    }

    #[test]
    fn report_roundtrips_through_json() {
        let mut cfg = small_config(&["holder-mccarthy"], 3);
        cfg.verbose = true;
        let report = run_suites(&cfg).unwrap();
        let back = SuiteReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn totals_match_trials_times_cells() {
        let report = run_suites(&small_config(&["ui-linear"], 4)).unwrap();
        // 3 dims x 4 trials x 5 norm kinds
        assert_eq!(report.totals["ui-linear"].total(), 60);
        let scalar = run_suites(&small_config(&["scalar-basic"], 4)).unwrap();
        // scalar suites ignore the dim range
        assert_eq!(scalar.totals["scalar-basic"].total(), 4);
    }

    #[test]
    fn weight_grids_respect_hypotheses() {
        let cfg = SamplerConfig::default();
        for spec in registry() {
            for r in spec.admissible_weights(&cfg) {
                match spec.name {
                    "scalar-refined" | "hs-weak" => {
                        assert!(r >= 0.0 || r <= -0.5, "{}: {r}", spec.name)
                    }
                    "mean-equality-gap" | "holder-mccarthy" => {
                        assert!(r > 0.0, "{}: {r}", spec.name)
                    }
                    "ui-refined" | "mean-refined" | "mean-harmonic" | "trace-reverse"
                    | "det-reverse" | "log-major-i" | "log-major-ii" | "ref-spectral-heinz" => {
                        assert!(r >= 0.0, "{}: {r}", spec.name)
                    }
                    "ref-agh-chain" | "ref-kittaneh-sandwich" | "ref-heinz-interpolation"
                    | "ref-norm-interp" => assert!((0.0..=1.0).contains(&r)),
                    _ => assert!(r >= 0.0 || r <= -1.0, "{}: {r}", spec.name),
                }
            }
        }
    }
}

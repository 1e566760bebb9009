//! `opmean` command line: run verification suites, evaluate single
//! expressions on matrix files, and print suite documentation.
//!
//! Exit codes: 0 all checks passed (expected-failure regressions failing as
//! expected count as passing); 1 at least one genuine violation; 2 usage or
//! configuration error; 3 I/O error; 4 domain error in `eval`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use opmean::error::Error;
use opmean::matrix::Matrix;
use opmean::means::{arithmetic_mean, geometric_mean, harmonic_mean, heinz_mean};
use opmean::norms::{compound_matrix, ui_norm, NormKind};
use opmean::runner::{find_suite, registry, run_suites, RunConfig, SuiteSpec};
use opmean::svd::singular_values;

#[derive(Parser)]
#[command(name = "opmean", version, about = "Operator-mean inequality verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over sampled inputs and write a report.
    Run(RunArgs),
    /// Evaluate one expression on matrix files and print the result.
    Eval(EvalArgs),
    /// Print a suite's inequality statement, hypothesis, and sampling.
    Explain {
        /// Suite name or `all`.
        suite: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Suite selection: `all`, a name, a group prefix, or a comma list.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Matrix dimensions as an inclusive range `lo..hi` or a single value.
    #[arg(long, default_value = "1..6")]
    dims: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed; falls back to OPMEAN_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_abs: Option<f64>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    loewner_tol: Option<f64>,
    /// Comma-separated weights replacing the default grids (split by sign).
    #[arg(long)]
    r_grid: Option<String>,
    /// Eigenvalue envelope for sampled matrices, `lo..hi`.
    #[arg(long)]
    eig_range: Option<String>,
    /// Report output path; omitted means no file is written.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (1 = serial; reports are identical either way).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Embed every result (passes included) with witnesses in the report.
    #[arg(long)]
    verbose: bool,
    /// JSON config file; its values override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// One of: arithmetic_mean, geometric_mean, harmonic_mean, heinz_mean,
    /// ui_norm, compound, singular_values, det, trace_abs_power.
    expression: String,
    /// Matrix files in the text format (means and trace_abs_power take two).
    files: Vec<PathBuf>,
    /// Mean weight.
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    /// Power weight for trace_abs_power.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Norm kind: trace, spectral, hilbert-schmidt, schatten, kyfan.
    #[arg(long)]
    kind: Option<String>,
    /// Schatten exponent (with --kind schatten).
    #[arg(long)]
    p: Option<f64>,
    /// Ky Fan order (with --kind kyfan) or compound order (with compound).
    #[arg(long)]
    k: Option<usize>,
}

/// Optional overrides loaded from `--config`; file values beat flags.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suite: Option<String>,
    dims: Option<(usize, usize)>,
    trials: Option<usize>,
    seed: Option<u64>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    loewner_tol: Option<f64>,
    r_grid_pos: Option<Vec<f64>>,
    r_grid_neg: Option<Vec<f64>>,
    eig_range: Option<(f64, f64)>,
    verbose: Option<bool>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

/// Writes to stdout treating a consumer-closed pipe (`opmean ... | head`) as
/// a no-op: the command's own exit code still stands.
fn emit(text: &str) -> Result<(), ExitCode> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(fail(EXIT_IO, format!("stdout: {e}"))),
    }
}

fn domain_exit(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn parse_range<T: std::str::FromStr + Copy>(text: &str) -> Option<(T, T)> {
    if let Some((lo, hi)) = text.split_once("..") {
        Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
    } else {
        let v: T = text.trim().parse().ok()?;
        Some((v, v))
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Explain { suite } => cmd_explain(&suite),
    }
}

fn build_run_config(args: &RunArgs) -> Result<(RunConfig, Option<PathBuf>), ExitCode> {
    let mut config = RunConfig {
        suites: vec![args.suite.clone()],
        trials: args.trials,
        verbose: args.verbose,
        threads: args.threads,
        ..RunConfig::default()
    };

    config.sampler.dim_range = parse_range::<usize>(&args.dims)
        .ok_or_else(|| fail(EXIT_USAGE, format!("bad --dims '{}'", args.dims)))?;
    if let Some(text) = &args.eig_range {
        config.sampler.eig_range = parse_range::<f64>(text)
            .ok_or_else(|| fail(EXIT_USAGE, format!("bad --eig-range '{text}'")))?;
    }
    config.sampler.seed = match args.seed {
        Some(s) => s,
        None => match std::env::var("OPMEAN_SEED") {
            Ok(text) => text
                .parse()
                .map_err(|_| fail(EXIT_USAGE, format!("bad OPMEAN_SEED '{text}'")))?,
            Err(_) => 0,
        },
    };
    if let Some(text) = &args.r_grid {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for part in text.split(',') {
            let r: f64 = part
                .trim()
                .parse()
                .map_err(|_| fail(EXIT_USAGE, format!("bad --r-grid entry '{part}'")))?;
            if r >= 0.0 {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        config.sampler.r_grid_pos = pos;
        config.sampler.r_grid_neg = neg;
    }
    if let Some(v) = args.tol_abs {
        config.tolerances.tol_abs = v;
    }
    if let Some(v) = args.tol_rel {
        config.tolerances.tol_rel = v;
    }
    if let Some(v) = args.loewner_tol {
        config.tolerances.loewner_tol = v;
    }

    let mut out = args.out.clone();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| fail(EXIT_IO, format!("reading {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| fail(EXIT_USAGE, format!("config {}: {e}", path.display())))?;
        if let Some(v) = file.suite {
            config.suites = vec![v];
        }
        if let Some(v) = file.dims {
            config.sampler.dim_range = v;
        }
        if let Some(v) = file.trials {
            config.trials = v;
        }
        if let Some(v) = file.seed {
            config.sampler.seed = v;
        }
        if let Some(v) = file.tol_abs {
            config.tolerances.tol_abs = v;
        }
        if let Some(v) = file.tol_rel {
            config.tolerances.tol_rel = v;
        }
        if let Some(v) = file.loewner_tol {
            config.tolerances.loewner_tol = v;
        }
        if let Some(v) = file.r_grid_pos {
            config.sampler.r_grid_pos = v;
        }
        if let Some(v) = file.r_grid_neg {
            config.sampler.r_grid_neg = v;
        }
        if let Some(v) = file.eig_range {
            config.sampler.eig_range = v;
        }
        if let Some(v) = file.verbose {
            config.verbose = v;
        }
        if let Some(v) = file.threads {
            config.threads = v;
        }
        if let Some(v) = file.out {
            out = Some(v);
        }
    }
    Ok((config, out))
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let (config, out) = match build_run_config(&args) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let report = match run_suites(&config) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if let Some(path) = &out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return fail(EXIT_IO, format!("writing {}: {e}", path.display()));
        }
    }
    let mut summary = format!(
        "{:<32} {:>8} {:>8} {:>8} {:>10}\n",
        "suite", "passed", "failed", "skipped", "expected"
    );
    for (name, totals) in &report.totals {
        summary.push_str(&format!(
            "{:<32} {:>8} {:>8} {:>8} {:>10}\n",
            name, totals.passed, totals.failed, totals.skipped, totals.failed_as_expected
        ));
    }
    summary.push_str(&format!("genuine failures: {}\n", report.genuine_failures));
    if let Some(path) = &out {
        summary.push_str(&format!("report: {}\n", path.display()));
    }
    if let Err(code) = emit(&summary) {
        return code;
    }
    if report.genuine_failures > 0 {
        ExitCode::from(EXIT_VIOLATION)
    } else {
        ExitCode::from(EXIT_OK)
    }
}

fn read_matrix(path: &Path) -> Result<Matrix, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("reading {}: {e}", path.display())))?;
    Matrix::from_text(&text).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn want_files(args: &EvalArgs, count: usize) -> Result<Vec<Matrix>, ExitCode> {
    if args.files.len() != count {
        return Err(fail(
            EXIT_USAGE,
            format!("{} takes exactly {count} matrix file(s), got {}", args.expression, args.files.len()),
        ));
    }
    args.files.iter().map(|p| read_matrix(p)).collect()
}

fn want_param<T>(value: Option<T>, name: &str, expr: &str) -> Result<T, ExitCode> {
    value.ok_or_else(|| fail(EXIT_USAGE, format!("{expr} requires --{name}")))
}

fn norm_kind_from_args(args: &EvalArgs) -> Result<NormKind, ExitCode> {
    let kind = want_param(args.kind.as_deref(), "kind", &args.expression)?;
    match kind {
        "trace" => Ok(NormKind::Trace),
        "spectral" => Ok(NormKind::Spectral),
        "hilbert-schmidt" | "hs" => Ok(NormKind::HilbertSchmidt),
        "schatten" => Ok(NormKind::Schatten(want_param(args.p, "p", "schatten norm")?)),
        "kyfan" => Ok(NormKind::KyFan(want_param(args.k, "k", "ky fan norm")?)),
        other => Err(fail(
            EXIT_USAGE,
            format!("unknown norm kind '{other}' (trace, spectral, hilbert-schmidt, schatten, kyfan)"),
        )),
    }
}

fn cmd_eval(args: EvalArgs) -> ExitCode {
    let result: Result<String, ExitCode> = match args.expression.as_str() {
        "arithmetic_mean" | "geometric_mean" | "harmonic_mean" | "heinz_mean" => (|| {
            let ms = want_files(&args, 2)?;
            let nu = want_param(args.nu, "nu", &args.expression)?;
            let f = match args.expression.as_str() {
                "arithmetic_mean" => arithmetic_mean,
                "geometric_mean" => geometric_mean,
                "harmonic_mean" => harmonic_mean,
                _ => heinz_mean,
            };
            let m = f(&ms[0], &ms[1], nu).map_err(|e| fail(domain_exit(&e), e))?;
            Ok(m.to_text())
        })(),
        "ui_norm" => (|| {
            let ms = want_files(&args, 1)?;
            let kind = norm_kind_from_args(&args)?;
            let v = ui_norm(&ms[0], kind).map_err(|e| fail(domain_exit(&e), e))?;
            Ok(format!("{v}\n"))
        })(),
        "compound" => (|| {
            let ms = want_files(&args, 1)?;
            let k = want_param(args.k, "k", "compound")?;
            let m = compound_matrix(&ms[0], k).map_err(|e| fail(domain_exit(&e), e))?;
            Ok(m.to_text())
        })(),
        "singular_values" => (|| {
            let ms = want_files(&args, 1)?;
            let sv = singular_values(&ms[0]).map_err(|e| fail(domain_exit(&e), e))?;
            let row = Matrix::from_parts(1, sv.values.len(), sv.values.clone())
                .map_err(|e| fail(EXIT_DOMAIN, e))?;
            Ok(row.to_text())
        })(),
        "det" => (|| {
            let ms = want_files(&args, 1)?;
            let v = ms[0].determinant().map_err(|e| fail(domain_exit(&e), e))?;
            Ok(format!("{v}\n"))
        })(),
        "trace_abs_power" => (|| {
            let ms = want_files(&args, 2)?;
            let r = want_param(args.r, "r", "trace_abs_power")?;
            let a = opmean::eigen::matrix_power(&ms[0], 1.0 + r)
                .map_err(|e| fail(domain_exit(&e), e))?;
            let b = opmean::eigen::matrix_power(&ms[1], -r)
                .map_err(|e| fail(domain_exit(&e), e))?;
            let v = singular_values(&a.matmul(&b))
                .map_err(|e| fail(domain_exit(&e), e))?
                .sum();
            Ok(format!("{v}\n"))
        })(),
        other => Err(fail(EXIT_USAGE, format!("unknown expression '{other}'"))),
    };
    match result {
        Ok(text) => match emit(&text) {
            Ok(()) => ExitCode::from(EXIT_OK),
            Err(code) => code,
        },
        Err(code) => code,
    }
}

fn describe_spec(spec: &SuiteSpec) -> String {
    let mut text = format!(
        "{}\n  statement:  {}\n  hypothesis: {}\n  sampling:   {}\n",
        spec.name, spec.statement, spec.hypothesis, spec.sampling
    );
    if spec.expected_failure {
        text.push_str("  note:       expected-failure regression suite\n");
    }
    text
}

fn cmd_explain(suite: &str) -> ExitCode {
    let text = if suite == "all" {
        registry().iter().map(describe_spec).collect::<Vec<_>>().join("\n")
    } else {
        match find_suite(suite) {
            Some(spec) => describe_spec(spec),
            None => {
                return fail(EXIT_USAGE, format!("unknown suite '{suite}'; try `explain all`"))
            }
        }
    };
    match emit(&text) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(code) => code,
    }
}

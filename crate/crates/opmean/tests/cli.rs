//! End-to-end tests of the `opmean` binary: worked examples, exit codes,
//! report files, and config precedence.

use std::path::Path;
use std::process::{Command, Output};

use opmean::matrix::Matrix;

fn opmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opmean"))
        .args(args)
        .env_remove("OPMEAN_SEED")
        .output()
        .expect("spawn opmean")
}

fn write_mat(dir: &Path, name: &str, rows: usize, cols: usize, data: &[f64]) -> String {
    let m = Matrix::from_parts(rows, cols, data.to_vec()).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, m.to_text()).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_geometric_mean_negative_weight() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 1, 1, &[9.0]);
    let b = write_mat(dir.path(), "b.mat", 1, 1, &[4.0]);
    let out = opmean(&["eval", "geometric_mean", &a, &b, "--nu", "-1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = Matrix::from_text(&stdout(&out)).unwrap();
    assert_eq!(m.data(), &[20.25]);
}

#[test]
fn eval_schatten_norm_of_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 2, 2, &[3.0, 0.0, 0.0, 4.0]);
    let out = opmean(&["eval", "ui_norm", &a, "--kind", "schatten", "--p", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "5");
}

#[test]
fn eval_compound_of_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
    let out = opmean(&["eval", "compound", &a, "--k", "2"]);
    assert_eq!(code(&out), 0);
    let m = Matrix::from_text(&stdout(&out)).unwrap();
    assert_eq!((m.rows(), m.cols()), (3, 3));
    let expect = [2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 6.0];
    assert_eq!(m.data(), &expect);
}

#[test]
fn eval_singular_values_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 2, 2, &[0.0, 3.0, 4.0, 0.0]);
    let out = opmean(&["eval", "singular_values", &a]);
    assert_eq!(code(&out), 0);
    let m = Matrix::from_text(&stdout(&out)).unwrap();
    assert_eq!(m.data(), &[4.0, 3.0]);
}

#[test]
fn eval_trace_abs_power_matches_hand_value() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 1, 1, &[9.0]);
    let b = write_mat(dir.path(), "b.mat", 1, 1, &[4.0]);
    let out = opmean(&["eval", "trace_abs_power", &a, &b, "--r", "1"]);
    assert_eq!(code(&out), 0);
    // tr|A^2 B^{-1}| = 81/4
    assert_eq!(stdout(&out).trim(), "20.25");
}

#[test]
fn eval_domain_error_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let b = write_mat(dir.path(), "b.mat", 2, 2, &[1.0, 0.0, 0.0, 1.0]);
    let out = opmean(&["eval", "geometric_mean", &a, &b, "--nu", "0.5"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn eval_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.mat");
    std::fs::write(&path, "not a matrix").unwrap();
    let out = opmean(&["eval", "det", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn eval_missing_file_exits_3() {
    let out = opmean(&["eval", "det", "/no/such/file.mat"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn eval_unknown_expression_exits_2() {
    let out = opmean(&["eval", "frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn eval_wrong_arity_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_mat(dir.path(), "a.mat", 1, 1, &[1.0]);
    let out = opmean(&["eval", "geometric_mean", &a, "--nu", "0.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn explain_lists_every_suite() {
    let all = opmean(&["explain", "all"]);
    assert_eq!(code(&all), 0);
    let text = stdout(&all);
    for spec in opmean::runner::registry() {
        assert!(text.contains(spec.name), "missing {}", spec.name);
        let one = opmean(&["explain", spec.name]);
        assert_eq!(code(&one), 0);
        let t = stdout(&one);
        assert!(t.contains("statement:") && t.contains("hypothesis:") && t.contains("sampling:"));
    }
}

#[test]
fn explain_unknown_suite_exits_2() {
    let out = opmean(&["explain", "nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn closed_stdout_pipe_is_not_an_error() {
    // `opmean explain all | head -1` style: the consumer hangs up early.
    let mut child = Command::new(env!("CARGO_BIN_EXE_opmean"))
        .args(["explain", "all"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let out = child.wait_with_output().unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "stderr: {err}");
    assert!(!err.contains("panicked"), "stderr: {err}");
}

#[test]
fn run_zero_trials_is_empty_success() {
    let out = opmean(&["run", "--suite", "all", "--trials", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("genuine failures: 0"));
}

#[test]
fn run_counterexample_suite_exits_clean() {
    let out = opmean(&[
        "run",
        "--suite",
        "scalar-squared-counterexample",
        "--trials",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0, "expected failures are not genuine failures");
    assert!(stdout(&out).contains("genuine failures: 0"));
}

#[test]
fn run_unknown_suite_exits_2() {
    let out = opmean(&["run", "--suite", "bogus", "--trials", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn run_bad_dims_exits_2() {
    let out = opmean(&["run", "--dims", "x..y", "--trials", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn run_unwritable_report_exits_3() {
    let out = opmean(&[
        "run",
        "--suite",
        "scalar-basic",
        "--trials",
        "1",
        "--out",
        "/no/such/dir/report.json",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn run_report_is_deterministic_modulo_timestamps() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("r1.json");
    let p2 = dir.path().join("r2.json");
    for p in [&p1, &p2] {
        let out = opmean(&[
            "run",
            "--suite",
            "mean,holder-mccarthy",
            "--dims",
            "2..4",
            "--trials",
            "40",
            "--seed",
            "11",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let strip = |path: &Path| {
        let text = std::fs::read_to_string(path).unwrap();
        text.lines()
            .filter(|l| !l.contains("\"started\"") && !l.contains("\"finished\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&p1), strip(&p2));
}

#[test]
fn run_report_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let out = opmean(&[
        "run",
        "--suite",
        "scalar",
        "--trials",
        "10",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report =
        opmean::runner::SuiteReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.schema, "opmean.report/1");
    assert_eq!(report.genuine_failures, 0);
    assert!(report.totals.contains_key("scalar-basic"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let rep = dir.path().join("rep.json");
    std::fs::write(&cfg, r#"{"seed": 99, "trials": 4, "suite": "scalar-basic"}"#).unwrap();
    let out = opmean(&[
        "run",
        "--suite",
        "mean",
        "--trials",
        "50",
        "--seed",
        "1",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report =
        opmean::runner::SuiteReport::from_json(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report.config.sampler.seed, 99);
    assert_eq!(report.config.trials, 4);
    assert_eq!(report.config.suites, vec!["scalar-basic".to_string()]);
    assert_eq!(report.totals.len(), 1);
}

#[test]
fn config_unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let out = opmean(&["run", "--config", cfg.to_str().unwrap(), "--trials", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn seed_env_fallback_lands_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep.json");
    let out = Command::new(env!("CARGO_BIN_EXE_opmean"))
        .args(["run", "--suite", "scalar-basic", "--trials", "2", "--out"])
        .arg(&rep)
        .env("OPMEAN_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report =
        opmean::runner::SuiteReport::from_json(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report.config.sampler.seed, 1234);
}

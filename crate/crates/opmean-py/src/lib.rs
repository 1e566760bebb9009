//! Python extension module exposing the opmean matrix type, the eigen/SVD
//! kernels, the weighted operator means, and the verification runner.
//!
//! Matrix inputs come in as `Matrix` instances; every operation returns a new
//! object. Domain problems (non-symmetric, not positive definite, shape
//! mismatches) surface as `ValueError`; iteration failures as `RuntimeError`.

use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use opmean::error::Error;
use opmean::loewner::{loewner_compare, LoewnerRelation};
use opmean::matrix::Matrix;
use opmean::norms::NormKind;
use opmean::runner::{find_suite, registry, RunConfig};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Matrix", skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: Matrix,
}

impl From<Matrix> for PyMatrix {
    fn from(inner: Matrix) -> Self {
        PyMatrix { inner }
    }
}

#[pymethods]
impl PyMatrix {
    /// Matrix(rows, cols, data) with row-major data.
    #[new]
    fn new(rows: usize, cols: usize, data: Vec<f64>) -> PyResult<Self> {
        Matrix::from_parts(rows, cols, data).map(Self::from).map_err(to_py_err)
    }

    #[staticmethod]
    fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::zeros(rows, cols).into()
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Matrix::identity(n).into()
    }

    #[staticmethod]
    fn diag(values: Vec<f64>) -> Self {
        Matrix::diag(&values).into()
    }

    #[staticmethod]
    fn from_rows(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Matrix::from_rows(&rows).map(Self::from).map_err(to_py_err)
    }

    /// Parses the shared matrix text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Matrix::from_text(text).map(Self::from).map_err(to_py_err)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyIndexError::new_err(format!(
                "index ({i}, {j}) out of range for {}x{} matrix",
                self.inner.rows(),
                self.inner.cols()
            )));
        }
        Ok(self.inner.get(i, j))
    }

    fn set(&mut self, i: usize, j: usize, value: f64) -> PyResult<()> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyIndexError::new_err(format!(
                "index ({i}, {j}) out of range for {}x{} matrix",
                self.inner.rows(),
                self.inner.cols()
            )));
        }
        self.inner.set(i, j, value);
        Ok(())
    }

    /// Entries as a list of row lists.
    fn to_lists(&self) -> Vec<Vec<f64>> {
        (0..self.inner.rows())
            .map(|i| (0..self.inner.cols()).map(|j| self.inner.get(i, j)).collect())
            .collect()
    }

    /// Serializes to the shared matrix text format.
    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn transpose(&self) -> Self {
        self.inner.transpose().into()
    }

    fn matmul(&self, other: &PyMatrix) -> PyResult<Self> {
        if self.inner.cols() != other.inner.rows() {
            return Err(PyValueError::new_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.inner.rows(),
                self.inner.cols(),
                other.inner.rows(),
                other.inner.cols()
            )));
        }
        Ok(self.inner.matmul(&other.inner).into())
    }

    fn add(&self, other: &PyMatrix) -> PyResult<Self> {
        self.same_shape(other)?;
        Ok(self.inner.add(&other.inner).into())
    }

    fn sub(&self, other: &PyMatrix) -> PyResult<Self> {
        self.same_shape(other)?;
        Ok(self.inner.sub(&other.inner).into())
    }

    fn scale(&self, factor: f64) -> Self {
        self.inner.scale(factor).into()
    }

    fn symmetrize(&self) -> Self {
        self.inner.symmetrize().into()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn determinant(&self) -> PyResult<f64> {
        self.inner.determinant().map_err(to_py_err)
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        self.matmul(other)
    }

    fn __add__(&self, other: &PyMatrix) -> PyResult<Self> {
        self.add(other)
    }

    fn __sub__(&self, other: &PyMatrix) -> PyResult<Self> {
        self.sub(other)
    }

    fn __mul__(&self, factor: f64) -> Self {
        self.scale(factor)
    }

    fn __rmul__(&self, factor: f64) -> Self {
        self.scale(factor)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{}, {:?})", self.inner.rows(), self.inner.cols(), self.inner.data())
    }
}

impl PyMatrix {
    fn same_shape(&self, other: &PyMatrix) -> PyResult<()> {
        if self.inner.rows() != other.inner.rows() || self.inner.cols() != other.inner.cols() {
            return Err(PyValueError::new_err(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.inner.rows(),
                self.inner.cols(),
                other.inner.rows(),
                other.inner.cols()
            )));
        }
        Ok(())
    }
}

/// Eigenvalues (descending) and orthonormal eigenvector columns of a
/// symmetric matrix.
#[pyfunction]
fn sym_eigen(m: &PyMatrix) -> PyResult<(Vec<f64>, PyMatrix)> {
    let d = opmean::eigen::sym_eigen(&m.inner).map_err(to_py_err)?;
    Ok((d.eigenvalues.clone(), d.eigenvectors.clone().into()))
}

/// Singular values, descending.
#[pyfunction]
fn singular_values(m: &PyMatrix) -> PyResult<Vec<f64>> {
    Ok(opmean::svd::singular_values(&m.inner).map_err(to_py_err)?.values)
}

/// Real power of a positive definite matrix.
#[pyfunction]
fn matrix_power(m: &PyMatrix, p: f64) -> PyResult<PyMatrix> {
    opmean::eigen::matrix_power(&m.inner, p).map(PyMatrix::from).map_err(to_py_err)
}

#[pyfunction]
fn inverse(m: &PyMatrix) -> PyResult<PyMatrix> {
    opmean::eigen::inverse(&m.inner).map(PyMatrix::from).map_err(to_py_err)
}

#[pyfunction]
fn arithmetic_mean(a: &PyMatrix, b: &PyMatrix, nu: f64) -> PyResult<PyMatrix> {
    opmean::means::arithmetic_mean(&a.inner, &b.inner, nu).map(PyMatrix::from).map_err(to_py_err)
}

#[pyfunction]
fn geometric_mean(a: &PyMatrix, b: &PyMatrix, nu: f64) -> PyResult<PyMatrix> {
    opmean::means::geometric_mean(&a.inner, &b.inner, nu).map(PyMatrix::from).map_err(to_py_err)
}

#[pyfunction]
fn harmonic_mean(a: &PyMatrix, b: &PyMatrix, nu: f64) -> PyResult<PyMatrix> {
    opmean::means::harmonic_mean(&a.inner, &b.inner, nu).map(PyMatrix::from).map_err(to_py_err)
}

#[pyfunction]
fn heinz_mean(a: &PyMatrix, b: &PyMatrix, nu: f64) -> PyResult<PyMatrix> {
    opmean::means::heinz_mean(&a.inner, &b.inner, nu).map(PyMatrix::from).map_err(to_py_err)
}

fn parse_norm_kind(kind: &str, p: Option<f64>, k: Option<usize>) -> PyResult<NormKind> {
    match kind {
        "trace" => Ok(NormKind::Trace),
        "spectral" => Ok(NormKind::Spectral),
        "hilbert-schmidt" | "hs" => Ok(NormKind::HilbertSchmidt),
        "schatten" => {
            p.map(NormKind::Schatten).ok_or_else(|| PyValueError::new_err("schatten norm needs p"))
        }
        "kyfan" => {
            k.map(NormKind::KyFan).ok_or_else(|| PyValueError::new_err("ky fan norm needs k"))
        }
        other => Err(PyValueError::new_err(format!(
            "unknown norm kind '{other}' (trace, spectral, hilbert-schmidt, schatten, kyfan)"
        ))),
    }
}

/// Unitarily invariant norm of a matrix; `kind` as in the CLI.
#[pyfunction]
#[pyo3(signature = (m, kind, p=None, k=None))]
fn ui_norm(m: &PyMatrix, kind: &str, p: Option<f64>, k: Option<usize>) -> PyResult<f64> {
    opmean::norms::ui_norm(&m.inner, parse_norm_kind(kind, p, k)?).map_err(to_py_err)
}

/// Hilbert-Schmidt norm computed entrywise (no singular values).
#[pyfunction]
fn hs_norm(m: &PyMatrix) -> f64 {
    opmean::norms::hs_norm_entrywise(&m.inner)
}

/// k-th compound: all k x k minors in lexicographic order.
#[pyfunction]
fn compound(m: &PyMatrix, k: usize) -> PyResult<PyMatrix> {
    opmean::norms::compound_matrix(&m.inner, k).map(PyMatrix::from).map_err(to_py_err)
}

/// Loewner order of two symmetric matrices: "<=", ">=", "==", or
/// "incomparable", at the default scale-relative tolerance.
#[pyfunction]
fn loewner_relation(a: &PyMatrix, b: &PyMatrix) -> PyResult<String> {
    let tol = opmean::check::ToleranceConfig::default();
    let scale = opmean::eigen::sym_eigen(&a.inner).map_err(to_py_err)?.max_eigenvalue().abs()
        + opmean::eigen::sym_eigen(&b.inner).map_err(to_py_err)?.max_eigenvalue().abs();
    let verdict =
        loewner_compare(&a.inner, &b.inner, tol.loewner_threshold(scale)).map_err(to_py_err)?;
    Ok(match verdict.relation {
        LoewnerRelation::LessEq => "<=",
        LoewnerRelation::GreaterEq => ">=",
        LoewnerRelation::Equal => "==",
        LoewnerRelation::Incomparable => "incomparable",
    }
    .to_string())
}

/// Runs verification suites and returns the JSON report as a string.
#[pyfunction]
#[pyo3(signature = (suite="all", trials=100, seed=0, dims=(1, 6), threads=1, verbose=false,
                    tol_abs=None, tol_rel=None, loewner_tol=None))]
#[allow(clippy::too_many_arguments)]
fn run_suites(
    suite: &str,
    trials: usize,
    seed: u64,
    dims: (usize, usize),
    threads: usize,
    verbose: bool,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    loewner_tol: Option<f64>,
) -> PyResult<String> {
    let mut config = RunConfig {
        suites: vec![suite.to_string()],
        trials,
        threads,
        verbose,
        ..RunConfig::default()
    };
    config.sampler.seed = seed;
    config.sampler.dim_range = dims;
    if let Some(v) = tol_abs {
        config.tolerances.tol_abs = v;
    }
    if let Some(v) = tol_rel {
        config.tolerances.tol_rel = v;
    }
    if let Some(v) = loewner_tol {
        config.tolerances.loewner_tol = v;
    }
    Ok(opmean::runner::run_suites(&config).map_err(to_py_err)?.to_json())
}

/// Statement, hypothesis, and sampling scheme of one suite (or all of them).
#[pyfunction]
fn explain(suite: &str) -> PyResult<String> {
    let describe = |spec: &opmean::runner::SuiteSpec| {
        format!(
            "{}\n  statement:  {}\n  hypothesis: {}\n  sampling:   {}\n",
            spec.name, spec.statement, spec.hypothesis, spec.sampling
        )
    };
    if suite == "all" {
        return Ok(registry().iter().map(describe).collect::<Vec<_>>().join("\n"));
    }
    find_suite(suite)
        .map(describe)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite '{suite}'")))
}

/// Names of every registered suite.
#[pyfunction]
fn list_suites() -> Vec<String> {
    registry().iter().map(|s| s.name.to_string()).collect()
}

#[pymodule]
fn opmean_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(sym_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_power, m)?)?;
    m.add_function(wrap_pyfunction!(inverse, m)?)?;
    m.add_function(wrap_pyfunction!(arithmetic_mean, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_mean, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_mean, m)?)?;
    m.add_function(wrap_pyfunction!(heinz_mean, m)?)?;
    m.add_function(wrap_pyfunction!(ui_norm, m)?)?;
    m.add_function(wrap_pyfunction!(hs_norm, m)?)?;
    m.add_function(wrap_pyfunction!(compound, m)?)?;
    m.add_function(wrap_pyfunction!(loewner_relation, m)?)?;
    m.add_function(wrap_pyfunction!(run_suites, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    m.add_function(wrap_pyfunction!(list_suites, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

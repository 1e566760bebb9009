use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real matrix, row-major storage.
///
/// All entries are finite `f64`; constructors that accept untrusted data
/// validate this. The text form is a JSON document with fields `schema`,
/// `rows`, `cols`, `data` (row-major), written with round-trip-exact floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Schema tag written into serialized matrix documents.
pub const MATRIX_SCHEMA: &str = "opmean.matrix/1";

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    #[serde(default)]
    schema: Option<String>,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("matrix must have at least one row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("rows have inconsistent lengths".into()));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Matrix::from_parts(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// alpha*A + beta*B, entrywise.
    pub fn linear_comb(alpha: f64, a: &Matrix, beta: f64, b: &Matrix) -> Matrix {
        a.zip(b, |x, y| alpha * x + beta * y)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm of A - A^T.
    pub fn symmetry_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = self.get(i, j) - self.get(j, i);
                s += 2.0 * d * d;
            }
        }
        s.sqrt()
    }

    /// (A + A^T)/2; makes roundoff-level asymmetry exactly symmetric.
    pub fn symmetrize(&self) -> Matrix {
        assert!(self.is_square());
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    /// Scales row i by d[i]; exact per entry up to one rounding.
    pub fn scale_rows(&self, d: &[f64]) -> Matrix {
        assert_eq!(d.len(), self.rows);
        Matrix::from_fn(self.rows, self.cols, |i, j| d[i] * self.get(i, j))
    }

    /// Scales column j by d[j].
    pub fn scale_cols(&self, d: &[f64]) -> Matrix {
        assert_eq!(d.len(), self.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * d[j])
    }

    /// Determinant by Gaussian elimination with partial (row) pivoting.
    pub fn determinant(&self) -> Result<f64> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut piv = k;
            let mut best = a.get(k, k).abs();
            for i in (k + 1)..n {
                let v = a.get(i, k).abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 {
                return Ok(0.0);
            }
            if piv != k {
                for j in 0..n {
                    let tmp = a.get(k, j);
                    a.set(k, j, a.get(piv, j));
                    a.set(piv, j, tmp);
                }
                det = -det;
            }
            let pivot = a.get(k, k);
            det *= pivot;
            for i in (k + 1)..n {
                let factor = a.get(i, k) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let v = a.get(i, j) - factor * a.get(k, j);
                    a.set(i, j, v);
                }
                a.set(i, k, 0.0);
            }
        }
        Ok(det)
    }

    /// Serializes to the matrix text format (JSON document).
    pub fn to_text(&self) -> String {
        let doc = MatrixDoc {
            schema: Some(MATRIX_SCHEMA.to_string()),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("matrix serialization");
        s.push('\n');
        s
    }

    /// Parses the matrix text format. The `schema` field is optional but
    /// must match when present.
    pub fn from_text(text: &str) -> Result<Self> {
        let doc: MatrixDoc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("matrix parse error: {e}")))?;
        if let Some(schema) = &doc.schema {
            if schema != MATRIX_SCHEMA {
                return Err(Error::InvalidInput(format!(
                    "unsupported matrix schema {schema:?}, expected {MATRIX_SCHEMA:?}"
                )));
            }
        }
        Matrix::from_parts(doc.rows, doc.cols, doc.data)
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::add(self, rhs)
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs)
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_identity_is_one() {
        assert_eq!(Matrix::identity(4).determinant().unwrap(), 1.0);
    }

    #[test]
    fn determinant_diagonal_is_product() {
        let d = Matrix::diag(&[2.0, 3.0, 6.0]);
        assert_eq!(d.determinant().unwrap(), 36.0);
    }

    #[test]
    fn determinant_2x2() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!((m.determinant().unwrap() - (-2.0)).abs() < 1e-14);
    }

    #[test]
    fn determinant_singular_is_zero() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(m.determinant().unwrap().abs() < 1e-14);
    }

    #[test]
    fn determinant_needs_pivoting() {
        // zero top-left pivot forces a row swap
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((m.determinant().unwrap() - (-1.0)).abs() < 1e-14);
    }

    #[test]
    fn matmul_and_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let ab = &a * &b;
        assert_eq!(ab.data(), &[19.0, 22.0, 43.0, 50.0]);
        let at = a.transpose();
        assert_eq!(at.data(), &[1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn text_format_roundtrip() {
        let m = Matrix::from_rows(&[vec![1.5, -2.25e-10], vec![0.1, 4.0]]).unwrap();
        let text = m.to_text();
        let back = Matrix::from_text(&text).unwrap();
        assert_eq!(m, back);
        // bit-exact floats after the round trip
        assert_eq!(m.data()[1].to_bits(), back.data()[1].to_bits());
    }

    #[test]
    fn text_format_accepts_plain_fields() {
        let m = Matrix::from_text(r#"{"rows":1,"cols":2,"data":[1.0,2.0]}"#).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.get(0, 1), 2.0);
    }

    #[test]
    fn text_format_rejects_bad_schema() {
        let r = Matrix::from_text(r#"{"schema":"other/9","rows":1,"cols":1,"data":[1.0]}"#);
        assert!(r.is_err());
    }

    #[test]
    fn from_parts_rejects_nonfinite() {
        assert!(Matrix::from_parts(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(Matrix::from_parts(1, 2, vec![1.0]).is_err());
        assert!(Matrix::from_parts(0, 0, vec![]).is_err());
    }

    #[test]
    fn symmetry_defect_detects_asymmetry() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!((m.symmetry_defect() - (2.0f64 * 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(m.symmetrize().get(0, 1), 1.0);
        assert_eq!(m.symmetrize().get(1, 0), 1.0);
    }
}

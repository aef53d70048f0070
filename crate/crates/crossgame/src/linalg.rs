//! Minimal dense linear algebra: row-major matrices, Euclidean norms, and
//! random orthogonal bases.
//!
//! This is deliberately small. The games built in this crate are dense,
//! moderately sized (a few hundred rows) and only ever need matrix-vector
//! products, matrix products for assembly, and an orthonormal basis. No
//! general eigendecomposition, no sparse formats.

use thiserror::Error;

use crate::rng::SeededRng;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix dimensions must be positive")]
    EmptyDimension,
}

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(LinalgError::EmptyDimension);
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Dense product `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Dense product `A B`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Rescales column `j` by `scale[j]`.
    pub fn scale_columns(&self, scale: &[f64]) -> Result<Matrix, LinalgError> {
        if scale.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: scale.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, s) in scale.iter().enumerate() {
                out.set(i, j, self.get(i, j) * s);
            }
        }
        Ok(out)
    }

    /// Max-norm: largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Replaces the matrix by its symmetric part `(A + A^T)/2`.
    pub fn symmetrize(&mut self) {
        assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let s = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, s);
                self.set(j, i, s);
            }
        }
    }
}

/// `||x||_2`.
pub fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Draws a random `d x d` orthogonal matrix: fills a matrix with standard
/// normal entries and orthonormalizes its columns by Gram-Schmidt with one
/// reorthogonalization pass, which keeps `Q^T Q - I` at machine-precision
/// level independently of the conditioning of the Gaussian draw.
///
/// Deterministic for a given generator state.
pub fn random_orthogonal(d: usize, rng: &mut SeededRng) -> Result<Matrix, LinalgError> {
    if d == 0 {
        return Err(LinalgError::EmptyDimension);
    }
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    for _ in 0..d {
        loop {
            let mut v = rng.normal_vec(d);
            for _pass in 0..2 {
                for q in &cols {
                    let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
            }
            let norm = euclidean_norm(&v);
            if norm > 1e-150 {
                for vi in v.iter_mut() {
                    *vi /= norm;
                }
                cols.push(v);
                break;
            }
            // astronomically unlikely degenerate draw; redraw the column
        }
    }
    let mut q = Matrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            q.set(i, j, *v);
        }
    }
    Ok(q)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Seed threaded explicitly through every randomized operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    /// A fresh generator. ChaCha8 output is stable across platforms and
    /// crate releases, which `StdRng` does not promise.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RandomSeed {
    fn from(seed: u64) -> Self {
        RandomSeed(seed)
    }
}

/// Row-major dense matrix of finite reals.
///
/// Data matrices are stored with one column per sample (player) and one row
/// per feature (day), so most per-sample kernels here are written as row
/// sweeps over blocks of columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    /// Panics on a zero dimension.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be non-empty");
        DenseMatrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r, c));
            }
        }
        Self::new(rows, cols, values)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        if let Some(bad) = columns.iter().position(|c| c.as_ref().len() != rows) {
            return Err(Error::Dimension(format!(
                "column {bad} has length {}, expected {rows}",
                columns[bad].as_ref().len()
            )));
        }
        Self::from_fn(rows, cols, |r, c| columns[c].as_ref()[r])
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(n * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.as_ref().len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.as_ref().len()
                )));
            }
            values.extend_from_slice(r.as_ref());
        }
        Self::new(n, cols, values)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        debug_assert!(values.iter().all(|v| v.is_finite()));
        DenseMatrix { rows, cols, values }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        self.transpose().values.chunks(self.rows).map(<[f64]>::to_vec).collect()
    }

    pub fn select_columns(&self, indices: &[usize]) -> DenseMatrix {
        let mut out = Vec::with_capacity(self.rows * indices.len());
        for r in 0..self.rows {
            let row = self.row(r);
            out.extend(indices.iter().map(|&c| row[c]));
        }
        DenseMatrix::from_raw(self.rows, indices.len(), out)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = vec![0.0; self.values.len()];
        for r in 0..self.rows {
            for (c, &v) in self.row(r).iter().enumerate() {
                out[c * self.rows + r] = v;
            }
        }
        DenseMatrix::from_raw(self.cols, self.rows, out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DenseMatrix::from_raw(self.rows, self.cols, values))
    }

    fn check_same_shape(&self, other: &DenseMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `self · other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let mut out = vec![0.0; self.rows * n];
        par::for_each_chunk_mut(&mut out, n, |r, acc| {
            for (j, &a) in self.row(r).iter().enumerate() {
                if a != 0.0 {
                    axpy(acc, a, other.row(j));
                }
            }
        });
        Ok(DenseMatrix::from_raw(self.rows, n, out))
    }

    /// `selfᵀ · other`, without materializing the transpose.
    pub fn t_matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply ({}x{})ᵀ by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let mut out = vec![0.0; self.cols * n];
        par::for_each_chunk_mut(&mut out, n, |j, acc| {
            for r in 0..self.rows {
                let a = self.get(r, j);
                if a != 0.0 {
                    axpy(acc, a, other.row(r));
                }
            }
        });
        Ok(DenseMatrix::from_raw(self.cols, n, out))
    }

    /// `self · otherᵀ`.
    pub fn matmul_t(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by ({}x{})ᵀ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.rows;
        let mut out = vec![0.0; self.rows * n];
        par::for_each_chunk_mut(&mut out, n, |r, acc| {
            let a = self.row(r);
            for (j, slot) in acc.iter_mut().enumerate() {
                *slot = dot(a, other.row(j));
            }
        });
        Ok(DenseMatrix::from_raw(self.rows, n, out))
    }

    /// Runs `f(row, first_col, row_segment, acc)` over every row for each
    /// block of columns, where `acc` holds one accumulator per column of the
    /// block. Returns the accumulators for all columns.
    pub(crate) fn column_sweep<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(usize, usize, &[f64], &mut [f64]) + Sync + Send,
    {
        let mut out = vec![0.0; self.cols];
        par::for_each_chunk_mut(&mut out, par::COLUMN_BLOCK, |b, acc| {
            let c0 = b * par::COLUMN_BLOCK;
            for r in 0..self.rows {
                f(r, c0, &self.row(r)[c0..c0 + acc.len()], acc);
            }
        });
        out
    }

    /// Squared Euclidean distance from every column to `point`.
    pub fn column_sq_distances(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.rows {
            return Err(Error::Dimension(format!(
                "point has length {}, columns have length {}",
                point.len(),
                self.rows
            )));
        }
        Ok(self.column_sweep(|r, _, seg, acc| {
            let p = point[r];
            for (a, &v) in acc.iter_mut().zip(seg) {
                let d = v - p;
                *a += d * d;
            }
        }))
    }

    pub fn column_sq_norms(&self) -> Vec<f64> {
        self.column_sweep(|_, _, seg, acc| {
            for (a, &v) in acc.iter_mut().zip(seg) {
                *a += v * v;
            }
        })
    }

    /// Arithmetic mean of the columns.
    pub fn column_mean(&self) -> Vec<f64> {
        let n = self.cols as f64;
        (0..self.rows)
            .map(|r| self.row(r).iter().sum::<f64>() / n)
            .collect()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn axpy(acc: &mut [f64], a: f64, x: &[f64]) {
    for (y, &v) in acc.iter_mut().zip(x) {
        *y += a * v;
    }
}

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    m.values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(sq_dist(a, b))
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

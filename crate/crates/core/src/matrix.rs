//! Dense row-major prediction matrix `F[i][j] = f_j(X_i)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PredictionMatrix {
    /// Build from row-major storage. All entries must be finite.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "prediction matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "prediction matrix entry ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(n, m, rows.concat())
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let m = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            data.extend(cols.iter().map(|c| c[i]));
        }
        Self::from_row_major(n, m, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `F w`, written into `out`.
    pub fn mul_vec_into(&self, w: &[f64], out: &mut [f64]) {
        debug_assert_eq!(w.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = row.iter().zip(w).map(|(a, b)| a * b).sum();
        }
    }

    pub fn mul_vec(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_vec_into(w, &mut out);
        out
    }

    /// Check that a response vector matches the row count.
    pub fn check_response(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "response has length {} but prediction matrix has {} rows",
                y.len(),
                self.rows
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("response entry {i}")));
        }
        Ok(())
    }
}

/// Sum of squared residuals `∑ (y_i − fitted_i)²`.
#[inline]
pub fn sum_sq_resid(y: &[f64], fitted: &[f64]) -> f64 {
    y.iter()
        .zip(fitted)
        .map(|(a, b)| {
            let r = a - b;
            r * r
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let err = PredictionMatrix::from_row_major(1, 2, vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn columns_and_rows_agree() {
        let a = PredictionMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]])
            .unwrap();
        let b = PredictionMatrix::from_columns(&[vec![1.0, 3.0, 5.0], vec![2.0, 4.0, 6.0]])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mul_vec(&[1.0, -1.0]), vec![-1.0, -1.0, -1.0]);
    }
}

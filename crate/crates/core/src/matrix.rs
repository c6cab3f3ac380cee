//! Dense real matrices with a finiteness invariant.

use alloc::vec::Vec;
use core::fmt;

use faer::{Mat, MatRef};

use crate::error::{Error, Result};

/// Relative tolerance used by [`DenseMatrix::numerical_rank`].
pub const RANK_RELATIVE_TOL: f64 = 1e-12;

/// A finite, non-empty `rows x cols` matrix of `f64`.
///
/// Storage is a column-major [`faer::Mat`]; constructors that take flat slices
/// expect row-major order.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix(Mat<f64>);

impl DenseMatrix {
    /// Wraps an existing matrix after checking shape and finiteness.
    pub fn from_mat(mat: Mat<f64>) -> Result<Self> {
        check_shape(mat.nrows(), mat.ncols())?;
        check_finite(mat.as_ref())?;
        Ok(DenseMatrix(mat))
    }

    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(alloc::format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Self::from_mat(Mat::from_fn(rows, cols, |i, j| data[i * cols + j]))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
            return Err(Error::InvalidInput(alloc::format!(
                "row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        check_shape(rows.len(), ncols)?;
        Self::from_mat(Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        check_shape(rows, cols)?;
        Self::from_mat(Mat::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(DenseMatrix(Mat::zeros(rows, cols)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_shape(n, n)?;
        Ok(DenseMatrix(Mat::identity(n, n)))
    }

    /// Square diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn as_mat(&self) -> MatRef<'_, f64> {
        self.0.as_ref()
    }

    pub fn into_mat(self) -> Mat<f64> {
        self.0
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols()).map(|j| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix(self.0.transpose().to_owned())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::ShapeMismatch {
                expected: (self.cols(), rhs.cols()),
                found: rhs.shape(),
            });
        }
        Self::from_mat(&self.0 * &rhs.0)
    }

    /// Entrywise map; fails if the map produces a non-finite value.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::from_mat(Mat::from_fn(self.rows(), self.cols(), |i, j| f(self.get(i, j))))
    }

    /// Largest absolute entry (the max-norm).
    pub fn max_abs(&self) -> f64 {
        max_abs(self.as_mat())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm_l2()
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        self.0
            .singular_values()
            .map_err(|e| Error::Numerical(alloc::format!("singular value decomposition failed: {e:?}")))
    }

    /// Number of singular values above `max(rows, cols) * sigma_max * 1e-12`.
    pub fn numerical_rank(&self) -> Result<usize> {
        let sv = self.singular_values()?;
        let smax = sv.first().copied().unwrap_or(0.0);
        let tol = self.rows().max(self.cols()) as f64 * smax * RANK_RELATIVE_TOL;
        Ok(sv.iter().filter(|&&s| s > tol).count())
    }

    /// Numerical rank with an explicit absolute threshold.
    pub fn rank_above(&self, threshold: f64) -> Result<usize> {
        Ok(self.singular_values()?.iter().filter(|&&s| s > threshold).count())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows().min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols().min(8) {
                write!(f, "{:>10.4} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    Ok(())
}

pub(crate) fn check_finite(m: MatRef<'_, f64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub(crate) fn max_abs(m: MatRef<'_, f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = libm::fabs(m[(i, j)]);
            if v > best || v.is_nan() {
                best = v;
            }
        }
    }
    best
}

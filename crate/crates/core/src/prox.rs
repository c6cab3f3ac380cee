//! Proximal operators of the nuclear norm and the L2,1 norm.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Singular value thresholding: `U diag(max(s - tau, 0)) V^T`.
///
/// Only the components whose singular value exceeds `tau` are reassembled, so
/// the retained singular vectors are exactly those of the input.
pub fn svt(m: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(m.clone());
    }
    DenseMatrix::from_mat(svt_mat(m.as_mat(), tau)?)
}

/// Column-wise shrinkage, the proximal operator of `tau * ||.||_{2,1}`.
pub fn l21_prox(m: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    check_tau(tau)?;
    DenseMatrix::from_mat(l21_prox_mat(m.as_mat(), tau))
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidInput(alloc::format!(
            "threshold must be a finite nonnegative number, got {tau}"
        )));
    }
    Ok(())
}

pub(crate) fn svt_mat(m: MatRef<'_, f64>, tau: f64) -> Result<Mat<f64>> {
    let svd = m
        .thin_svd()
        .map_err(|e| Error::Numerical(alloc::format!("singular value decomposition did not converge: {e:?}")))?;
    let s = svd.S().column_vector();
    let keep = (0..s.nrows()).take_while(|&k| s[k] > tau).count();
    let (rows, cols) = (m.nrows(), m.ncols());
    if keep == 0 {
        return Ok(Mat::zeros(rows, cols));
    }
    let u = svd.U().get(.., ..keep);
    let v = svd.V().get(.., ..keep);
    let mut us = u.to_owned();
    for k in 0..keep {
        let shrink = s[k] - tau;
        for i in 0..rows {
            us[(i, k)] *= shrink;
        }
    }
    Ok(&us * v.transpose())
}

pub(crate) fn l21_prox_mat(m: MatRef<'_, f64>, tau: f64) -> Mat<f64> {
    let mut out = Mat::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        let norm = column_norm(m, j);
        if norm > tau {
            let scale = (norm - tau) / norm;
            for i in 0..m.nrows() {
                out[(i, j)] = scale * m[(i, j)];
            }
        }
    }
    out
}

pub(crate) fn column_norm(m: MatRef<'_, f64>, j: usize) -> f64 {
    m.col(j).norm_l2()
}

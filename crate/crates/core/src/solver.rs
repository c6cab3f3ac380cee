//! Inexact ALM solver for the low-rank representation problem
//!
//! ```text
//! min ||X||_* + alpha * ||E||_{2,1}   s.t.   A = A X + E
//! ```
//!
//! The nuclear norm is split off through an auxiliary `J` with the extra
//! constraint `X = J`. Each sweep updates `J` by singular value thresholding,
//! `X` through the normal equations `(I + A^T A) X = ...`, `E` by column
//! shrinkage, then both multipliers and the penalty `mu`.

use alloc::format;

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::matrix::{check_finite, max_abs, DenseMatrix};
use crate::prox::{l21_prox_mat, svt_mat};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Weight of the `||E||_{2,1}` term.
    pub alpha: f64,
    pub mu0: f64,
    pub mu_max: f64,
    pub rho: f64,
    /// Both max-norm residuals must drop below this value.
    pub epsilon: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha: 0.15,
            mu0: 1e-4,
            mu_max: 1e10,
            rho: 1.1,
            epsilon: 1e-8,
            max_iter: 1000,
        }
    }
}

impl SolverConfig {
    pub fn with_alpha(self, alpha: f64) -> Self {
        SolverConfig { alpha, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.alpha.is_finite()
            && self.mu0 > 0.0
            && self.mu0 < self.mu_max
            && self.mu_max.is_finite()
            && self.rho > 1.0
            && self.rho.is_finite()
            && self.epsilon > 0.0
            && self.max_iter >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid solver configuration {self:?}: need alpha > 0, 0 < mu0 < mu_max, rho > 1, epsilon > 0, max_iter >= 1"
            )))
        }
    }
}

/// Per-iteration snapshot handed to observers of [`solve_lrr_observed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationState {
    pub iteration: usize,
    /// Penalty used during this iteration's multiplier update.
    pub mu: f64,
    pub feasibility: f64,
    pub consistency: f64,
}

/// Convergence summary of a solve, detached from the (possibly large) iterates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveDiagnostics {
    pub alpha: f64,
    pub size: usize,
    pub iterations: usize,
    pub converged: bool,
    pub residual_feasibility: f64,
    pub residual_consistency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrrSolution {
    /// `n x n` coefficient matrix for an `m x n` input.
    pub x_star: DenseMatrix,
    /// `m x n` column-sparse noise.
    pub e_star: DenseMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// Final `||A - A X - E||_max`.
    pub residual_feasibility: f64,
    /// Final `||X - J||_max`.
    pub residual_consistency: f64,
    pub alpha: f64,
}

impl LrrSolution {
    pub fn diagnostics(&self) -> SolveDiagnostics {
        SolveDiagnostics {
            alpha: self.alpha,
            size: self.x_star.rows(),
            iterations: self.iterations,
            converged: self.converged,
            residual_feasibility: self.residual_feasibility,
            residual_consistency: self.residual_consistency,
        }
    }

    pub fn rank(&self) -> Result<usize> {
        self.x_star.numerical_rank()
    }
}

pub fn solve_lrr(a: &DenseMatrix, config: &SolverConfig) -> Result<LrrSolution> {
    solve_lrr_observed(a, config, |_| {})
}

/// [`solve_lrr`] with a callback invoked after every iteration.
pub fn solve_lrr_observed(
    a: &DenseMatrix,
    config: &SolverConfig,
    mut observe: impl FnMut(&IterationState),
) -> Result<LrrSolution> {
    config.validate()?;
    let a = a.as_mat();
    let (m, n) = (a.nrows(), a.ncols());
    let at = a.transpose();
    let ata = at * a;
    let mut normal = ata.clone();
    for i in 0..n {
        normal[(i, i)] += 1.0;
    }
    // I + A^T A is symmetric positive definite; factor once, reuse every sweep.
    let chol = normal
        .llt(Side::Lower)
        .map_err(|e| Error::Numerical(format!("normal equations not positive definite: {e:?}")))?;

    let mut x = Mat::<f64>::zeros(n, n);
    let mut e = Mat::<f64>::zeros(m, n);
    let mut y1 = Mat::<f64>::zeros(m, n);
    let mut y2 = Mat::<f64>::zeros(n, n);
    let mut j_aux;
    let mut mu = config.mu0;

    let mut iterations = 0;
    let mut converged = false;
    let mut feasibility = f64::INFINITY;
    let mut consistency = f64::INFINITY;

    while iterations < config.max_iter {
        iterations += 1;
        let inv_mu = 1.0 / mu;

        // J = svt(X + Y2/mu, 1/mu)
        let shifted = Mat::from_fn(n, n, |i, k| x[(i, k)] + y2[(i, k)] * inv_mu);
        j_aux = svt_mat(shifted.as_ref(), inv_mu)?;

        // X = (I + A^T A)^{-1} (A^T A + J - Y2/mu + A^T (Y1/mu - E))
        let inner = Mat::from_fn(m, n, |i, k| y1[(i, k)] * inv_mu - e[(i, k)]);
        let mut rhs = at * &inner;
        for k in 0..n {
            for i in 0..n {
                rhs[(i, k)] += ata[(i, k)] + j_aux[(i, k)] - y2[(i, k)] * inv_mu;
            }
        }
        chol.solve_in_place(rhs.as_mut());
        x = rhs;

        // E = l21_prox(A - A X + Y1/mu, alpha/mu)
        let ax = a * &x;
        let target = Mat::from_fn(m, n, |i, k| a[(i, k)] - ax[(i, k)] + y1[(i, k)] * inv_mu);
        e = l21_prox_mat(target.as_ref(), config.alpha * inv_mu);

        let leq1 = Mat::from_fn(m, n, |i, k| a[(i, k)] - ax[(i, k)] - e[(i, k)]);
        let leq2 = Mat::from_fn(n, n, |i, k| x[(i, k)] - j_aux[(i, k)]);
        feasibility = max_abs(leq1.as_ref());
        consistency = max_abs(leq2.as_ref());
        if !feasibility.is_finite() || !consistency.is_finite() {
            return Err(Error::Numerical(format!(
                "iterates became non-finite at iteration {iterations}"
            )));
        }

        add_scaled(&mut y1, leq1.as_ref(), mu);
        add_scaled(&mut y2, leq2.as_ref(), mu);
        observe(&IterationState {
            iteration: iterations,
            mu,
            feasibility,
            consistency,
        });
        mu = (config.rho * mu).min(config.mu_max);

        if feasibility < config.epsilon && consistency < config.epsilon {
            converged = true;
            break;
        }
    }

    check_finite(x.as_ref())
        .and_then(|_| check_finite(e.as_ref()))
        .map_err(|_| Error::Numerical("solver produced non-finite output".into()))?;
    Ok(LrrSolution {
        x_star: DenseMatrix::from_mat(x)?,
        e_star: DenseMatrix::from_mat(e)?,
        iterations,
        converged,
        residual_feasibility: feasibility,
        residual_consistency: consistency,
        alpha: config.alpha,
    })
}

fn add_scaled(acc: &mut Mat<f64>, delta: MatRef<'_, f64>, scale: f64) {
    for k in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            acc[(i, k)] += scale * delta[(i, k)];
        }
    }
}

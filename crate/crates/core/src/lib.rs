//! Low-rank matrix projection (LMP) for bipartite interaction prediction.
//!
//! The crate is `no_std` with `alloc`. It covers the numerical side of the
//! method: an inexact augmented-Lagrange-multiplier solver for the
//! low-rank representation problem
//!
//! ```text
//! min ||X||_* + alpha * ||E||_{2,1}   s.t.   A = A X + E
//! ```
//!
//! projection-based score matrices built from its solution, similarity-index
//! baselines, ranking metrics and a cross-validation harness. File formats and
//! the command-line front end live in the `lmp` crate.
//!
//! A typical interaction-only run:
//!
//! ```
//! use lmp_core::{build_adjacency, compute_za, mask_and_rank, SolverConfig};
//!
//! let edges = [("d1", "t1"), ("d1", "t2"), ("d2", "t1")];
//! let a = build_adjacency(&edges, &["d1", "d2"], &["t1", "t2"]).unwrap();
//! let za = compute_za(&a, 0.15, 0.15, &SolverConfig::default()).unwrap();
//! let ranked = mask_and_rank(&za, &a, None);
//! assert_eq!(ranked.len(), 1);
//! assert_eq!((ranked[0].drug_id.as_str(), ranked[0].target_id.as_str()), ("d2", "t2"));
//! ```
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod cv;
mod error;
pub mod folds;
pub mod interaction;
pub mod matrix;
pub mod metrics;
pub mod prox;
pub mod scoring;
pub mod solver;

pub use baselines::{katz_beta_limit, katz_scores, local_index_scores, BaselineMethod, BaselineParams, LocalIndex, KATZ_BETA_GRID};
pub use cv::{
    interaction_alpha_grid, run_cv, similarity_alpha_grid, sweep_alpha, CvContext, EvalResult,
    FoldOutcome, Method, MethodParams, ParamChoice, SelectedParams, SweepRow,
};
pub use error::{Error, ErrorCategory, Result};
pub use folds::{make_folds, Fold, FoldPlan, FoldSpec, HeldOut, HoldoutMode};
pub use interaction::{
    build_adjacency, AlignmentReport, DatasetBundle, InteractionMatrix, Side, SimilarityMatrix,
};
pub use matrix::DenseMatrix;
pub use metrics::{auc, aupr};
pub use prox::{l21_prox, svt};
pub use scoring::{
    combine_zadt, compute_side_scores, compute_za, mask_and_rank, Gammas, Projection, Provenance,
    RankedPair, ScoreMatrix,
};
pub use solver::{solve_lrr, solve_lrr_observed, IterationState, LrrSolution, SolveDiagnostics, SolverConfig};

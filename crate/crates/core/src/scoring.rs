//! Score matrices obtained by projecting the adjacency onto learned low-rank
//! similarity matrices, plus masking and ranking of candidate pairs.
//!
//! Every [`ScoreMatrix`] is stored drugs x targets. A drug-side coefficient
//! matrix `X` (`m x m`) scores as `X^T A`; a target-side one (`n x n`) as `A X`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use faer::Mat;

use crate::error::{Error, Result};
use crate::interaction::{InteractionMatrix, Side, SimilarityMatrix};
use crate::matrix::DenseMatrix;
use crate::solver::{solve_lrr, SolveDiagnostics, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Provenance {
    ZA,
    ZD,
    ZT,
    ZADT,
    CN,
    Jaccard,
    Katz,
    CJC,
    CRA,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ZA => "ZA",
            Provenance::ZD => "ZD",
            Provenance::ZT => "ZT",
            Provenance::ZADT => "ZADT",
            Provenance::CN => "CN",
            Provenance::Jaccard => "Jaccard",
            Provenance::Katz => "Katz",
            Provenance::CJC => "CJC",
            Provenance::CRA => "CRA",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    z: DenseMatrix,
    provenance: Provenance,
    mask: Option<Vec<bool>>,
    diagnostics: Vec<SolveDiagnostics>,
}

impl ScoreMatrix {
    pub fn new(z: DenseMatrix, provenance: Provenance) -> Self {
        ScoreMatrix {
            z,
            provenance,
            mask: None,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn with_diagnostics(mut self, diagnostics: Vec<SolveDiagnostics>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.z
    }

    #[inline]
    pub fn get(&self, drug: usize, target: usize) -> f64 {
        self.z.get(drug, target)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn shape(&self) -> (usize, usize) {
        self.z.shape()
    }

    /// Solver diagnostics of every LRR solve behind this matrix.
    pub fn diagnostics(&self) -> &[SolveDiagnostics] {
        &self.diagnostics
    }

    pub fn is_masked(&self) -> bool {
        self.mask.is_some()
    }

    /// Marks the positives of `train` as excluded from ranking.
    pub fn masked(mut self, train: &InteractionMatrix) -> Result<Self> {
        check_same_shape(self.shape(), (train.n_drugs(), train.n_targets()))?;
        let n = train.n_targets();
        let mut mask = alloc::vec![false; train.n_drugs() * n];
        for (i, j) in train.positives() {
            mask[i * n + j] = true;
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn is_excluded(&self, drug: usize, target: usize) -> bool {
        self.mask
            .as_ref()
            .is_some_and(|m| m[drug * self.z.cols() + target])
    }
}

/// A learned coefficient matrix for one side, ready to project adjacencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub side: Side,
    pub x: DenseMatrix,
    pub diagnostics: SolveDiagnostics,
}

impl Projection {
    /// Drug side from interactions: LRR of `A^T`, giving an `m x m` coefficient matrix.
    pub fn from_interactions(a: &InteractionMatrix, side: Side, config: &SolverConfig) -> Result<Self> {
        let input = match side {
            Side::Drug => a.matrix().transpose(),
            Side::Target => a.matrix().clone(),
        };
        let sol = solve_lrr(&input, config)?;
        Ok(Projection {
            side,
            diagnostics: sol.diagnostics(),
            x: sol.x_star,
        })
    }

    /// LRR of a similarity matrix.
    pub fn from_similarity(sim: &SimilarityMatrix, config: &SolverConfig) -> Result<Self> {
        let sol = solve_lrr(sim.matrix(), config)?;
        Ok(Projection {
            side: sim.side(),
            diagnostics: sol.diagnostics(),
            x: sol.x_star,
        })
    }

    /// Projected scores in drugs x targets orientation.
    pub fn apply(&self, a: &InteractionMatrix) -> Result<DenseMatrix> {
        let (m, n) = (a.n_drugs(), a.n_targets());
        let am = a.matrix().as_mat();
        let x = self.x.as_mat();
        let z: Mat<f64> = match self.side {
            Side::Drug => {
                check_same_shape(self.x.shape(), (m, m))?;
                x.transpose() * am
            }
            Side::Target => {
                check_same_shape(self.x.shape(), (n, n))?;
                am * x
            }
        };
        DenseMatrix::from_mat(z)
    }
}

fn check_same_shape(found: (usize, usize), expected: (usize, usize)) -> Result<()> {
    if found != expected {
        return Err(Error::ShapeMismatch { expected, found });
    }
    Ok(())
}

/// Interaction-only scores: the average of the drug-side and target-side projections.
pub fn compute_za(
    a: &InteractionMatrix,
    alpha_d: f64,
    alpha_t: f64,
    config: &SolverConfig,
) -> Result<ScoreMatrix> {
    let drug = Projection::from_interactions(a, Side::Drug, &config.with_alpha(alpha_d))?;
    let target = Projection::from_interactions(a, Side::Target, &config.with_alpha(alpha_t))?;
    za_from_projections(a, &drug, &target)
}

pub(crate) fn za_from_projections(
    a: &InteractionMatrix,
    drug: &Projection,
    target: &Projection,
) -> Result<ScoreMatrix> {
    let zd = drug.apply(a)?;
    let zt = target.apply(a)?;
    let z = DenseMatrix::from_fn(a.n_drugs(), a.n_targets(), |i, j| 0.5 * (zd.get(i, j) + zt.get(i, j)))?;
    Ok(ScoreMatrix::new(z, Provenance::ZA).with_diagnostics(alloc::vec![drug.diagnostics, target.diagnostics]))
}

/// Scores from one similarity matrix (`ZD` for drugs, `ZT` for targets).
pub fn compute_side_scores(
    a: &InteractionMatrix,
    sim: &SimilarityMatrix,
    alpha: f64,
    config: &SolverConfig,
) -> Result<ScoreMatrix> {
    check_alignment(a, sim)?;
    let proj = Projection::from_similarity(sim, &config.with_alpha(alpha))?;
    side_from_projection(a, &proj)
}

pub(crate) fn side_from_projection(a: &InteractionMatrix, proj: &Projection) -> Result<ScoreMatrix> {
    let provenance = match proj.side {
        Side::Drug => Provenance::ZD,
        Side::Target => Provenance::ZT,
    };
    Ok(ScoreMatrix::new(proj.apply(a)?, provenance).with_diagnostics(alloc::vec![proj.diagnostics]))
}

fn check_alignment(a: &InteractionMatrix, sim: &SimilarityMatrix) -> Result<()> {
    if sim.ids() != a.ids(sim.side()) {
        return Err(Error::InvalidInput(alloc::format!(
            "{} similarity identifiers are not aligned with the interaction matrix",
            sim.side()
        )));
    }
    Ok(())
}

/// Weights of `ZA`, `ZD` and `ZT` in the heterogeneous combination.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Gammas(pub f64, pub f64, pub f64);

impl Default for Gammas {
    fn default() -> Self {
        Gammas(0.5, 0.25, 0.25)
    }
}

pub fn combine_zadt(za: &ScoreMatrix, zd: &ScoreMatrix, zt: &ScoreMatrix, gammas: Gammas) -> Result<ScoreMatrix> {
    check_same_shape(zd.shape(), za.shape())?;
    check_same_shape(zt.shape(), za.shape())?;
    let Gammas(g1, g2, g3) = gammas;
    let (m, n) = za.shape();
    let z = DenseMatrix::from_fn(m, n, |i, j| g1 * za.get(i, j) + g2 * zd.get(i, j) + g3 * zt.get(i, j))?;
    let diagnostics = [za, zd, zt]
        .iter()
        .flat_map(|s| s.diagnostics().iter().copied())
        .collect();
    Ok(ScoreMatrix::new(z, Provenance::ZADT).with_diagnostics(diagnostics))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankedPair {
    pub drug: usize,
    pub target: usize,
    pub drug_id: String,
    pub target_id: String,
    pub score: f64,
}

/// Ranks every pair that is not a positive of `train`, best first.
///
/// Ties are ordered by drug index, then target index. Training positives are
/// left out entirely rather than overwritten, so negative scores still rank.
pub fn mask_and_rank(z: &ScoreMatrix, train: &InteractionMatrix, top_k: Option<usize>) -> Vec<RankedPair> {
    let (m, n) = (train.n_drugs().min(z.shape().0), train.n_targets().min(z.shape().1));
    let mut pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !train.contains(i, j) && !z.is_excluded(i, j))
        .collect();
    pairs.sort_by(|&(i1, j1), &(i2, j2)| {
        z.get(i2, j2)
            .total_cmp(&z.get(i1, j1))
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });
    if let Some(k) = top_k {
        pairs.truncate(k);
    }
    pairs
        .into_iter()
        .map(|(i, j)| RankedPair {
            drug: i,
            target: j,
            drug_id: train.drug_ids()[i].clone(),
            target_id: train.target_ids()[j].clone(),
            score: z.get(i, j),
        })
        .collect()
}

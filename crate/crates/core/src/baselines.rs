//! Similarity-index baselines on the bipartite drug-target graph.
//!
//! For a candidate pair (drug `u`, target `v`) the local community is
//! `C(u, v) = (N(u) ∩ N(N(v))) ∪ (N(v) ∩ N(N(u)))`, the intermediate nodes of
//! all length-3 paths between `u` and `v`. With `Lu = N(u) ∪ N(N(v))` and
//! `Lv = N(v) ∪ N(N(u))`:
//!
//! | index   | score |
//! |---------|-------|
//! | CN      | `|C|` |
//! | Jaccard | `|C| / (|Lu| + |Lv|)` |
//! | CJC     | `|C| * LCL / (|Lu| + |Lv|)`, LCL = edges inside `C` |
//! | CRA     | `sum_{z in C} (edges from z into C) / deg(z)` |
//!
//! Katz sums odd-length walks only, the only ones that join a drug to a target.

use alloc::vec;
use alloc::vec::Vec;

use faer::linalg::solvers::Solve;
use faer::{Mat, Side as FaerSide};

use crate::error::{Error, Result};
use crate::interaction::InteractionMatrix;
use crate::matrix::DenseMatrix;
use crate::scoring::{Provenance, ScoreMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LocalIndex {
    CN,
    Jaccard,
    CJC,
    CRA,
}

impl LocalIndex {
    pub fn provenance(self) -> Provenance {
        match self {
            LocalIndex::CN => Provenance::CN,
            LocalIndex::Jaccard => Provenance::Jaccard,
            LocalIndex::CJC => Provenance::CJC,
            LocalIndex::CRA => Provenance::CRA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BaselineMethod {
    CN,
    Jaccard,
    Katz,
    CJC,
    CRA,
}

/// Baseline selection; `beta` only matters for Katz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineParams {
    pub method: BaselineMethod,
    pub beta: f64,
}

impl BaselineParams {
    pub fn validate(&self, a: &InteractionMatrix) -> Result<()> {
        if self.method == BaselineMethod::Katz {
            check_katz_beta(a, self.beta)?;
        }
        Ok(())
    }

    pub fn scores(&self, a: &InteractionMatrix) -> Result<ScoreMatrix> {
        let local = match self.method {
            BaselineMethod::Katz => return katz_scores(a, self.beta),
            BaselineMethod::CN => LocalIndex::CN,
            BaselineMethod::Jaccard => LocalIndex::Jaccard,
            BaselineMethod::CJC => LocalIndex::CJC,
            BaselineMethod::CRA => LocalIndex::CRA,
        };
        Ok(local_index_scores(a, local))
    }
}

/// Default Katz decay grid, searched on training folds.
pub const KATZ_BETA_GRID: [f64; 4] = [0.001, 0.005, 0.01, 0.05];

/// Fixed-width bitset over node indices.
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    #[inline]
    fn set(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    #[inline]
    fn has(&self, k: usize) -> bool {
        self.0[k / 64] >> (k % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Raw per-pair counts behind the four local indices.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct LocalCounts {
    pub cn: usize,
    pub union: usize,
    pub lcl: usize,
    pub cra: f64,
}

impl LocalCounts {
    fn score(&self, method: LocalIndex) -> f64 {
        let ratio = |num: f64| if self.union == 0 { 0.0 } else { num / self.union as f64 };
        match method {
            LocalIndex::CN => self.cn as f64,
            LocalIndex::Jaccard => ratio(self.cn as f64),
            LocalIndex::CJC => ratio((self.cn * self.lcl) as f64),
            LocalIndex::CRA => self.cra,
        }
    }
}

pub(crate) struct LocalIndexer {
    drug_nbrs: Vec<Vec<usize>>,
    target_nbrs: Vec<Vec<usize>>,
    /// N(N(d)) for every drug, as a set of drugs.
    drug_two_hop: Vec<Bits>,
    /// N(N(t)) for every target, as a set of targets.
    target_two_hop: Vec<Bits>,
    drug_two_hop_len: Vec<usize>,
    target_two_hop_len: Vec<usize>,
}

impl LocalIndexer {
    pub fn new(a: &InteractionMatrix) -> Self {
        let (m, n) = (a.n_drugs(), a.n_targets());
        let (drug_nbrs, target_nbrs) = a.adjacency_lists();
        let drug_two_hop: Vec<Bits> = drug_nbrs
            .iter()
            .map(|ts| {
                let mut b = Bits::new(m);
                ts.iter().flat_map(|&t| &target_nbrs[t]).for_each(|&d| b.set(d));
                b
            })
            .collect();
        let target_two_hop: Vec<Bits> = target_nbrs
            .iter()
            .map(|ds| {
                let mut b = Bits::new(n);
                ds.iter().flat_map(|&d| &drug_nbrs[d]).for_each(|&t| b.set(t));
                b
            })
            .collect();
        LocalIndexer {
            drug_two_hop_len: drug_two_hop.iter().map(Bits::count).collect(),
            target_two_hop_len: target_two_hop.iter().map(Bits::count).collect(),
            drug_nbrs,
            target_nbrs,
            drug_two_hop,
            target_two_hop,
        }
    }

    pub fn counts(&self, u: usize, v: usize) -> LocalCounts {
        let nnv = &self.target_two_hop[v];
        let nnu = &self.drug_two_hop[u];
        // target side of C: N(u) ∩ N(N(v)); drug side: N(v) ∩ N(N(u))
        let c_targets: Vec<usize> = self.drug_nbrs[u].iter().copied().filter(|&t| nnv.has(t)).collect();
        let c_drugs: Vec<usize> = self.target_nbrs[v].iter().copied().filter(|&d| nnu.has(d)).collect();
        let cn = c_targets.len() + c_drugs.len();
        // |N(u) ∪ N(N(v))| = |N(u)| + |N(N(v))| - |N(u) ∩ N(N(v))|, and symmetrically
        let lu = self.drug_nbrs[u].len() + self.target_two_hop_len[v] - c_targets.len();
        let lv = self.target_nbrs[v].len() + self.drug_two_hop_len[u] - c_drugs.len();
        let mut counts = LocalCounts {
            cn,
            union: lu + lv,
            ..LocalCounts::default()
        };
        if cn == 0 {
            return counts;
        }
        let mut in_c_targets = Bits::new(self.target_nbrs.len());
        c_targets.iter().for_each(|&t| in_c_targets.set(t));
        for &d in &c_drugs {
            let deg_d = self.drug_nbrs[d].len() as f64;
            for &t in &self.drug_nbrs[d] {
                if in_c_targets.has(t) {
                    counts.lcl += 1;
                    counts.cra += 1.0 / deg_d + 1.0 / self.target_nbrs[t].len() as f64;
                }
            }
        }
        counts
    }
}

pub fn local_index_scores(a: &InteractionMatrix, method: LocalIndex) -> ScoreMatrix {
    let indexer = LocalIndexer::new(a);
    let z = Mat::from_fn(a.n_drugs(), a.n_targets(), |u, v| indexer.counts(u, v).score(method));
    ScoreMatrix::new(
        DenseMatrix::from_mat(z).expect("local indices are finite"),
        method.provenance(),
    )
}

/// Largest `beta` allowed for `a`: the walk series converges iff `beta * sigma_max(A) < 1`.
pub fn katz_beta_limit(a: &InteractionMatrix) -> Result<f64> {
    let smax = a.matrix().singular_values()?.first().copied().unwrap_or(0.0);
    Ok(if smax == 0.0 { f64::INFINITY } else { 1.0 / smax })
}

fn check_katz_beta(a: &InteractionMatrix, beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidInput(alloc::format!("Katz decay must be positive, got {beta}")));
    }
    let limit = katz_beta_limit(a)?;
    if beta >= limit {
        return Err(Error::InvalidInput(alloc::format!(
            "Katz decay {beta} violates the convergence condition beta * sigma_max < 1 (limit {limit})"
        )));
    }
    Ok(())
}

/// `sum_{k>=1} beta^(2k-1) (A A^T)^(k-1) A = (I - beta^2 A A^T)^{-1} beta A`.
pub fn katz_scores(a: &InteractionMatrix, beta: f64) -> Result<ScoreMatrix> {
    check_katz_beta(a, beta)?;
    let am = a.matrix().as_mat();
    let m = am.nrows();
    let aat = am * am.transpose();
    let system = Mat::from_fn(m, m, |i, j| if i == j { 1.0 } else { 0.0 } - beta * beta * aat[(i, j)]);
    let chol = system
        .llt(FaerSide::Lower)
        .map_err(|e| Error::Numerical(alloc::format!("Katz system not positive definite: {e:?}")))?;
    let mut rhs = Mat::from_fn(m, am.ncols(), |i, j| beta * am[(i, j)]);
    chol.solve_in_place(rhs.as_mut());
    Ok(ScoreMatrix::new(DenseMatrix::from_mat(rhs)?, Provenance::Katz))
}

//! Binary interaction matrices, similarity matrices and dataset bundles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Which side of the bipartite graph an identifier or similarity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    Drug,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Drug => "drug",
            Side::Target => "target",
        })
    }
}

/// Drugs x targets 0/1 adjacency with identifier lists for both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    a: DenseMatrix,
    drug_ids: Vec<String>,
    target_ids: Vec<String>,
}

impl InteractionMatrix {
    pub fn new(a: DenseMatrix, drug_ids: Vec<String>, target_ids: Vec<String>) -> Result<Self> {
        if a.rows() != drug_ids.len() || a.cols() != target_ids.len() {
            return Err(Error::ShapeMismatch {
                expected: (drug_ids.len(), target_ids.len()),
                found: a.shape(),
            });
        }
        check_unique(&drug_ids, Side::Drug)?;
        check_unique(&target_ids, Side::Target)?;
        for (i, drug) in drug_ids.iter().enumerate() {
            for (j, target) in target_ids.iter().enumerate() {
                let v = a.get(i, j);
                if v != 0.0 && v != 1.0 {
                    return Err(Error::InvalidInput(alloc::format!(
                        "adjacency entry ({drug}, {target}) is {v}, expected 0 or 1"
                    )));
                }
            }
        }
        Ok(InteractionMatrix {
            a,
            drug_ids,
            target_ids,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn drug_ids(&self) -> &[String] {
        &self.drug_ids
    }

    pub fn target_ids(&self) -> &[String] {
        &self.target_ids
    }

    pub fn ids(&self, side: Side) -> &[String] {
        match side {
            Side::Drug => &self.drug_ids,
            Side::Target => &self.target_ids,
        }
    }

    pub fn n_drugs(&self) -> usize {
        self.a.rows()
    }

    pub fn n_targets(&self) -> usize {
        self.a.cols()
    }

    #[inline]
    pub fn contains(&self, drug: usize, target: usize) -> bool {
        self.a.get(drug, target) != 0.0
    }

    pub fn n_interactions(&self) -> usize {
        self.positives().len()
    }

    /// Fraction of ones in the matrix.
    pub fn density(&self) -> f64 {
        self.n_interactions() as f64 / (self.n_drugs() * self.n_targets()) as f64
    }

    /// Positive positions in row-major order.
    pub fn positives(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n_drugs() {
            for j in 0..self.n_targets() {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Copy with the given positions set to zero.
    pub fn with_cleared(&self, positions: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut a = self.a.clone().into_mat();
        for (i, j) in positions {
            a[(i, j)] = 0.0;
        }
        InteractionMatrix {
            a: DenseMatrix::from_mat(a).expect("clearing entries keeps the matrix finite"),
            drug_ids: self.drug_ids.clone(),
            target_ids: self.target_ids.clone(),
        }
    }

    /// Copy with whole rows (drugs) or columns (targets) zeroed.
    pub fn with_cleared_entities(&self, side: Side, indices: &[usize]) -> Self {
        let mut a = self.a.clone().into_mat();
        for &idx in indices {
            match side {
                Side::Drug => (0..self.n_targets()).for_each(|j| a[(idx, j)] = 0.0),
                Side::Target => (0..self.n_drugs()).for_each(|i| a[(i, idx)] = 0.0),
            }
        }
        InteractionMatrix {
            a: DenseMatrix::from_mat(a).expect("clearing entries keeps the matrix finite"),
            drug_ids: self.drug_ids.clone(),
            target_ids: self.target_ids.clone(),
        }
    }

    /// Reorders rows and columns: row `i` of the result is row `drug_order[i]` of `self`.
    pub fn permuted(&self, drug_order: &[usize], target_order: &[usize]) -> Result<Self> {
        let a = DenseMatrix::from_fn(drug_order.len(), target_order.len(), |i, j| {
            self.a.get(drug_order[i], target_order[j])
        })?;
        InteractionMatrix::new(
            a,
            drug_order.iter().map(|&i| self.drug_ids[i].clone()).collect(),
            target_order.iter().map(|&j| self.target_ids[j].clone()).collect(),
        )
    }

    /// Neighbour lists: targets of every drug, drugs of every target.
    pub fn adjacency_lists(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut by_drug = alloc::vec![Vec::new(); self.n_drugs()];
        let mut by_target = alloc::vec![Vec::new(); self.n_targets()];
        for (i, j) in self.positives() {
            by_drug[i].push(j);
            by_target[j].push(i);
        }
        (by_drug, by_target)
    }
}

/// Builds the 0/1 adjacency from an edge list over the given identifier lists.
///
/// Repeated edges collapse to a single interaction.
pub fn build_adjacency<D, T>(
    edges: &[(D, T)],
    drugs: &[impl AsRef<str>],
    targets: &[impl AsRef<str>],
) -> Result<InteractionMatrix>
where
    D: AsRef<str>,
    T: AsRef<str>,
{
    let drug_ids: Vec<String> = drugs.iter().map(|d| d.as_ref().to_string()).collect();
    let target_ids: Vec<String> = targets.iter().map(|t| t.as_ref().to_string()).collect();
    let drug_index = index_of(&drug_ids, Side::Drug)?;
    let target_index = index_of(&target_ids, Side::Target)?;
    let mut ones = BTreeSet::new();
    for (d, t) in edges {
        let i = *drug_index.get(d.as_ref()).ok_or_else(|| Error::UnknownId {
            side: Side::Drug,
            id: d.as_ref().to_string(),
        })?;
        let j = *target_index.get(t.as_ref()).ok_or_else(|| Error::UnknownId {
            side: Side::Target,
            id: t.as_ref().to_string(),
        })?;
        ones.insert((i, j));
    }
    let a = DenseMatrix::from_fn(drug_ids.len(), target_ids.len(), |i, j| {
        if ones.contains(&(i, j)) {
            1.0
        } else {
            0.0
        }
    })?;
    InteractionMatrix::new(a, drug_ids, target_ids)
}

fn index_of(ids: &[String], side: Side) -> Result<BTreeMap<&str, usize>> {
    let mut map = BTreeMap::new();
    for (k, id) in ids.iter().enumerate() {
        if map.insert(id.as_str(), k).is_some() {
            return Err(Error::DuplicateId {
                side,
                id: id.clone(),
            });
        }
    }
    Ok(map)
}

fn check_unique(ids: &[String], side: Side) -> Result<()> {
    index_of(ids, side).map(|_| ())
}

/// Square similarity over the drugs or the targets.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    s: DenseMatrix,
    ids: Vec<String>,
    side: Side,
}

impl SimilarityMatrix {
    pub fn new(s: DenseMatrix, ids: Vec<String>, side: Side) -> Result<Self> {
        if s.rows() != s.cols() || s.rows() != ids.len() {
            return Err(Error::ShapeMismatch {
                expected: (ids.len(), ids.len()),
                found: s.shape(),
            });
        }
        check_unique(&ids, side)?;
        Ok(SimilarityMatrix { s, ids, side })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.s
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Restricts to `order`, given as indices into the current identifiers.
    pub fn select(&self, order: &[usize]) -> Result<Self> {
        let s = DenseMatrix::from_fn(order.len(), order.len(), |i, j| self.s.get(order[i], order[j]))?;
        SimilarityMatrix::new(s, order.iter().map(|&i| self.ids[i].clone()).collect(), self.side)
    }
}

/// Dropped identifier counts produced by [`DatasetBundle::aligned`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AlignmentReport {
    pub drugs_dropped_from_interactions: usize,
    pub drugs_dropped_from_similarity: usize,
    pub targets_dropped_from_interactions: usize,
    pub targets_dropped_from_similarity: usize,
}

impl AlignmentReport {
    pub fn is_clean(&self) -> bool {
        *self == AlignmentReport::default()
    }
}

/// An interaction matrix plus optional side information, aligned by identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    interactions: InteractionMatrix,
    drug_sim: Option<SimilarityMatrix>,
    target_sim: Option<SimilarityMatrix>,
}

impl DatasetBundle {
    /// Strict constructor: similarity identifiers must equal the interaction
    /// identifiers, in the same order.
    pub fn new(
        name: impl Into<String>,
        interactions: InteractionMatrix,
        drug_sim: Option<SimilarityMatrix>,
        target_sim: Option<SimilarityMatrix>,
    ) -> Result<Self> {
        for (sim, side) in [(&drug_sim, Side::Drug), (&target_sim, Side::Target)] {
            if let Some(sim) = sim {
                if sim.side() != side {
                    return Err(Error::InvalidInput(alloc::format!(
                        "{} similarity supplied where a {side} similarity is expected",
                        sim.side()
                    )));
                }
                if sim.ids() != interactions.ids(side) {
                    return Err(Error::InvalidInput(alloc::format!(
                        "{side} similarity identifiers do not match the interaction matrix"
                    )));
                }
            }
        }
        Ok(DatasetBundle {
            name: name.into(),
            interactions,
            drug_sim,
            target_sim,
        })
    }

    /// Lenient constructor: keeps the identifiers present on both sides
    /// (interaction order wins) and reports what was dropped.
    pub fn aligned(
        name: impl Into<String>,
        interactions: InteractionMatrix,
        drug_sim: Option<SimilarityMatrix>,
        target_sim: Option<SimilarityMatrix>,
    ) -> Result<(Self, AlignmentReport)> {
        let mut report = AlignmentReport::default();
        let (drug_keep, drug_sim) = align_side(&interactions, drug_sim, Side::Drug, &mut report)?;
        let (target_keep, target_sim) = align_side(&interactions, target_sim, Side::Target, &mut report)?;
        let interactions = if drug_keep.len() == interactions.n_drugs()
            && target_keep.len() == interactions.n_targets()
        {
            interactions
        } else {
            interactions.permuted(&drug_keep, &target_keep)?
        };
        Ok((DatasetBundle::new(name, interactions, drug_sim, target_sim)?, report))
    }

    pub fn interactions(&self) -> &InteractionMatrix {
        &self.interactions
    }

    pub fn drug_sim(&self) -> Option<&SimilarityMatrix> {
        self.drug_sim.as_ref()
    }

    pub fn target_sim(&self) -> Option<&SimilarityMatrix> {
        self.target_sim.as_ref()
    }

    pub fn similarity(&self, side: Side) -> Option<&SimilarityMatrix> {
        match side {
            Side::Drug => self.drug_sim(),
            Side::Target => self.target_sim(),
        }
    }

    /// Same bundle with identifiers sorted lexicographically on both axes.
    pub fn canonicalized(&self) -> Result<Self> {
        let order = |ids: &[String]| {
            let mut idx: Vec<usize> = (0..ids.len()).collect();
            idx.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
            idx
        };
        let d = order(self.interactions.drug_ids());
        let t = order(self.interactions.target_ids());
        DatasetBundle::new(
            self.name.clone(),
            self.interactions.permuted(&d, &t)?,
            self.drug_sim.as_ref().map(|s| s.select(&d)).transpose()?,
            self.target_sim.as_ref().map(|s| s.select(&t)).transpose()?,
        )
    }
}

fn align_side(
    interactions: &InteractionMatrix,
    sim: Option<SimilarityMatrix>,
    side: Side,
    report: &mut AlignmentReport,
) -> Result<(Vec<usize>, Option<SimilarityMatrix>)> {
    let ids = interactions.ids(side);
    let Some(sim) = sim else {
        return Ok(((0..ids.len()).collect(), None));
    };
    if sim.side() != side {
        return Err(Error::InvalidInput(alloc::format!(
            "{} similarity supplied where a {side} similarity is expected",
            sim.side()
        )));
    }
    let sim_index = index_of(sim.ids(), side)?;
    let mut keep = Vec::new();
    let mut sim_order = Vec::new();
    for (k, id) in ids.iter().enumerate() {
        if let Some(&s) = sim_index.get(id.as_str()) {
            keep.push(k);
            sim_order.push(s);
        }
    }
    let dropped_inter = ids.len() - keep.len();
    let dropped_sim = sim.ids().len() - sim_order.len();
    match side {
        Side::Drug => {
            report.drugs_dropped_from_interactions = dropped_inter;
            report.drugs_dropped_from_similarity = dropped_sim;
        }
        Side::Target => {
            report.targets_dropped_from_interactions = dropped_inter;
            report.targets_dropped_from_similarity = dropped_sim;
        }
    }
    if keep.is_empty() {
        return Err(Error::InvalidInput(alloc::format!(
            "{side} similarity shares no identifiers with the interaction matrix"
        )));
    }
    let sim = if dropped_sim == 0 && sim_order.iter().enumerate().all(|(a, &b)| a == b) {
        sim
    } else {
        sim.select(&sim_order)?
    };
    Ok((keep, Some(sim)))
}

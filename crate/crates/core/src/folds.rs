//! Seeded k-fold partitions in three hold-out manners.
//!
//! * [`HoldoutMode::Pair`]: known interactions are split into `k` sets. A
//!   fold's candidates are every pair that is zero in its training matrix,
//!   i.e. the held-out positives plus all never-observed pairs.
//! * [`HoldoutMode::Drug`] / [`HoldoutMode::Target`]: whole drugs (rows) or
//!   targets (columns) are split. Training zeroes the held-out rows/columns and
//!   the candidates are every pair touching a held-out entity.
//!
//! Repetition `r` shuffles with seed `seed + r`.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interaction::{DatasetBundle, InteractionMatrix, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HoldoutMode {
    Pair,
    Drug,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldPlan {
    pub mode: HoldoutMode,
    pub k: usize,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for FoldPlan {
    fn default() -> Self {
        FoldPlan {
            mode: HoldoutMode::Pair,
            k: 10,
            repetitions: 5,
            seed: 42,
        }
    }
}

/// What a fold holds out, as indices into the full interaction matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeldOut {
    Pairs(Vec<(usize, usize)>),
    Entities(Side, Vec<usize>),
}

/// A fold described by indices only; [`FoldSpec::materialize`] builds the matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSpec {
    pub repetition: usize,
    pub index: usize,
    pub held_out: HeldOut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fold {
    pub repetition: usize,
    pub index: usize,
    pub train: InteractionMatrix,
    /// Held-out known interactions.
    pub test_positives: Vec<(usize, usize)>,
    /// Pairs to score, in row-major order.
    pub candidates: Vec<(usize, usize)>,
}

impl FoldPlan {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.repetitions < 1 {
            return Err(Error::InvalidConfig(alloc::format!(
                "fold plan needs k >= 2 and repetitions >= 1, got k={} repetitions={}",
                self.k,
                self.repetitions
            )));
        }
        Ok(())
    }

    /// Fold specs for every repetition, ordered by (repetition, fold).
    pub fn specs(&self, a: &InteractionMatrix) -> Result<Vec<FoldSpec>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.k * self.repetitions);
        for r in 0..self.repetitions {
            out.extend(self.specs_for_repetition(a, r)?);
        }
        Ok(out)
    }

    pub fn specs_for_repetition(&self, a: &InteractionMatrix, repetition: usize) -> Result<Vec<FoldSpec>> {
        self.validate()?;
        let seed = self.seed.wrapping_add(repetition as u64);
        let folds = match self.mode {
            HoldoutMode::Pair => {
                let positives = a.positives();
                partition(positives.len(), self.k, seed, "known interactions")?
                    .into_iter()
                    .map(|idx| HeldOut::Pairs(idx.into_iter().map(|p| positives[p]).collect()))
                    .collect::<Vec<_>>()
            }
            HoldoutMode::Drug => partition(a.n_drugs(), self.k, seed, "drugs")?
                .into_iter()
                .map(|idx| HeldOut::Entities(Side::Drug, idx))
                .collect(),
            HoldoutMode::Target => partition(a.n_targets(), self.k, seed, "targets")?
                .into_iter()
                .map(|idx| HeldOut::Entities(Side::Target, idx))
                .collect(),
        };
        Ok(folds
            .into_iter()
            .enumerate()
            .map(|(index, held_out)| FoldSpec {
                repetition,
                index,
                held_out,
            })
            .collect())
    }
}

/// Shuffles `0..units` and deals them round-robin into `k` sorted groups.
pub(crate) fn partition(units: usize, k: usize, seed: u64, what: &str) -> Result<Vec<Vec<usize>>> {
    if k > units {
        return Err(Error::InvalidInput(alloc::format!(
            "cannot split {units} {what} into {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..units).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut groups = alloc::vec![Vec::with_capacity(units / k + 1); k];
    for (pos, unit) in order.into_iter().enumerate() {
        groups[pos % k].push(unit);
    }
    groups.iter_mut().for_each(|g| g.sort_unstable());
    Ok(groups)
}

impl FoldSpec {
    pub fn train(&self, full: &InteractionMatrix) -> InteractionMatrix {
        match &self.held_out {
            HeldOut::Pairs(pairs) => full.with_cleared(pairs.iter().copied()),
            HeldOut::Entities(side, idx) => full.with_cleared_entities(*side, idx),
        }
    }

    /// Candidate pairs given this fold's training matrix.
    pub fn candidates(&self, train: &InteractionMatrix) -> Vec<(usize, usize)> {
        let (m, n) = (train.n_drugs(), train.n_targets());
        match &self.held_out {
            HeldOut::Pairs(_) => (0..m)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !train.contains(i, j))
                .collect(),
            HeldOut::Entities(Side::Drug, rows) => {
                rows.iter().flat_map(|&i| (0..n).map(move |j| (i, j))).collect()
            }
            HeldOut::Entities(Side::Target, cols) => {
                let mut out: Vec<(usize, usize)> =
                    cols.iter().flat_map(|&j| (0..m).map(move |i| (i, j))).collect();
                out.sort_unstable();
                out
            }
        }
    }

    pub fn test_positives(&self, full: &InteractionMatrix) -> Vec<(usize, usize)> {
        match &self.held_out {
            HeldOut::Pairs(pairs) => pairs.clone(),
            HeldOut::Entities(..) => {
                let train = self.train(full);
                self.candidates(&train)
                    .into_iter()
                    .filter(|&(i, j)| full.contains(i, j))
                    .collect()
            }
        }
    }

    pub fn materialize(&self, full: &InteractionMatrix) -> Fold {
        let train = self.train(full);
        let mut test_positives = self.test_positives(full);
        test_positives.sort_unstable();
        Fold {
            repetition: self.repetition,
            index: self.index,
            candidates: self.candidates(&train),
            test_positives,
            train,
        }
    }
}

/// All folds of `plan`, materialized.
pub fn make_folds(bundle: &DatasetBundle, plan: &FoldPlan) -> Result<Vec<Fold>> {
    let a = bundle.interactions();
    Ok(plan.specs(a)?.iter().map(|s| s.materialize(a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_sizes_are_balanced() {
        let groups = partition(90, 10, 1, "x").unwrap();
        assert!(groups.iter().all(|g| g.len() == 9));
        let groups = partition(23, 4, 1, "x").unwrap();
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 23);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn too_many_folds() {
        assert!(matches!(partition(3, 5, 0, "drugs"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn plan_validation() {
        let bad = FoldPlan {
            k: 1,
            ..FoldPlan::default()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let bad = FoldPlan {
            repetitions: 0,
            ..FoldPlan::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn seeds_change_partition() {
        assert_eq!(partition(50, 5, 1, "x").unwrap(), partition(50, 5, 1, "x").unwrap());
        assert_ne!(partition(50, 5, 1, "x").unwrap(), partition(50, 5, 2, "x").unwrap());
    }
}

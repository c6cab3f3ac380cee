//! Ranking metrics over `(score, label)` candidates.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Area under the ROC curve.
///
/// Computed as the probability that a random positive outscores a random
/// negative, with ties worth one half; equal to the trapezoidal ROC area.
pub fn auc(scored: &[(f64, bool)]) -> Result<f64> {
    let positives = scored.iter().filter(|(_, l)| *l).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedMetric(alloc::format!(
            "AUC needs both classes, got {positives} positives and {negatives} negatives"
        )));
    }
    let sorted = sorted_ascending(scored);
    let mut negatives_below = 0usize;
    let mut credit = 0.0f64;
    for block in tie_blocks(&sorted) {
        let pos = block.iter().filter(|(_, l)| *l).count();
        let neg = block.len() - pos;
        credit += pos as f64 * (negatives_below as f64 + 0.5 * neg as f64);
        negatives_below += neg;
    }
    Ok(credit / (positives as f64 * negatives as f64))
}

/// Area under the precision-recall curve, step-wise.
///
/// Thresholds are swept from the highest score down; tied scores enter as a
/// single block. The area is `sum (R_i - R_{i-1}) * P_i` with no
/// interpolation between points.
pub fn aupr(scored: &[(f64, bool)]) -> Result<f64> {
    let positives = scored.iter().filter(|(_, l)| *l).count();
    if positives == 0 {
        return Err(Error::UndefinedMetric("AUPR needs at least one positive".into()));
    }
    let mut sorted = sorted_ascending(scored);
    sorted.reverse();
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    for block in tie_blocks(&sorted) {
        tp += block.iter().filter(|(_, l)| *l).count();
        seen += block.len();
        let recall = tp as f64 / positives as f64;
        let precision = tp as f64 / seen as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(area)
}

fn sorted_ascending(scored: &[(f64, bool)]) -> Vec<(f64, bool)> {
    let mut v = scored.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

fn tie_blocks(sorted: &[(f64, bool)]) -> impl Iterator<Item = &[(f64, bool)]> {
    sorted.chunk_by(|a, b| a.0 == b.0)
}

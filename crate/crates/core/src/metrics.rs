//! Solution quality measures.

use alloc::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::maximize::Solution;

/// Bigram overlap scores. All three are zero for degenerate inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rouge2 {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl Rouge2 {
    const ZERO: Self = Self {
        recall: 0.0,
        precision: 0.0,
        f1: 0.0,
    };
}

fn bigrams<T: Ord>(tokens: &[T]) -> BTreeMap<(&T, &T), usize> {
    let mut counts = BTreeMap::new();
    for pair in tokens.windows(2) {
        *counts.entry((&pair[0], &pair[1])).or_insert(0) += 1;
    }
    counts
}

/// ROUGE-2 of `candidate` against `reference` with clipped bigram counts.
///
/// Zero when the reference has fewer than two tokens.
pub fn rouge2<T: Ord>(candidate: &[T], reference: &[T]) -> Rouge2 {
    if reference.len() < 2 {
        return Rouge2::ZERO;
    }
    let reference_counts = bigrams(reference);
    let candidate_counts = bigrams(candidate);
    let overlap: usize = candidate_counts
        .iter()
        .map(|(bigram, &c)| c.min(reference_counts.get(bigram).copied().unwrap_or(0)))
        .sum();
    let recall = overlap as f64 / (reference.len() - 1) as f64;
    let precision = if candidate.len() < 2 {
        0.0
    } else {
        overlap as f64 / (candidate.len() - 1) as f64
    };
    let f1 = if overlap == 0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Rouge2 {
        recall,
        precision,
        f1,
    }
}

/// `sol.value / baseline.value`; `None` when the baseline value is zero.
pub fn relative_utility(sol: &Solution, baseline: &Solution) -> Option<f64> {
    ratio(sol.value, baseline.value)
}

/// `value / baseline`; `None` when `baseline` is zero or either is not finite.
pub fn ratio(value: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0 && value.is_finite() && baseline.is_finite()).then(|| value / baseline)
}

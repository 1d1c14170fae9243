use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Solution;
use crate::clock::Stopwatch;
use crate::objective::{check_set, Objective};
use crate::{ElementId, Result};

/// Heap entry: a (possibly stale) upper bound on an element's gain.
#[derive(Debug, Clone, Copy)]
struct Bound {
    gain: f64,
    id: ElementId,
    /// `|S|` at the time `gain` was computed.
    stamp: usize,
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bound {}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    // Max-heap on gain; among equal gains the smaller id is "greater".
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Lazy (accelerated) greedy. Produces the same selection sequence as
/// [`greedy`](super::greedy) while re-evaluating only the elements that reach
/// the top of the bound heap with a stale bound.
pub fn lazy_greedy(objective: &Objective, ground: &[ElementId], k: usize) -> Result<Solution> {
    check_set(ground, objective.n_elements())?;
    let clock = Stopwatch::start();
    let constant = objective.has_constant_gains();

    let mut ctx = objective.context();
    let budget = k.min(ground.len());
    let initial = if budget == 0 { &[][..] } else { ground };
    let mut evals = initial.len() as u64;
    let mut heap: BinaryHeap<Bound> = initial
        .iter()
        .map(|&id| Bound {
            gain: ctx.gain_unchecked(id),
            id,
            stamp: 0,
        })
        .collect();

    let mut step_gains = Vec::with_capacity(budget);
    while ctx.len() < budget {
        let Some(top) = heap.pop() else { break };
        if constant || top.stamp == ctx.len() {
            if top.gain <= 0.0 {
                break;
            }
            ctx.commit(top.id)?;
            step_gains.push(top.gain);
        } else {
            evals += 1;
            heap.push(Bound {
                gain: ctx.gain_unchecked(top.id),
                id: top.id,
                stamp: ctx.len(),
            });
        }
    }

    Ok(Solution {
        algorithm: "lazy_greedy".into(),
        k,
        selected: ctx.selected().to_vec(),
        value: ctx.value(),
        step_gains,
        wall_time_s: clock.seconds(),
        evals_used: evals,
    })
}

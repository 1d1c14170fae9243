use alloc::vec::Vec;

use super::Solution;
use crate::clock::Stopwatch;
use crate::objective::{check_set, Objective};
use crate::{ElementId, Result};

/// Standard greedy: `k` rounds, each adding the element of largest marginal
/// gain (smallest id on ties). Stops early once the best gain is `≤ 0`.
pub fn greedy(objective: &Objective, ground: &[ElementId], k: usize) -> Result<Solution> {
    check_set(ground, objective.n_elements())?;
    let clock = Stopwatch::start();
    let mut remaining: Vec<ElementId> = ground.to_vec();
    remaining.sort_unstable();

    let mut ctx = objective.context();
    let mut step_gains = Vec::with_capacity(k.min(remaining.len()));
    let mut evals = 0u64;
    for _ in 0..k.min(remaining.len()) {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in remaining.iter().enumerate() {
            let gain = ctx.gain_unchecked(v);
            evals += 1;
            // `remaining` is ascending, so strict `>` keeps the smallest id.
            if best.map_or(true, |(_, b)| gain > b) {
                best = Some((i, gain));
            }
        }
        let Some((i, gain)) = best else { break };
        if gain <= 0.0 {
            break;
        }
        let v = remaining.remove(i);
        ctx.commit(v)?;
        step_gains.push(gain);
    }

    Ok(Solution {
        algorithm: "greedy".into(),
        k,
        selected: ctx.selected().to_vec(),
        value: ctx.value(),
        step_gains,
        wall_time_s: clock.seconds(),
        evals_used: evals,
    })
}

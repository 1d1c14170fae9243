use alloc::vec::Vec;

use super::Solution;
use crate::clock::Stopwatch;
use crate::objective::{check_set, SetFunction};
use crate::{ElementId, Error, Result};

pub const MAX_BRUTE_FORCE_ELEMENTS: usize = 20;

/// Exact optimum over all subsets of `ground` with at most `k` elements.
/// Ties go to the lexicographically smallest sorted id list.
pub fn brute_force_max<F>(f: &F, ground: &[ElementId], k: usize) -> Result<Solution>
where
    F: SetFunction + ?Sized,
{
    if ground.len() > MAX_BRUTE_FORCE_ELEMENTS {
        return Err(Error::TooLarge {
            what: "brute-force maximization",
            n: ground.len(),
            limit: MAX_BRUTE_FORCE_ELEMENTS,
        });
    }
    check_set(ground, f.ground_size())?;
    let clock = Stopwatch::start();
    let mut sorted = ground.to_vec();
    sorted.sort_unstable();
    let m = sorted.len();

    let mut best: Vec<ElementId> = Vec::new();
    let mut best_value = f.value_of(&[]);
    let mut evals = 1u64;
    let mut subset = Vec::with_capacity(m);
    for mask in 1usize..1 << m {
        if mask.count_ones() as usize > k {
            continue;
        }
        subset.clear();
        subset.extend((0..m).filter(|&i| mask & (1 << i) != 0).map(|i| sorted[i]));
        let value = f.value_of(&subset);
        evals += 1;
        if value > best_value || (value == best_value && subset < best) {
            best_value = value;
            best.clone_from(&subset);
        }
    }

    let mut step_gains = Vec::with_capacity(best.len());
    let mut prev = 0.0;
    for i in 1..=best.len() {
        let v = f.value_of(&best[..i]);
        step_gains.push(v - prev);
        prev = v;
    }

    Ok(Solution {
        algorithm: "brute_force".into(),
        k,
        selected: best,
        value: best_value,
        step_gains,
        wall_time_s: clock.seconds(),
        evals_used: evals,
    })
}

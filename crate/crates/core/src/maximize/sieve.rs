use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Solution;
use crate::clock::Stopwatch;
use crate::math::{ceil, exp, floor, ln};
use crate::objective::{check_element, check_set, GainContext, Objective};
use crate::{ElementId, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Number of thresholds kept alive; each holds at most `k` elements.
    pub n_thresholds: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self { n_thresholds: 50 }
    }
}

struct Candidate<'a> {
    /// Threshold is `exp(index * log_ratio)`.
    index: i64,
    ctx: GainContext<'a>,
    gains: Vec<f64>,
}

/// One-pass sieve-streaming over a geometric threshold lattice.
///
/// The lattice ratio `1 + ε'` is fixed so that `n_thresholds` consecutive
/// lattice points span `[m, 2km]`, with `m` the largest singleton value seen so
/// far. When `m` grows, thresholds that fall below `m` are dropped along with
/// their candidate sets and new (empty) ones are opened at the top.
pub struct Sieve<'a> {
    objective: &'a Objective,
    k: usize,
    n_thresholds: usize,
    log_ratio: f64,
    max_singleton: f64,
    candidates: Vec<Candidate<'a>>,
    seen: Vec<bool>,
    evals: u64,
    peak_retained: usize,
    clock: Stopwatch,
}

impl<'a> Sieve<'a> {
    pub fn new(objective: &'a Objective, k: usize, cfg: SieveConfig) -> Result<Self> {
        if cfg.n_thresholds == 0 {
            return Err(Error::InvalidConfig(
                "sieve needs at least one threshold".into(),
            ));
        }
        let span = ln(2.0 * k.max(1) as f64);
        let log_ratio = if cfg.n_thresholds > 1 {
            span / (cfg.n_thresholds - 1) as f64
        } else {
            span
        };
        Ok(Self {
            objective,
            k,
            n_thresholds: cfg.n_thresholds,
            log_ratio,
            max_singleton: 0.0,
            candidates: Vec::new(),
            seen: alloc::vec![false; objective.n_elements()],
            evals: 0,
            peak_retained: 0,
            clock: Stopwatch::start(),
        })
    }

    /// Element ids currently held across all candidate sets.
    pub fn retained(&self) -> usize {
        self.candidates.iter().map(|c| c.ctx.len()).sum()
    }

    /// Largest value [`retained`](Self::retained) has reached.
    pub fn peak_retained(&self) -> usize {
        self.peak_retained
    }

    pub fn thresholds(&self) -> impl Iterator<Item = f64> + '_ {
        self.candidates
            .iter()
            .map(|c| exp(c.index as f64 * self.log_ratio))
    }

    pub fn push(&mut self, v: ElementId) -> Result<()> {
        check_element(v, self.seen.len())?;
        if self.seen[v] {
            return Err(Error::DuplicateElement(v));
        }
        self.seen[v] = true;
        if self.k == 0 {
            return Ok(());
        }

        let single = self.objective.singleton(v);
        self.evals += 1;
        if single > self.max_singleton {
            self.max_singleton = single;
            self.rebuild_lattice();
        }

        let k = self.k;
        for cand in &mut self.candidates {
            let size = cand.ctx.len();
            if size >= k {
                continue;
            }
            let threshold = exp(cand.index as f64 * self.log_ratio);
            let gain = cand.ctx.gain_unchecked(v);
            self.evals += 1;
            if gain >= (threshold / 2.0 - cand.ctx.value()) / (k - size) as f64 {
                cand.ctx.commit(v)?;
                cand.gains.push(gain);
            }
        }
        self.peak_retained = self.peak_retained.max(self.retained());
        Ok(())
    }

    fn rebuild_lattice(&mut self) {
        let m = self.max_singleton;
        let lo = ceil(ln(m) / self.log_ratio - 1e-9) as i64;
        let hi = floor(ln(2.0 * self.k as f64 * m) / self.log_ratio + 1e-9) as i64;
        let hi = hi.min(lo + self.n_thresholds as i64 - 1);
        self.candidates.retain(|c| c.index >= lo && c.index <= hi);
        let first_new = self.candidates.last().map_or(lo, |c| c.index + 1);
        for index in first_new..=hi {
            self.candidates.push(Candidate {
                index,
                ctx: self.objective.context(),
                gains: Vec::new(),
            });
        }
    }

    /// The best candidate set seen among the live thresholds.
    pub fn finish(self) -> Solution {
        let mut sol = Solution::empty("sieve_streaming", self.k);
        let best = self
            .candidates
            .iter()
            .fold(None::<&Candidate>, |best, c| match best {
                Some(b) if b.ctx.value() >= c.ctx.value() => Some(b),
                _ => Some(c),
            });
        if let Some(best) = best {
            sol.selected = best.ctx.selected().to_vec();
            sol.value = best.ctx.value();
            sol.step_gains = best.gains.clone();
        }
        sol.evals_used = self.evals;
        sol.wall_time_s = self.clock.seconds();
        sol
    }
}

/// Runs [`Sieve`] over `stream` in order.
pub fn sieve_streaming(
    objective: &Objective,
    stream: &[ElementId],
    k: usize,
    cfg: SieveConfig,
) -> Result<Solution> {
    check_set(stream, objective.n_elements())?;
    let mut sieve = Sieve::new(objective, k, cfg)?;
    for &v in stream {
        sieve.push(v)?;
    }
    Ok(sieve.finish())
}

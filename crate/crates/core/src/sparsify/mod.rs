//! Randomized ground-set reduction.
//!
//! [`sparsify`] repeatedly samples a probe set `U` of `⌈r·log₂ n⌉` elements,
//! keeps it, and discards the `⌊(1 − 1/√c)·|V|⌋` remaining elements that `U`
//! represents best (smallest divergence `w_{U,v}`). `n` is the ground-set size
//! when the loop starts and never changes; the loop runs while
//! `|V| > r·log₂ n`, and whatever is left joins the output.
//!
//! Three optional refinements wrap the loop: [`pre_prune`] before it,
//! importance sampling of `U` inside it, and [`post_reduce`] after it.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{compute_global_gains, GlobalGains, GraphWeights, SparsificationInstance};
use crate::math::{ceil, floor, log2, sqrt};
use crate::maximize::DoubleGreedyMode;
use crate::objective::{check_set, Objective};
use crate::{ElementId, Error, Result};

/// Largest `V′` [`post_reduce`] accepts; it evaluates `|V′|²` edge weights.
pub const MAX_POST_REDUCE_ELEMENTS: usize = 5000;

/// Importance weights are floored at this fraction of the largest score.
const IMPORTANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    #[default]
    Uniform,
    /// Probability proportional to `f({u}) + f(u | V∖u)`.
    Importance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SparsifierConfig {
    pub r: f64,
    pub c: f64,
    pub seed: u64,
    pub sampling: Sampling,
    /// Budget `k` for [`pre_prune`]; `None` skips it.
    pub pre_prune_k: Option<usize>,
    /// `ε` for [`post_reduce`]; `None` skips it.
    pub post_reduce: Option<f64>,
}

impl Default for SparsifierConfig {
    fn default() -> Self {
        Self {
            r: 8.0,
            c: 8.0,
            seed: 0,
            sampling: Sampling::Uniform,
            pre_prune_k: None,
            post_reduce: None,
        }
    }
}

impl SparsifierConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "r must be positive, got {}",
                self.r
            )));
        }
        if !(self.c.is_finite() && self.c > 1.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "c must exceed 1, got {}",
                self.c
            )));
        }
        if self.pre_prune_k == Some(0) {
            return Err(Error::InvalidConfig(
                "pre-prune budget must be positive".into(),
            ));
        }
        if self.post_reduce.is_some_and(f64::is_nan) {
            return Err(Error::InvalidConfig(
                "post-reduce epsilon must not be NaN".into(),
            ));
        }
        Ok(())
    }

    /// Fraction of the non-sampled elements removed per round, `1 − 1/√c`.
    pub fn removal_fraction(&self) -> f64 {
        1.0 - 1.0 / sqrt(self.c)
    }
}

/// One round of the pruning loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneIteration {
    /// `|V|` at the start of the round.
    pub size_before: usize,
    pub sample_size: usize,
    /// Probe set `U`, in draw order.
    pub sampled: Vec<ElementId>,
    pub removed_count: usize,
    /// `|V|` after removing `U` and the pruned elements.
    pub kept_size: usize,
    /// Largest divergence among removed elements.
    pub max_removed_divergence: Option<f64>,
    /// Smallest divergence among surviving non-sampled elements.
    pub min_kept_divergence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneTrace {
    pub config: SparsifierConfig,
    pub input_size: usize,
    /// Ground-set size after [`pre_prune`], when it ran.
    pub pre_pruned_size: Option<usize>,
    /// The frozen `n` of the loop.
    pub n: usize,
    pub iterations: Vec<PruneIteration>,
    /// `|V′|` when the loop finishes, before [`post_reduce`].
    pub loop_output_size: usize,
    pub final_vprime: Vec<ElementId>,
    /// Edge weights evaluated by the loop, `Σ |U|·|V∖U|`.
    pub total_weight_evals: u64,
}

/// Reduces `ground` to `V′` per `cfg`. Output is ascending and deterministic
/// given `cfg.seed`.
pub fn sparsify(
    objective: &Objective,
    ground: &[ElementId],
    cfg: &SparsifierConfig,
) -> Result<(Vec<ElementId>, PruneTrace)> {
    cfg.validate()?;
    if ground.is_empty() {
        return Err(Error::Empty("ground set"));
    }
    check_set(ground, objective.n_elements())?;
    let mut v: Vec<ElementId> = ground.to_vec();
    v.sort_unstable();
    let globals = compute_global_gains(objective, &v)?;

    let mut pre_pruned_size = None;
    if let Some(k) = cfg.pre_prune_k {
        v = prune_below_threshold(objective, &globals, &v, k);
        pre_pruned_size = Some(v.len());
    }

    let weights = GraphWeights::from_globals(objective, globals);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = v.len();
    let budget = if n > 1 {
        cfg.r * log2(n as f64)
    } else {
        f64::INFINITY
    };
    let sample_target = if budget.is_finite() {
        ceil(budget) as usize
    } else {
        0
    };
    let keep_fraction = cfg.removal_fraction();

    let mut vprime: Vec<ElementId> = Vec::new();
    let mut iterations = Vec::new();
    let mut total_weight_evals = 0u64;
    while (v.len() as f64) > budget {
        let size_before = v.len();
        let s = sample_target.min(size_before);
        let sampled = match cfg.sampling {
            Sampling::Uniform => uniform_draw(&mut rng, &v, s),
            Sampling::Importance => importance_draw(&mut rng, &v, objective, weights.globals(), s),
        };
        let mut in_sample = sampled.clone();
        in_sample.sort_unstable();
        v.retain(|x| in_sample.binary_search(x).is_err());
        vprime.extend_from_slice(&in_sample);

        let rest = v.len();
        let remove = floor(keep_fraction * rest as f64) as usize;
        let mut max_removed = None;
        let mut min_kept = None;
        if rest > 0 {
            total_weight_evals += (s * rest) as u64;
            let div = weights.divergences_unchecked(&sampled, &v);
            let mut order: Vec<usize> = (0..rest).collect();
            let by_divergence =
                |a: &usize, b: &usize| div[*a].total_cmp(&div[*b]).then(v[*a].cmp(&v[*b]));
            if remove < rest {
                order.select_nth_unstable_by(remove, by_divergence);
                min_kept = Some(div[order[remove]]);
            }
            let mut drop = vec![false; rest];
            for &i in &order[..remove] {
                drop[i] = true;
            }
            max_removed = order[..remove].iter().map(|&i| div[i]).reduce(f64::max);
            let mut i = 0;
            v.retain(|_| {
                let keep = !drop[i];
                i += 1;
                keep
            });
        }
        iterations.push(PruneIteration {
            size_before,
            sample_size: s,
            sampled,
            removed_count: remove,
            kept_size: v.len(),
            max_removed_divergence: max_removed,
            min_kept_divergence: min_kept,
        });
    }
    vprime.extend_from_slice(&v);
    vprime.sort_unstable();
    let loop_output_size = vprime.len();

    if let Some(eps) = cfg.post_reduce {
        vprime = post_reduce(objective, &vprime, eps, cfg.seed)?;
    }

    let trace = PruneTrace {
        config: cfg.clone(),
        input_size: ground.len(),
        pre_pruned_size,
        n,
        iterations,
        loop_output_size,
        final_vprime: vprime.clone(),
        total_weight_evals,
    };
    Ok((vprime, trace))
}

/// Drops every `u` whose singleton value is below the `k`-th largest
/// `f(v | V∖v)`. Such elements can never be a greedy pick under budget `k`.
/// Returns `ground` (sorted) unchanged when `k > |ground|`.
pub fn pre_prune(objective: &Objective, ground: &[ElementId], k: usize) -> Result<Vec<ElementId>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "pre-prune budget must be positive".into(),
        ));
    }
    if ground.is_empty() {
        return Err(Error::Empty("ground set"));
    }
    check_set(ground, objective.n_elements())?;
    let mut v = ground.to_vec();
    v.sort_unstable();
    let globals = compute_global_gains(objective, &v)?;
    Ok(prune_below_threshold(objective, &globals, &v, k))
}

fn prune_below_threshold(
    objective: &Objective,
    globals: &GlobalGains,
    v: &[ElementId],
    k: usize,
) -> Vec<ElementId> {
    if k > v.len() {
        return v.to_vec();
    }
    let mut g: Vec<f64> = v.iter().map(|&u| globals[u]).collect();
    g.sort_unstable_by(|a, b| b.total_cmp(a));
    let tau = g[k - 1];
    // The k largest global gains pass on their own, so at least k survive
    // even when f({u}) and f(u | V∖u) differ by rounding.
    v.iter()
        .copied()
        .filter(|&u| objective.singleton(u) >= tau || globals[u] >= tau)
        .collect()
}

/// `s` distinct elements of `ground` drawn one at a time with probability
/// proportional to `max(f({u}) + f(u | V∖u), floor)`. Falls back to uniform
/// sampling when no score is positive.
pub fn importance_sample(
    ground: &[ElementId],
    globals: &GlobalGains,
    objective: &Objective,
    s: usize,
    seed: u64,
) -> Result<Vec<ElementId>> {
    if s > ground.len() {
        return Err(Error::InvalidConfig(alloc::format!(
            "sample size {s} exceeds ground set size {}",
            ground.len()
        )));
    }
    check_set(ground, objective.n_elements())?;
    if let Some(&id) = ground.iter().find(|&&u| !globals.contains(u)) {
        return Err(Error::InvalidElement {
            id,
            n: objective.n_elements(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(importance_draw(&mut rng, ground, objective, globals, s))
}

/// Partial Fisher–Yates: the first `s` slots of a shuffled copy.
fn uniform_draw(rng: &mut ChaCha8Rng, pool: &[ElementId], s: usize) -> Vec<ElementId> {
    let mut items = pool.to_vec();
    for i in 0..s {
        let j = rng.gen_range(i..items.len());
        items.swap(i, j);
    }
    items.truncate(s);
    items
}

fn importance_draw(
    rng: &mut ChaCha8Rng,
    pool: &[ElementId],
    objective: &Objective,
    globals: &GlobalGains,
    s: usize,
) -> Vec<ElementId> {
    let scores: Vec<f64> = pool
        .iter()
        .map(|&u| objective.singleton(u) + globals[u])
        .collect();
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(top > 0.0 && top.is_finite()) {
        return uniform_draw(rng, pool, s);
    }
    let floor_weight = IMPORTANCE_FLOOR * top;
    let mut weights: Vec<f64> = scores.iter().map(|&x| x.max(floor_weight)).collect();
    let mut out = Vec::with_capacity(s);
    for _ in 0..s {
        let total: f64 = weights.iter().sum();
        let mut target = rng.gen::<f64>() * total;
        let mut pick = None;
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            pick = Some(i);
            if target < w {
                break;
            }
            target -= w;
        }
        // Rounding can exhaust `target` past the end; the last live entry wins.
        let i = pick.expect("fewer live elements than draws");
        weights[i] = 0.0;
        out.push(pool[i]);
    }
    out
}

/// Keeps a subset `V″ ⊆ V′` such that every dropped `v` has `w_{V″,v} ≤ ε`,
/// using randomized double greedy on the pruning objective over `V′`.
/// Global gains are taken with respect to `V′`. Output is ascending.
pub fn post_reduce(
    objective: &Objective,
    vprime: &[ElementId],
    epsilon: f64,
    seed: u64,
) -> Result<Vec<ElementId>> {
    if vprime.len() > MAX_POST_REDUCE_ELEMENTS {
        return Err(Error::TooLarge {
            what: "post-reduction ground set",
            n: vprime.len(),
            limit: MAX_POST_REDUCE_ELEMENTS,
        });
    }
    if vprime.is_empty() {
        return Ok(Vec::new());
    }
    let weights = GraphWeights::new(objective, vprime)?;
    let inst = SparsificationInstance::new(weights, epsilon)?;
    let chosen = inst
        .cover_system()
        .double_greedy(DoubleGreedyMode::Randomized { seed });
    inst.complete_cover(&chosen)
}

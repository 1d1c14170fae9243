use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::objective::{check_set, SetFunction};
use crate::{ElementId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleGreedyMode {
    /// Keep `u` iff `a ≥ b`; a 1/3-approximation.
    Deterministic,
    /// Keep `u` with probability `a⁺ / (a⁺ + b⁺)`; 1/2 in expectation.
    Randomized { seed: u64 },
}

/// The per-element keep/drop rule shared by every double-greedy implementation.
pub(crate) struct DoubleGreedyCoin(Option<ChaCha8Rng>);

impl DoubleGreedyCoin {
    pub(crate) fn new(mode: DoubleGreedyMode) -> Self {
        match mode {
            DoubleGreedyMode::Deterministic => Self(None),
            DoubleGreedyMode::Randomized { seed } => Self(Some(ChaCha8Rng::seed_from_u64(seed))),
        }
    }

    /// `add_gain = f(X+u) - f(X)`, `drop_gain = f(Y-u) - f(Y)`; true means
    /// `u` joins `X`, false means it leaves `Y`.
    pub(crate) fn keep(&mut self, add_gain: f64, drop_gain: f64) -> bool {
        match &mut self.0 {
            None => add_gain >= drop_gain,
            Some(rng) => {
                let a = add_gain.max(0.0);
                let b = drop_gain.max(0.0);
                let p = if a + b == 0.0 { 1.0 } else { a / (a + b) };
                // Always draw so the stream position only depends on the step.
                rng.gen::<f64>() < p
            }
        }
    }
}

/// Bi-directional greedy for unconstrained (possibly non-monotone)
/// submodular maximization. Elements are visited in ascending id order.
pub fn double_greedy<F>(
    f: &F,
    ground: &[ElementId],
    mode: DoubleGreedyMode,
) -> Result<Vec<ElementId>>
where
    F: SetFunction + ?Sized,
{
    check_set(ground, f.ground_size())?;
    let mut order = ground.to_vec();
    order.sort_unstable();

    let mut coin = DoubleGreedyCoin::new(mode);
    let mut lower: Vec<ElementId> = Vec::with_capacity(order.len());
    let mut upper = order.clone();
    let mut lower_value = f.value_of(&lower);
    let mut upper_value = f.value_of(&upper);
    for &u in &order {
        lower.push(u);
        let lower_with = f.value_of(&lower);
        lower.pop();
        let at = upper
            .iter()
            .position(|&x| x == u)
            .expect("u is still in the upper set");
        upper.remove(at);
        let upper_without = f.value_of(&upper);
        upper.insert(at, u);

        if coin.keep(lower_with - lower_value, upper_without - upper_value) {
            lower.push(u);
            lower_value = lower_with;
        } else {
            upper.remove(at);
            upper_value = upper_without;
        }
    }
    Ok(lower)
}

use alloc::vec;
use alloc::vec::Vec;

use super::SparsificationInstance;
use crate::maximize::{DoubleGreedyCoin, DoubleGreedyMode};
use crate::ElementId;

/// `A_x = {v ≠ x : w_xv ≤ ε}` as bitsets over the reference ground set, with
/// cover counts that make double greedy on `h` cost `O(|V|)` per element.
#[derive(Debug, Clone)]
pub struct CoverSystem {
    ground: Vec<ElementId>,
    words: usize,
    rows: Vec<u64>,
}

impl CoverSystem {
    pub(super) fn new(inst: &SparsificationInstance<'_>) -> Self {
        let ground = inst.ground().to_vec();
        let m = ground.len();
        let words = m.div_ceil(64);
        let mut rows = vec![0u64; m * words];
        for (x, &u) in ground.iter().enumerate() {
            let weights = inst.weights().edge_row(u, &ground);
            for (v, &w) in weights.iter().enumerate() {
                if v != x && w <= inst.epsilon() {
                    rows[x * words + v / 64] |= 1 << (v % 64);
                }
            }
        }
        Self {
            ground,
            words,
            rows,
        }
    }

    pub fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    /// Positions covered by the element at position `x`.
    fn covered_by(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.rows[x * self.words..(x + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            core::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Double greedy on `h`, visiting the ground set in ascending id order.
    /// Makes exactly the same decisions (and random draws) as
    /// [`double_greedy`](crate::maximize::double_greedy) applied to the instance.
    pub fn double_greedy(&self, mode: DoubleGreedyMode) -> Vec<ElementId> {
        let m = self.ground.len();
        let mut coin = DoubleGreedyCoin::new(mode);
        let mut in_lower = vec![false; m];
        let mut in_upper = vec![true; m];
        // Number of other members of X (resp. Y) covering each position.
        let mut lower_count = vec![0u32; m];
        let mut upper_count = vec![0u32; m];
        for x in 0..m {
            for v in self.covered_by(x) {
                upper_count[v] += 1;
            }
        }

        for u in 0..m {
            let mut newly = 0i64;
            let mut lost = 0i64;
            for v in self.covered_by(u) {
                if !in_lower[v] && lower_count[v] == 0 {
                    newly += 1;
                }
                if !in_upper[v] && upper_count[v] == 1 {
                    lost += 1;
                }
            }
            // Adding u to X: u stops counting as a covered pruned element.
            let add_gain = newly - i64::from(lower_count[u] > 0);
            // Removing u from Y: u becomes pruned (counted if still covered),
            // and elements only u was covering are lost.
            let drop_gain = i64::from(upper_count[u] > 0) - lost;

            if coin.keep(add_gain as f64, drop_gain as f64) {
                in_lower[u] = true;
                for v in self.covered_by(u) {
                    lower_count[v] += 1;
                }
            } else {
                in_upper[u] = false;
                for v in self.covered_by(u) {
                    upper_count[v] -= 1;
                }
            }
        }
        (0..m)
            .filter(|&x| in_lower[x])
            .map(|x| self.ground[x])
            .collect()
    }
}

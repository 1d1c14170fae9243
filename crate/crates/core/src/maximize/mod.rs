//! Cardinality-constrained maximizers and unconstrained double greedy.
//!
//! Every maximizer breaks ties toward the smallest element id, so lazy and
//! eager greedy agree element for element and runs are reproducible.

mod brute;
mod double;
mod greedy;
mod lazy;
mod sieve;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_max, MAX_BRUTE_FORCE_ELEMENTS};
pub(crate) use double::DoubleGreedyCoin;
pub use double::{double_greedy, DoubleGreedyMode};
pub use greedy::greedy;
pub use lazy::lazy_greedy;
pub use sieve::{sieve_streaming, Sieve, SieveConfig};

use crate::ElementId;

/// A selected subset together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub algorithm: String,
    pub k: usize,
    /// Elements in selection order.
    pub selected: Vec<ElementId>,
    pub value: f64,
    /// Marginal gain of each selection.
    pub step_gains: Vec<f64>,
    pub wall_time_s: f64,
    /// Number of marginal-gain (or set) evaluations.
    pub evals_used: u64,
}

impl Solution {
    pub(crate) fn empty(algorithm: &str, k: usize) -> Self {
        Self {
            algorithm: algorithm.into(),
            k,
            selected: Vec::new(),
            value: 0.0,
            step_gains: Vec::new(),
            wall_time_s: 0.0,
            evals_used: 0,
        }
    }
}

//! Submodular sparsification.
//!
//! Randomized ground-set pruning over the submodularity graph, the objectives it
//! is meant to be run against (square-root feature coverage, facility location,
//! and exhaustive value tables for testing), the maximizers used downstream
//! (greedy, lazy greedy, sieve-streaming, double greedy, brute force), and the
//! text featurization and ROUGE-2 scoring used by the summarization pipeline.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is turned
//! off. Wall-clock timings are only recorded with `std`; without it every
//! reported duration is zero. The `parallel` feature splits the divergence
//! computation across a rayon pool; results are bit-identical to the
//! sequential path.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod graph;
pub mod maximize;
pub mod metrics;
pub mod objective;
pub mod sparsify;
pub mod synth;
pub mod text;

mod clock;
mod math;

pub use error::{Error, Result};
pub use graph::{
    compute_global_gains, exact_sparsifier_optimum, GlobalGains, GraphWeights,
    SparsificationInstance,
};
pub use maximize::{
    brute_force_max, double_greedy, greedy, lazy_greedy, sieve_streaming, DoubleGreedyMode, Sieve,
    SieveConfig, Solution,
};
pub use metrics::{relative_utility, rouge2, Rouge2};
pub use objective::{
    ExplicitTable, FacilityLocation, FeatureMatrix, FeatureSqrt, GainContext, Objective,
    ObjectiveKind, SetFunction, SimilarityMatrix,
};
pub use sparsify::{
    importance_sample, post_reduce, pre_prune, sparsify, PruneIteration, PruneTrace, Sampling,
    SparsifierConfig,
};

/// Index of an element of the ground set.
pub type ElementId = usize;

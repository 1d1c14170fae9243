//! Submodular objectives.
//!
//! [`SetFunction`] is the minimal interface (evaluate a set) used by the
//! exhaustive oracles and by double greedy. [`Objective`] is the closed set of
//! objective families that additionally support incremental marginal gains
//! through a [`GainContext`], which is what the greedy-style maximizers and the
//! sparsifier run on.

mod context;
mod facility;
mod feature;
mod table;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use context::GainContext;
pub use facility::{FacilityLocation, SimilarityMatrix};
pub use feature::{FeatureMatrix, FeatureSqrt};
pub use table::{ExplicitTable, MAX_TABLE_ELEMENTS};

use crate::{ElementId, Error, Result};

/// A set function over the ground set `0..ground_size()`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    /// `f(set)`. The caller guarantees the ids are distinct and in range.
    fn value_of(&self, set: &[ElementId]) -> f64;

    /// `f(set)` after validating the ids.
    fn eval(&self, set: &[ElementId]) -> Result<f64> {
        check_set(set, self.ground_size())?;
        Ok(self.value_of(set))
    }

    /// `f(v | set) = f(set + v) - f(set)`.
    fn marginal_gain(&self, v: ElementId, set: &[ElementId]) -> Result<f64> {
        check_set(set, self.ground_size())?;
        check_element(v, self.ground_size())?;
        if set.contains(&v) {
            return Err(Error::AlreadyPresent(v));
        }
        let mut with = Vec::with_capacity(set.len() + 1);
        with.extend_from_slice(set);
        with.push(v);
        Ok(self.value_of(&with) - self.value_of(set))
    }
}

pub(crate) fn check_element(id: ElementId, n: usize) -> Result<()> {
    if id < n {
        Ok(())
    } else {
        Err(Error::InvalidElement { id, n })
    }
}

/// Rejects out-of-range and repeated ids.
pub(crate) fn check_set(set: &[ElementId], n: usize) -> Result<()> {
    for &id in set {
        check_element(id, n)?;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateElement(pair[0]));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    FeatureSqrt,
    FacilityLocation,
    ExplicitTable,
}

/// An immutable, evaluatable submodular objective.
#[derive(Debug, Clone)]
pub enum Objective {
    FeatureSqrt(FeatureSqrt),
    FacilityLocation(FacilityLocation),
    ExplicitTable(ExplicitTable),
}

impl Objective {
    pub fn feature_sqrt(matrix: FeatureMatrix) -> Self {
        Objective::FeatureSqrt(FeatureSqrt::new(matrix))
    }

    pub fn facility_location(sim: SimilarityMatrix) -> Self {
        Objective::FacilityLocation(FacilityLocation::new(sim))
    }

    /// Builds an objective from an exhaustive table indexed by subset bitmask
    /// (bit `i` set means element `i` is in the subset).
    pub fn explicit(n: usize, values: Vec<f64>) -> Result<Self> {
        ExplicitTable::new(n, values).map(Objective::ExplicitTable)
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::FeatureSqrt(_) => ObjectiveKind::FeatureSqrt,
            Objective::FacilityLocation(_) => ObjectiveKind::FacilityLocation,
            Objective::ExplicitTable(_) => ObjectiveKind::ExplicitTable,
        }
    }

    pub fn n_elements(&self) -> usize {
        match self {
            Objective::FeatureSqrt(f) => f.matrix().n_elements(),
            Objective::FacilityLocation(f) => f.similarity().n_elements(),
            Objective::ExplicitTable(t) => t.n_elements(),
        }
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Objective::ExplicitTable(t) => t.is_monotone(),
            _ => true,
        }
    }

    /// True when `f(v | S)` does not depend on `S`; lazy greedy then never
    /// needs to refresh a bound.
    pub fn has_constant_gains(&self) -> bool {
        match self {
            Objective::ExplicitTable(t) => t.is_modular(),
            _ => false,
        }
    }

    /// `f({v})`.
    pub fn singleton(&self, v: ElementId) -> f64 {
        match self {
            Objective::FeatureSqrt(f) => f.singleton(v),
            Objective::FacilityLocation(f) => f.pair_gain_from_empty(v),
            Objective::ExplicitTable(t) => t.singleton(v),
        }
    }

    /// `f(v | {u})`; zero when `u == v`.
    pub fn pair_gain(&self, u: ElementId, v: ElementId) -> f64 {
        if u == v {
            return 0.0;
        }
        match self {
            Objective::FeatureSqrt(f) => f.pair_gain(u, v),
            Objective::FacilityLocation(f) => f.pair_gain(u, v),
            Objective::ExplicitTable(t) => t.pair_gain(u, v),
        }
    }

    /// Opens an incremental gain context positioned at `set`.
    pub fn open_context(&self, set: &[ElementId]) -> Result<GainContext<'_>> {
        check_set(set, self.n_elements())?;
        let mut ctx = GainContext::empty(self);
        for &v in set {
            ctx.commit(v)?;
        }
        Ok(ctx)
    }

    /// A gain context over the empty set.
    pub fn context(&self) -> GainContext<'_> {
        GainContext::empty(self)
    }
}

impl SetFunction for Objective {
    fn ground_size(&self) -> usize {
        self.n_elements()
    }

    fn value_of(&self, set: &[ElementId]) -> f64 {
        match self {
            Objective::FeatureSqrt(f) => f.value_of(set),
            Objective::FacilityLocation(f) => f.value_of(set),
            Objective::ExplicitTable(t) => t.value_of(set),
        }
    }
}

#[cfg(test)]
mod tests;

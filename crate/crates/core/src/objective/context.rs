use alloc::vec;
use alloc::vec::Vec;

use super::{check_element, Objective};
use crate::math::sqrt;
use crate::{ElementId, Error, Result};

/// Incremental marginal-gain state for one working set `S`.
///
/// Gains are computed from per-objective accumulators instead of from scratch:
/// per-feature sums `c_u(S)` for square-root coverage, per-row running maxima
/// for facility location, and the subset mask for explicit tables.
#[derive(Debug, Clone)]
pub struct GainContext<'a> {
    objective: &'a Objective,
    members: Vec<bool>,
    selected: Vec<ElementId>,
    value: f64,
    state: Accumulators,
}

#[derive(Debug, Clone)]
enum Accumulators {
    Coverage(Vec<f64>),
    Facility(Vec<f64>),
    Table(usize),
}

impl<'a> GainContext<'a> {
    pub(crate) fn empty(objective: &'a Objective) -> Self {
        let state = match objective {
            Objective::FeatureSqrt(f) => Accumulators::Coverage(vec![0.0; f.matrix().n_features()]),
            Objective::FacilityLocation(f) => {
                Accumulators::Facility(vec![0.0; f.similarity().n_elements()])
            }
            Objective::ExplicitTable(_) => Accumulators::Table(0),
        };
        Self {
            objective,
            members: vec![false; objective.n_elements()],
            selected: Vec::new(),
            value: 0.0,
            state,
        }
    }

    pub fn objective(&self) -> &'a Objective {
        self.objective
    }

    /// Current `f(S)`, accumulated from committed gains.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Elements of `S` in commit order.
    pub fn selected(&self) -> &[ElementId] {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, v: ElementId) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    /// Per-feature sums `c_u(S)`; only for square-root coverage.
    pub fn coverage_sums(&self) -> Option<&[f64]> {
        match &self.state {
            Accumulators::Coverage(c) => Some(c),
            _ => None,
        }
    }

    /// `f(v | S)`.
    pub fn gain(&self, v: ElementId) -> Result<f64> {
        check_element(v, self.members.len())?;
        if self.members[v] {
            return Err(Error::AlreadyPresent(v));
        }
        Ok(self.gain_unchecked(v))
    }

    /// `f(v | S)` without checking that `v` is a valid id outside `S`.
    pub fn gain_unchecked(&self, v: ElementId) -> f64 {
        debug_assert!(!self.members[v]);
        match (&self.state, self.objective) {
            (Accumulators::Coverage(sums), Objective::FeatureSqrt(f)) => {
                let (fs, ws) = f.matrix().row(v);
                fs.iter()
                    .zip(ws)
                    .map(|(&feature, &w)| {
                        let c = sums[feature];
                        sqrt(c + w) - sqrt(c)
                    })
                    .sum()
            }
            (Accumulators::Facility(best), Objective::FacilityLocation(f)) => f
                .column(v)
                .iter()
                .zip(best)
                .map(|(&s, &b)| (s - b).max(0.0))
                .sum(),
            (Accumulators::Table(mask), Objective::ExplicitTable(t)) => {
                t.at_mask(mask | 1 << v) - t.at_mask(*mask)
            }
            _ => unreachable!("accumulators always match the objective kind"),
        }
    }

    /// Adds `v` to `S` and returns the gain it contributed.
    pub fn commit(&mut self, v: ElementId) -> Result<f64> {
        let gain = self.gain(v)?;
        match (&mut self.state, self.objective) {
            (Accumulators::Coverage(sums), Objective::FeatureSqrt(f)) => {
                let (fs, ws) = f.matrix().row(v);
                for (&feature, &w) in fs.iter().zip(ws) {
                    sums[feature] += w;
                }
            }
            (Accumulators::Facility(best), Objective::FacilityLocation(f)) => {
                for (b, &s) in best.iter_mut().zip(f.column(v)) {
                    if s > *b {
                        *b = s;
                    }
                }
            }
            (Accumulators::Table(mask), Objective::ExplicitTable(_)) => *mask |= 1 << v,
            _ => unreachable!("accumulators always match the objective kind"),
        }
        self.members[v] = true;
        self.selected.push(v);
        self.value += gain;
        Ok(gain)
    }
}

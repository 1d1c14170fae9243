//! The submodularity graph.
//!
//! Nodes are ground elements; the edge `u → v` carries
//! `w_uv = f(v | u) - f(u | V∖u)`, the worst-case net loss of dropping `v`
//! while keeping `u`. Edges are evaluated on demand from the objective and the
//! cached global gains `f(u | V∖u)`; no `n × n` table is ever built.

mod cover;
mod divergence;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

pub use cover::CoverSystem;

use crate::objective::{check_element, check_set, Objective, SetFunction};
use crate::{ElementId, Error, Result};

/// Largest reference ground set [`exact_sparsifier_optimum`] will enumerate.
pub const MAX_EXACT_SPARSIFIER_ELEMENTS: usize = 12;

/// `g[u] = f(u | V∖u)` for every `u` of a fixed reference ground set `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalGains {
    gains: Vec<f64>,
    member: Vec<bool>,
    reference: Vec<ElementId>,
}

impl GlobalGains {
    /// `f(u | V∖u)`, or `None` when `u` is outside the reference set.
    pub fn get(&self, u: ElementId) -> Option<f64> {
        self.member
            .get(u)
            .copied()
            .unwrap_or(false)
            .then(|| self.gains[u])
    }

    /// The reference ground set, ascending.
    pub fn reference(&self) -> &[ElementId] {
        &self.reference
    }

    pub fn contains(&self, u: ElementId) -> bool {
        self.member.get(u).copied().unwrap_or(false)
    }
}

impl Index<ElementId> for GlobalGains {
    type Output = f64;

    fn index(&self, u: ElementId) -> &f64 {
        assert!(
            self.contains(u),
            "element {u} is not in the reference ground set"
        );
        &self.gains[u]
    }
}

/// Computes `f(u | V∖u)` for each `u ∈ V` in one pass.
pub fn compute_global_gains(objective: &Objective, ground: &[ElementId]) -> Result<GlobalGains> {
    if ground.is_empty() {
        return Err(Error::Empty("reference ground set"));
    }
    let n = objective.n_elements();
    check_set(ground, n)?;
    let mut reference = ground.to_vec();
    reference.sort_unstable();
    let mut member = vec![false; n];
    for &u in &reference {
        member[u] = true;
    }

    let mut gains = vec![f64::NAN; n];
    match objective {
        Objective::FeatureSqrt(fs) => {
            let m = fs.matrix();
            let mut sums = vec![0.0; m.n_features()];
            for &u in &reference {
                let (features, weights) = m.row(u);
                for (&f, &w) in features.iter().zip(weights) {
                    sums[f] += w;
                }
            }
            let roots: Vec<f64> = sums.iter().map(|&c| crate::math::sqrt(c)).collect();
            for &u in &reference {
                let (features, weights) = m.row(u);
                gains[u] = features
                    .iter()
                    .zip(weights)
                    .map(|(&f, &w)| roots[f] - crate::math::sqrt((sums[f] - w).max(0.0)))
                    .sum();
            }
        }
        Objective::FacilityLocation(fl) => {
            for &u in &reference {
                gains[u] = 0.0;
            }
            let sim = fl.similarity();
            for i in 0..sim.n_elements() {
                let row = sim.row(i);
                let (mut best, mut arg, mut second) = (f64::NEG_INFINITY, usize::MAX, 0.0f64);
                for &j in &reference {
                    let s = row[j];
                    if s > best {
                        second = best.max(0.0);
                        best = s;
                        arg = j;
                    } else if s > second {
                        second = s;
                    }
                }
                gains[arg] += best - second;
            }
        }
        Objective::ExplicitTable(t) => {
            let full = reference.iter().fold(0usize, |m, &u| m | 1 << u);
            for &u in &reference {
                gains[u] = t.at_mask(full) - t.at_mask(full & !(1 << u));
            }
        }
    }

    Ok(GlobalGains {
        gains,
        member,
        reference,
    })
}

/// Edge weights of the submodularity graph for one objective and reference set.
#[derive(Debug, Clone)]
pub struct GraphWeights<'a> {
    objective: &'a Objective,
    globals: GlobalGains,
}

impl<'a> GraphWeights<'a> {
    pub fn new(objective: &'a Objective, ground: &[ElementId]) -> Result<Self> {
        Ok(Self {
            objective,
            globals: compute_global_gains(objective, ground)?,
        })
    }

    pub fn from_globals(objective: &'a Objective, globals: GlobalGains) -> Self {
        Self { objective, globals }
    }

    pub fn objective(&self) -> &'a Objective {
        self.objective
    }

    pub fn globals(&self) -> &GlobalGains {
        &self.globals
    }

    pub fn reference(&self) -> &[ElementId] {
        self.globals.reference()
    }

    /// `w_uv = f(v | u) - f(u | V∖u)`; `w_uu = -f(u | V∖u)`.
    ///
    /// Panics if `u` is not in the reference ground set.
    pub fn edge_weight(&self, u: ElementId, v: ElementId) -> f64 {
        let g = self.globals[u];
        match self.objective {
            // Same expression as the batched kernels, so every path agrees bit for bit.
            Objective::FeatureSqrt(fs) if u != v => {
                fs.singleton(v) - fs.overlap_correction(u, v) - g
            }
            _ => self.objective.pair_gain(u, v) - g,
        }
    }

    /// `w_{uv|S} = f(v | S + u) - f(u | V∖u)`.
    pub fn conditional_edge_weight(
        &self,
        u: ElementId,
        v: ElementId,
        set: &[ElementId],
    ) -> Result<f64> {
        let n = self.objective.n_elements();
        check_element(u, n)?;
        check_element(v, n)?;
        if u == v {
            return Err(Error::InvalidConfig(
                "conditional edge weight needs distinct endpoints".into(),
            ));
        }
        if set.contains(&u) {
            return Err(Error::AlreadyPresent(u));
        }
        let g = self
            .globals
            .get(u)
            .ok_or(Error::InvalidElement { id: u, n })?;
        let mut with_u = Vec::with_capacity(set.len() + 1);
        with_u.extend_from_slice(set);
        with_u.push(u);
        Ok(self.objective.marginal_gain(v, &with_u)? - g)
    }

    /// `w_{U,v} = min_{x∈U} w_xv`.
    pub fn divergence(&self, sources: &[ElementId], v: ElementId) -> Result<f64> {
        Ok(self.divergence_all(sources, &[v])?[0])
    }

    /// `w_{U,v}` for every `v` in `targets`, in order.
    pub fn divergence_all(&self, sources: &[ElementId], targets: &[ElementId]) -> Result<Vec<f64>> {
        if sources.is_empty() {
            return Err(Error::Empty("divergence source set"));
        }
        let n = self.objective.n_elements();
        for &u in sources {
            if !self.globals.contains(u) {
                return Err(Error::InvalidElement { id: u, n });
            }
        }
        for &v in targets {
            check_element(v, n)?;
        }
        Ok(self.divergences_unchecked(sources, targets))
    }

    /// `w_uv` for every `v` in `targets`, in order.
    pub fn edge_row(&self, u: ElementId, targets: &[ElementId]) -> Vec<f64> {
        divergence::edge_row(self, u, targets)
    }

    pub(crate) fn divergences_unchecked(
        &self,
        sources: &[ElementId],
        targets: &[ElementId],
    ) -> Vec<f64> {
        divergence::divergences(self, sources, targets)
    }
}

/// The pruning objective `h(V') = |{v ∈ V∖V' : w_{V',v} ≤ ε}|` over the
/// reference ground set of `weights`.
#[derive(Debug, Clone)]
pub struct SparsificationInstance<'a> {
    epsilon: f64,
    weights: GraphWeights<'a>,
}

impl<'a> SparsificationInstance<'a> {
    pub fn new(weights: GraphWeights<'a>, epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() {
            return Err(Error::InvalidConfig("epsilon must not be NaN".into()));
        }
        Ok(Self { epsilon, weights })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn weights(&self) -> &GraphWeights<'a> {
        &self.weights
    }

    pub fn ground(&self) -> &[ElementId] {
        self.weights.reference()
    }

    /// `h(V')`; `h(∅) = 0`.
    pub fn h_value(&self, kept: &[ElementId]) -> Result<usize> {
        let n = self.weights.objective().n_elements();
        check_set(kept, n)?;
        if let Some(&id) = kept.iter().find(|&&u| !self.weights.globals().contains(u)) {
            return Err(Error::InvalidElement { id, n });
        }
        Ok(self.h_unchecked(kept))
    }

    fn h_unchecked(&self, kept: &[ElementId]) -> usize {
        if kept.is_empty() {
            return 0;
        }
        let pruned = self.pruned(kept);
        self.weights
            .divergences_unchecked(kept, &pruned)
            .into_iter()
            .filter(|&w| w <= self.epsilon)
            .count()
    }

    fn pruned(&self, kept: &[ElementId]) -> Vec<ElementId> {
        let mut inside = kept.to_vec();
        inside.sort_unstable();
        self.ground()
            .iter()
            .copied()
            .filter(|v| inside.binary_search(v).is_err())
            .collect()
    }

    /// `kept` plus every pruned element it leaves uncovered (divergence > ε),
    /// ascending. Every element outside the result has divergence ≤ ε from it.
    pub fn complete_cover(&self, kept: &[ElementId]) -> Result<Vec<ElementId>> {
        self.h_value(kept)?;
        let pruned = self.pruned(kept);
        let mut out = kept.to_vec();
        if kept.is_empty() {
            out.extend_from_slice(&pruned);
        } else {
            let div = self.weights.divergences_unchecked(kept, &pruned);
            out.extend(
                pruned
                    .iter()
                    .zip(div)
                    .filter(|&(_, w)| w > self.epsilon)
                    .map(|(&v, _)| v),
            );
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Coverage structure for fast double greedy on `h`.
    pub fn cover_system(&self) -> CoverSystem {
        CoverSystem::new(self)
    }
}

impl SetFunction for SparsificationInstance<'_> {
    fn ground_size(&self) -> usize {
        self.weights.objective().n_elements()
    }

    /// Elements of `set` must belong to the reference ground set.
    fn value_of(&self, set: &[ElementId]) -> f64 {
        self.h_unchecked(set) as f64
    }
}

/// Exhaustive maximizer of `h`. Ties prefer the smaller set, then the
/// lexicographically smaller one. Returns `(V*, |V*|)`.
pub fn exact_sparsifier_optimum(
    inst: &SparsificationInstance<'_>,
) -> Result<(Vec<ElementId>, usize)> {
    let ground = inst.ground();
    let m = ground.len();
    if m > MAX_EXACT_SPARSIFIER_ELEMENTS {
        return Err(Error::TooLarge {
            what: "exact sparsifier optimum",
            n: m,
            limit: MAX_EXACT_SPARSIFIER_ELEMENTS,
        });
    }
    // covers[x] = bitmask of positions v with w_xv ≤ ε (v ≠ x)
    let covers: Vec<u32> = (0..m)
        .map(|x| {
            let row = inst.weights().edge_row(ground[x], ground);
            (0..m)
                .filter(|&v| v != x && row[v] <= inst.epsilon())
                .fold(0u32, |acc, v| acc | 1 << v)
        })
        .collect();

    let mut best_mask = 0u32;
    let mut best_h = 0u32;
    let mut best_ids: Vec<ElementId> = Vec::new();
    let mut ids = Vec::with_capacity(m);
    for mask in 1u32..1 << m {
        let covered = (0..m)
            .filter(|&x| mask & (1 << x) != 0)
            .fold(0u32, |acc, x| acc | covers[x]);
        let h = (covered & !mask).count_ones();
        if h < best_h {
            continue;
        }
        ids.clear();
        ids.extend((0..m).filter(|&x| mask & (1 << x) != 0).map(|x| ground[x]));
        let better = h > best_h
            || mask.count_ones() < best_mask.count_ones()
            || (mask.count_ones() == best_mask.count_ones() && ids < best_ids);
        if better {
            best_h = h;
            best_mask = mask;
            best_ids.clone_from(&ids);
        }
    }
    let k = best_ids.len();
    Ok((best_ids, k))
}

// Batched edge-weight kernels.
//
// For square-root coverage, f(v | u) = f({v}) - Σ_{f ∈ u∩v} (√ω_u + √ω_v - √(ω_u + ω_v)),
// so only features shared by u and v cost anything. Walking v's features
// through a column index of the sources visits exactly those pairs.

use alloc::vec;
use alloc::vec::Vec;

use super::GraphWeights;
use crate::math::sqrt;
use crate::objective::{FeatureSqrt, Objective};
use crate::ElementId;

const NO_SLOT: usize = usize::MAX;

pub(super) fn divergences(
    weights: &GraphWeights<'_>,
    sources: &[ElementId],
    targets: &[ElementId],
) -> Vec<f64> {
    match weights.objective() {
        Objective::FeatureSqrt(fs) if disjoint(weights, sources, targets) => {
            sparse_divergences(weights, fs, sources, targets)
        }
        _ => generic_divergences(weights, sources, targets),
    }
}

fn disjoint(weights: &GraphWeights<'_>, sources: &[ElementId], targets: &[ElementId]) -> bool {
    let mut mark = vec![false; weights.objective().n_elements()];
    for &u in sources {
        mark[u] = true;
    }
    targets.iter().all(|&v| !mark[v])
}

fn generic_min(weights: &GraphWeights<'_>, sources: &[ElementId], v: ElementId) -> f64 {
    sources
        .iter()
        .map(|&u| weights.edge_weight(u, v))
        .fold(f64::INFINITY, f64::min)
}

fn generic_divergences(
    weights: &GraphWeights<'_>,
    sources: &[ElementId],
    targets: &[ElementId],
) -> Vec<f64> {
    chunked(targets, |part| {
        part.iter()
            .map(|&v| generic_min(weights, sources, v))
            .collect()
    })
}

/// Scratch space for accumulating per-target overlap corrections of one source.
struct Overlap {
    slot: Vec<usize>,
    correction: Vec<f64>,
    touched: Vec<usize>,
    hit: Vec<bool>,
}

impl Overlap {
    fn new(n: usize, targets: &[ElementId]) -> Self {
        let mut slot = vec![NO_SLOT; n];
        for (i, &v) in targets.iter().enumerate() {
            slot[v] = i;
        }
        Self {
            slot,
            correction: vec![0.0; targets.len()],
            touched: Vec::new(),
            hit: vec![false; targets.len()],
        }
    }

    /// Accumulates `Σ_{f ∈ u∩v} (√ω_u + √ω_v - √(ω_u + ω_v))` for every target `v ≠ u`.
    fn accumulate(&mut self, fs: &FeatureSqrt, u: ElementId) {
        let m = fs.matrix();
        let (features, u_weights) = m.row(u);
        let u_roots = fs.row_roots(u);
        for ((&f, &wu), &ru) in features.iter().zip(u_weights).zip(u_roots) {
            let (elements, v_weights) = m.column(f);
            let v_roots = fs.col_roots(f);
            for ((&v, &wv), &rv) in elements.iter().zip(v_weights).zip(v_roots) {
                let i = self.slot[v];
                if i == NO_SLOT || v == u {
                    continue;
                }
                if !self.hit[i] {
                    self.hit[i] = true;
                    self.touched.push(i);
                }
                self.correction[i] += ru + rv - sqrt(wu + wv);
            }
        }
    }

    fn drain(&mut self, mut visit: impl FnMut(usize, f64)) {
        for &i in &self.touched {
            visit(i, self.correction[i]);
            self.correction[i] = 0.0;
            self.hit[i] = false;
        }
        self.touched.clear();
    }
}

/// Column index of the source rows: for each feature, the sources that carry
/// it as `(position in sources, ω, √ω)`.
struct SourceColumns {
    start: Vec<usize>,
    entries: Vec<(usize, f64, f64)>,
}

impl SourceColumns {
    fn new(fs: &FeatureSqrt, sources: &[ElementId]) -> Self {
        let m = fs.matrix();
        let mut start = vec![0usize; m.n_features() + 1];
        for &u in sources {
            for &f in m.row(u).0 {
                start[f + 1] += 1;
            }
        }
        for f in 0..m.n_features() {
            start[f + 1] += start[f];
        }
        let mut fill = start.clone();
        let mut entries = vec![(0, 0.0, 0.0); start[m.n_features()]];
        for (j, &u) in sources.iter().enumerate() {
            let (features, weights) = m.row(u);
            for ((&f, &w), &root) in features.iter().zip(weights).zip(fs.row_roots(u)) {
                entries[fill[f]] = (j, w, root);
                fill[f] += 1;
            }
        }
        Self { start, entries }
    }
}

/// Minimum over `sources` of `w_uv` for each target, sources disjoint from
/// targets. Each `(u, v)` overlap is summed in ascending feature order, the
/// same order [`edge_row`] and `edge_weight` use.
fn sparse_chunk(
    fs: &FeatureSqrt,
    columns: &SourceColumns,
    source_gains: &[f64],
    g_max: f64,
    targets: &[ElementId],
) -> Vec<f64> {
    let m = fs.matrix();
    let mut correction = vec![0.0; source_gains.len()];
    let mut hit = vec![false; source_gains.len()];
    let mut touched: Vec<usize> = Vec::new();
    targets
        .iter()
        .map(|&v| {
            let (features, v_weights) = m.row(v);
            for ((&f, &wv), &rv) in features.iter().zip(v_weights).zip(fs.row_roots(v)) {
                for &(j, wu, ru) in &columns.entries[columns.start[f]..columns.start[f + 1]] {
                    if !hit[j] {
                        hit[j] = true;
                        touched.push(j);
                    }
                    correction[j] += ru + rv - sqrt(wu + wv);
                }
            }
            // A source sharing no feature with v contributes f({v}) - g[u];
            // the largest g[u] gives the smallest such value.
            let single = fs.singleton(v);
            let mut best = single - g_max;
            for &j in &touched {
                let w = single - correction[j] - source_gains[j];
                if w < best {
                    best = w;
                }
                correction[j] = 0.0;
                hit[j] = false;
            }
            touched.clear();
            best
        })
        .collect()
}

fn sparse_divergences(
    weights: &GraphWeights<'_>,
    fs: &FeatureSqrt,
    sources: &[ElementId],
    targets: &[ElementId],
) -> Vec<f64> {
    let g = weights.globals();
    let source_gains: Vec<f64> = sources.iter().map(|&u| g[u]).collect();
    let g_max = source_gains
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let columns = SourceColumns::new(fs, sources);
    chunked(targets, |part| {
        sparse_chunk(fs, &columns, &source_gains, g_max, part)
    })
}

/// Applies `kernel` to consecutive slices of `targets` and concatenates the
/// results in order.
#[cfg(not(feature = "parallel"))]
fn chunked(targets: &[ElementId], kernel: impl Fn(&[ElementId]) -> Vec<f64>) -> Vec<f64> {
    kernel(targets)
}

// Each target's value is computed independently of the split, so the result
// does not depend on the thread count.
#[cfg(feature = "parallel")]
fn chunked(targets: &[ElementId], kernel: impl Fn(&[ElementId]) -> Vec<f64> + Sync) -> Vec<f64> {
    use rayon::prelude::*;
    let threads = rayon::current_num_threads();
    if threads <= 1 || targets.len() < 1024 {
        return kernel(targets);
    }
    let chunk = targets.len().div_ceil(threads * 4);
    targets
        .par_chunks(chunk)
        .map(&kernel)
        .collect::<Vec<_>>()
        .concat()
}

pub(super) fn edge_row(
    weights: &GraphWeights<'_>,
    u: ElementId,
    targets: &[ElementId],
) -> Vec<f64> {
    let gu = weights.globals()[u];
    match weights.objective() {
        Objective::FeatureSqrt(fs) => {
            let mut correction = vec![0.0; targets.len()];
            let mut overlap = Overlap::new(fs.matrix().n_elements(), targets);
            overlap.accumulate(fs, u);
            overlap.drain(|i, corr| correction[i] = corr);
            // Same expression as the batched kernel so both agree bit for bit.
            targets
                .iter()
                .zip(correction)
                .map(|(&v, corr)| {
                    if v == u {
                        -gu
                    } else {
                        fs.singleton(v) - corr - gu
                    }
                })
                .collect()
        }
        _ => targets.iter().map(|&v| weights.edge_weight(u, v)).collect(),
    }
}

//! Property suite over seeded random instances.
//!
//! Each check returns a [`Check`] with the number of cases examined, the
//! number that violated the property and how many violations it tolerates.
//! [`run_suite`] runs all of them; the acceptance tests call the individual
//! checks at their own sizes.

use std::f64::consts::E;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use subsparse_core::graph::MAX_EXACT_SPARSIFIER_ELEMENTS;
use subsparse_core::synth::{
    generate_synthetic, random_coverage_table, random_matrix, random_similarity, SynthConfig,
    WeightLaw,
};
use subsparse_core::text::{tfidf_featurize, Corpus, Document};
use subsparse_core::{
    brute_force_max, double_greedy, exact_sparsifier_optimum, greedy, lazy_greedy, post_reduce,
    pre_prune, rouge2, sparsify, DoubleGreedyMode, GraphWeights, Objective, SetFunction, Sieve,
    SieveConfig, SparsificationInstance, SparsifierConfig,
};

pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    pub allowed: usize,
    /// First violation, or a summary statistic.
    pub detail: String,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            violations: 0,
            allowed: 0,
            detail: String::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.detail.is_empty() {
                self.detail = describe();
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.violations <= self.allowed
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<40} {:>8} cases {:>6} violations",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.violations
        )?;
        if self.allowed > 0 {
            write!(f, " (≤ {} allowed)", self.allowed)?;
        }
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn subset(rng: &mut ChaCha8Rng, pool: &[usize], p: f64) -> Vec<usize> {
    pool.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

pub fn feature_instance(n: usize, seed: u64) -> Objective {
    let mut r = rng(seed, 1);
    let nf = r.gen_range(3..=12);
    let density = r.gen_range(0.2..0.6);
    Objective::feature_sqrt(random_matrix(n, nf, density, 3.0, seed))
}

pub fn facility_instance(n: usize, seed: u64) -> Objective {
    Objective::facility_location(random_similarity(n, seed))
}

/// Weighted coverage as an exhaustive table; `n ≤ 20`.
pub fn table_instance(n: usize, seed: u64) -> Objective {
    let universe = rng(seed, 2).gen_range(4..=10);
    Objective::ExplicitTable(
        random_coverage_table(n, universe, 0.35, seed).expect("n within table limit"),
    )
}

/// Cycles through square-root coverage, facility location and, when `n`
/// allows, coverage tables.
pub fn mixed_instance(n: usize, seed: u64) -> Objective {
    match seed % 3 {
        0 => feature_instance(n, seed),
        1 => facility_instance(n, seed),
        _ if n <= 12 => table_instance(n, seed),
        _ => feature_instance(n, seed),
    }
}

/// `0` followed by quantiles of the nonnegative off-diagonal edge weights, so
/// the grid exercises every regime of `h` from nothing covered to most covered.
pub fn epsilon_grid(weights: &GraphWeights<'_>) -> Vec<f64> {
    let ground = weights.reference().to_vec();
    let mut w: Vec<f64> = ground
        .iter()
        .flat_map(|&u| {
            ground
                .iter()
                .filter(move |&&v| v != u)
                .map(move |&v| (u, v))
        })
        .map(|(u, v)| weights.edge_weight(u, v))
        .filter(|&w| w >= 0.0)
        .collect();
    w.sort_by(f64::total_cmp);
    let mut grid = vec![0.0];
    if !w.is_empty() {
        grid.extend(
            [0.1, 0.3, 0.6, 0.9]
                .iter()
                .map(|&q| w[((w.len() - 1) as f64 * q).round() as usize]),
        );
    }
    grid.resize(5, *grid.last().expect("nonempty"));
    grid
}

pub fn gain_context(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("gain context vs scratch");
    for i in 0..instances {
        let n = 6 + i % 10;
        let f = mixed_instance(n, seed.wrapping_add(i as u64));
        let mut r = rng(seed, 100 + i as u64);
        let mut order = all(n);
        order.shuffle(&mut r);
        let mut ctx = f.context();
        for &next in &order {
            for v in (0..n).filter(|v| !ctx.contains(*v)) {
                let incremental = ctx.gain(v).expect("valid element");
                let scratch = f.marginal_gain(v, ctx.selected()).expect("valid element");
                check.record((incremental - scratch).abs() <= TOL, || {
                    format!(
                        "{:?}: gain({v}) {incremental} vs scratch {scratch}",
                        f.kind()
                    )
                });
            }
            ctx.commit(next).expect("valid element");
        }
    }
    check
}

/// Greedy reaches `(1 − 1/e)` of the exhaustive optimum; half the instances are
/// square-root coverage, half coverage tables.
pub fn greedy_guarantee(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("greedy ≥ (1−1/e)·OPT");
    for i in 0..instances {
        let mut r = rng(seed, 200 + i as u64);
        let n = r.gen_range(4..=12);
        let k = r.gen_range(1..=4);
        let s = seed.wrapping_add(i as u64);
        let f = if i % 2 == 0 {
            feature_instance(n, s)
        } else {
            table_instance(n, s)
        };
        let g = greedy(&f, &all(n), k).expect("valid instance");
        let opt = brute_force_max(&f, &all(n), k).expect("small instance");
        check.record(g.value >= (1.0 - 1.0 / E) * opt.value - TOL, || {
            format!("instance {i}: greedy {} vs OPT {}", g.value, opt.value)
        });
    }
    check
}

/// Lazy greedy selects exactly what eager greedy selects.
pub struct LazyEager {
    pub same_sequence: Check,
    /// Instances with `n ≥ 50` where lazy did not save evaluations; 5% allowed.
    pub fewer_evals: Check,
}

pub fn lazy_eager(instances: usize, seed: u64) -> LazyEager {
    let mut same = Check::new("lazy = eager selections");
    let mut fewer = Check::new("lazy evals < eager (n ≥ 50)");
    for i in 0..instances {
        let mut r = rng(seed, 300 + i as u64);
        let n = r.gen_range(10..=200);
        let k = r.gen_range(5..=n.min(25));
        let s = seed.wrapping_add(i as u64);
        let f = if i % 2 == 0 {
            Objective::feature_sqrt(random_matrix(n, r.gen_range(5..40), 0.2, 2.0, s))
        } else {
            facility_instance(n, s)
        };
        let eager = greedy(&f, &all(n), k).expect("valid instance");
        let lazy = lazy_greedy(&f, &all(n), k).expect("valid instance");
        same.record(eager.selected == lazy.selected, || {
            format!("instance {i}: {:?} vs {:?}", eager.selected, lazy.selected)
        });
        if n >= 50 {
            fewer.record(lazy.evals_used < eager.evals_used, || {
                format!(
                    "instance {i}: lazy {} vs eager {}",
                    lazy.evals_used, eager.evals_used
                )
            });
        }
    }
    fewer.allowed = fewer.cases / 20;
    LazyEager {
        same_sequence: same,
        fewer_evals: fewer,
    }
}

fn edge_pool(count: usize, seed: u64) -> Vec<Objective> {
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let n = rng(s, 400).gen_range(8..=30);
            mixed_instance(n, s)
        })
        .collect()
}

fn distinct_pair(r: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let u = r.gen_range(0..n);
    let mut v = r.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// `P ⊆ S ⇒ w_{uv|S} ≤ w_{uv|P}`.
pub fn conditioning_monotone(samples: usize, seed: u64) -> Check {
    let mut check = Check::new("conditioning: w_{uv|S} ≤ w_{uv|P}");
    let pool = edge_pool(20, seed);
    let weights: Vec<GraphWeights<'_>> = pool
        .iter()
        .map(|f| GraphWeights::new(f, &all(f.n_elements())).expect("valid instance"))
        .collect();
    let mut r = rng(seed, 500);
    for _ in 0..samples {
        let w = &weights[r.gen_range(0..weights.len())];
        let n = w.objective().n_elements();
        let (u, v) = distinct_pair(&mut r, n);
        let rest: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
        let p_s = r.gen_range(0.0..0.8);
        let s = subset(&mut r, &rest, p_s);
        let p = subset(&mut r, &s, 0.5);
        let ws = w
            .conditional_edge_weight(u, v, &s)
            .expect("valid arguments");
        let wp = w
            .conditional_edge_weight(u, v, &p)
            .expect("valid arguments");
        check.record(ws <= wp + TOL, || {
            format!("u={u} v={v} S={s:?} P={p:?}: {ws} > {wp}")
        });
    }
    check
}

/// `f(v|S) ≤ f(u|S) + w_{uv|S}`.
pub fn marginal_gain_bound(samples: usize, seed: u64) -> Check {
    let mut check = Check::new("gain transfer: f(v|S) ≤ f(u|S) + w_{uv|S}");
    let pool = edge_pool(20, seed.wrapping_add(1));
    let weights: Vec<GraphWeights<'_>> = pool
        .iter()
        .map(|f| GraphWeights::new(f, &all(f.n_elements())).expect("valid instance"))
        .collect();
    let mut r = rng(seed, 600);
    for _ in 0..samples {
        let w = &weights[r.gen_range(0..weights.len())];
        let f = w.objective();
        let n = f.n_elements();
        let (u, v) = distinct_pair(&mut r, n);
        let rest: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
        let p_s = r.gen_range(0.0..0.8);
        let s = subset(&mut r, &rest, p_s);
        let fv = f.marginal_gain(v, &s).expect("v ∉ S");
        let fu = f.marginal_gain(u, &s).expect("u ∉ S");
        let wuv = w
            .conditional_edge_weight(u, v, &s)
            .expect("valid arguments");
        check.record(fv <= fu + wuv + TOL, || {
            format!("u={u} v={v} S={s:?}: {fv} > {fu} + {wuv}")
        });
    }
    check
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triples {
    /// Every ordered `(v, u, x)`, repeats included.
    All,
    /// Ordered triples whose middle node differs from both ends.
    MiddleDistinct,
}

/// `w_vx ≤ w_vu + w_ux` on `instances` random instances with `n ≤ 30`.
pub fn triangle_inequality(instances: usize, seed: u64, triples: Triples) -> Check {
    let name = match triples {
        Triples::All => "triangle, all triples",
        Triples::MiddleDistinct => "triangle, u ∉ {v,x}",
    };
    let mut check = Check::new(name);
    let mut endpoint_violations = 0;
    for (i, f) in edge_pool(instances, seed.wrapping_add(2))
        .iter()
        .enumerate()
    {
        let n = f.n_elements();
        let w = GraphWeights::new(f, &all(n)).expect("valid instance");
        let table: Vec<f64> = (0..n * n).map(|i| w.edge_weight(i / n, i % n)).collect();
        let at = |a: usize, b: usize| table[a * n + b];
        for v in 0..n {
            for u in 0..n {
                for x in 0..n {
                    let through_end = u == v || u == x;
                    if triples == Triples::MiddleDistinct && through_end {
                        continue;
                    }
                    let ok = at(v, x) <= at(v, u) + at(u, x) + TOL;
                    if !ok && through_end {
                        endpoint_violations += 1;
                    }
                    check.record(ok, || {
                        format!(
                            "instance {i} (v,u,x)=({v},{u},{x}): {} > {} + {}",
                            at(v, x),
                            at(v, u),
                            at(u, x)
                        )
                    });
                }
            }
        }
    }
    if check.violations > 0 {
        check.detail = format!(
            "{endpoint_violations} of {} violations have u ∈ {{v,x}}; first: {}",
            check.violations, check.detail
        );
    }
    check
}

/// `max_{u∈V′} f(u|S) ≥ f(v|S) − w_{V′,v|S}` for `v ∉ V′`.
pub fn pruning_price(samples: usize, seed: u64) -> Check {
    let mut check = Check::new("pruning price bound");
    let pool = edge_pool(20, seed.wrapping_add(3));
    let weights: Vec<GraphWeights<'_>> = pool
        .iter()
        .map(|f| GraphWeights::new(f, &all(f.n_elements())).expect("valid instance"))
        .collect();
    let mut r = rng(seed, 700);
    for _ in 0..samples {
        let w = &weights[r.gen_range(0..weights.len())];
        let f = w.objective();
        let n = f.n_elements();
        let p_s = r.gen_range(0.0..0.4);
        let s = subset(&mut r, &all(n), p_s);
        let free: Vec<usize> = (0..n).filter(|x| !s.contains(x)).collect();
        if free.len() < 2 {
            continue;
        }
        let v = free[r.gen_range(0..free.len())];
        let candidates: Vec<usize> = free.iter().copied().filter(|&x| x != v).collect();
        let mut kept = subset(&mut r, &candidates, 0.4);
        if kept.is_empty() {
            kept.push(candidates[0]);
        }
        let best = kept
            .iter()
            .map(|&u| f.marginal_gain(u, &s).expect("u ∉ S"))
            .fold(f64::MIN, f64::max);
        let div = kept
            .iter()
            .map(|&u| {
                w.conditional_edge_weight(u, v, &s)
                    .expect("valid arguments")
            })
            .fold(f64::INFINITY, f64::min);
        let fv = f.marginal_gain(v, &s).expect("v ∉ S");
        check.record(best >= fv - div - TOL, || {
            format!("v={v} V'={kept:?} S={s:?}: {best} < {fv} − {div}")
        });
    }
    check
}

/// `g[u] ≤ f({u})` and `w_uu = −g[u] ≤ 0`.
pub fn global_gains(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("g[u] ≤ f(u), w_uu = −g[u] ≤ 0");
    for i in 0..instances {
        let s = seed.wrapping_add(i as u64);
        let n = rng(s, 800).gen_range(2..=30);
        let f = mixed_instance(n, s);
        let w = GraphWeights::new(&f, &all(n)).expect("valid instance");
        for u in 0..n {
            let g = w.globals()[u];
            let ok = g <= f.singleton(u) + TOL && w.edge_weight(u, u) == -g && -g <= 0.0;
            check.record(ok, || {
                format!("instance {i} u={u}: g={g}, f(u)={}", f.singleton(u))
            });
        }
    }
    check
}

/// Square-root coverage or facility location small enough for exhaustive `h`.
fn h_instance(index: usize, seed: u64, max_n: usize) -> Objective {
    let s = seed.wrapping_add(index as u64);
    let n = rng(s, 900).gen_range(3..=max_n);
    if index % 2 == 0 {
        feature_instance(n, s)
    } else {
        facility_instance(n, s)
    }
}

/// Exhaustive submodularity of `h` on every `ε` of a 5-point grid, plus
/// `h(V) = 0` and monotonicity in `ε` for every fixed `V′`.
pub fn h_properties(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("h submodular, h(V)=0, monotone in ε");
    for i in 0..instances {
        let f = h_instance(i, seed, 8);
        let n = f.n_elements();
        let w = GraphWeights::new(&f, &all(n)).expect("valid instance");
        let grid = epsilon_grid(&w);
        let mut previous: Option<Vec<usize>> = None;
        for &eps in &grid {
            let inst = SparsificationInstance::new(w.clone(), eps).expect("finite ε");
            let table: Vec<usize> = (0..1usize << n)
                .map(|mask| inst.h_value(&members(mask, n)).expect("valid set"))
                .collect();
            check.record(table[(1 << n) - 1] == 0, || {
                format!("instance {i} ε={eps}: h(V) ≠ 0")
            });
            for a in 0..1usize << n {
                for b in (0..1usize << n).filter(|b| b & a == a) {
                    for v in (0..n).filter(|v| b & (1 << v) == 0) {
                        let da = table[a | 1 << v] as i64 - table[a] as i64;
                        let db = table[b | 1 << v] as i64 - table[b] as i64;
                        check.record(da >= db, || {
                            format!(
                                "instance {i} ε={eps}: A={:?} B={:?} v={v}",
                                members(a, n),
                                members(b, n)
                            )
                        });
                    }
                }
            }
            if let Some(prev) = &previous {
                for mask in 0..1usize << n {
                    check.record(table[mask] >= prev[mask], || {
                        format!(
                            "instance {i}: h({:?}) decreased as ε grew to {eps}",
                            members(mask, n)
                        )
                    });
                }
            }
            previous = Some(table);
        }
    }
    check
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|v| mask & (1 << v) != 0).collect()
}

/// Greedy on the completed cover of `V*` reaches `(1 − 1/e)(OPT − kε)`
/// whenever that cover has at least `k` elements.
pub fn cover_bound(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("greedy on V* ≥ (1−1/e)(OPT − kε)");
    let mut skipped = 0;
    for i in 0..instances {
        let f = h_instance(i, seed.wrapping_add(7), 10);
        let n = f.n_elements();
        let k = rng(seed, 1000 + i as u64).gen_range(1..=3.min(n));
        let opt = brute_force_max(&f, &all(n), k)
            .expect("small instance")
            .value;
        let w = GraphWeights::new(&f, &all(n)).expect("valid instance");
        for eps in epsilon_grid(&w) {
            let inst = SparsificationInstance::new(w.clone(), eps).expect("finite ε");
            let (vstar, _) = exact_sparsifier_optimum(&inst).expect("small instance");
            let cover = inst.complete_cover(&vstar).expect("valid set");
            if cover.len() < k {
                skipped += 1;
                continue;
            }
            let value = greedy(&f, &cover, k).expect("valid ground").value;
            let bound = (1.0 - 1.0 / E) * (opt - k as f64 * eps);
            check.record(value >= bound - TOL, || {
                format!("instance {i} ε={eps} k={k}: greedy on {cover:?} = {value} < {bound}")
            });
        }
    }
    if check.detail.is_empty() {
        check.detail = format!("{skipped} (instance, ε) pairs skipped with |V*| < k");
    }
    check
}

/// `⌊(1 − 1/√c)·rest⌋` removed after sampling `min(|V|, ⌈r·log₂ n⌉)`, while
/// `|V| > r·log₂ n`. Returns `(size_before, sample, removed, kept)` per round.
pub fn size_recursion(n: usize, r: f64, c: f64) -> Vec<(usize, usize, usize, usize)> {
    let budget = r * (n as f64).log2();
    let s = budget.ceil() as usize;
    let mut size = n;
    let mut out = Vec::new();
    while size as f64 > budget {
        let sample = s.min(size);
        let rest = size - sample;
        let removed = ((1.0 - 1.0 / c.sqrt()) * rest as f64).floor() as usize;
        out.push((size, sample, removed, rest - removed));
        size = rest - removed;
    }
    out
}

fn clustered(n: usize, seed: u64) -> Objective {
    let cfg = SynthConfig {
        n_elements: n,
        n_features: 400,
        nnz_per_element: 12,
        weight_law: WeightLaw::Uniform,
        cluster_count: 16,
        noise: 0.2,
        seed,
    };
    Objective::feature_sqrt(generate_synthetic(&cfg).expect("valid config"))
}

/// Recorded sizes equal [`size_recursion`], the iteration count stays within
/// `⌈log₂ n / log₂ √c⌉ + 1`, each round removes within one element of
/// `(1 − 1/√c)` of the unsampled rest, and removed divergences never exceed
/// kept ones.
pub fn sparsify_bookkeeping(sizes: &[usize], rs: &[f64], c: f64, seed: u64) -> Check {
    let mut check = Check::new("sparsify trace bookkeeping");
    let fraction = 1.0 - 1.0 / c.sqrt();
    for &n in sizes {
        let f = clustered(n, seed);
        for &r in rs {
            let cfg = SparsifierConfig {
                r,
                c,
                seed,
                ..SparsifierConfig::default()
            };
            let (vprime, trace) = sparsify(&f, &all(n), &cfg).expect("valid config");
            let recorded: Vec<_> = trace
                .iterations
                .iter()
                .map(|it| {
                    (
                        it.size_before,
                        it.sample_size,
                        it.removed_count,
                        it.kept_size,
                    )
                })
                .collect();
            let expected = size_recursion(n, r, c);
            check.record(recorded == expected, || {
                format!("n={n} r={r}: trace {recorded:?} vs {expected:?}")
            });
            let bound = ((n as f64).log2() / c.sqrt().log2()).ceil() as usize + 1;
            check.record(trace.iterations.len() <= bound, || {
                format!(
                    "n={n} r={r}: {} iterations > {bound}",
                    trace.iterations.len()
                )
            });
            for it in &trace.iterations {
                let rest = it.size_before - it.sample_size;
                check.record(
                    (it.removed_count as f64 - fraction * rest as f64).abs() < 1.0,
                    || format!("n={n} r={r}: removed {} of {rest}", it.removed_count),
                );
                if let (Some(hi), Some(lo)) = (it.max_removed_divergence, it.min_kept_divergence) {
                    check.record(hi <= lo, || {
                        format!("n={n} r={r}: removed divergence {hi} > kept {lo}")
                    });
                }
            }
            let sampled: usize = trace.iterations.iter().map(|it| it.sample_size).sum();
            let residual = trace.iterations.last().map_or(n, |it| it.kept_size);
            check.record(vprime.len() == sampled + residual, || {
                format!(
                    "n={n} r={r}: |V'| = {} vs {sampled} + {residual}",
                    vprime.len()
                )
            });
        }
    }
    check
}

pub fn sparsify_determinism(seed: u64) -> Check {
    let mut check = Check::new("sparsify determinism");
    let f = clustered(1500, seed);
    for sampling in [
        subsparse_core::Sampling::Uniform,
        subsparse_core::Sampling::Importance,
    ] {
        let cfg = SparsifierConfig {
            r: 3.0,
            seed,
            sampling,
            ..SparsifierConfig::default()
        };
        let a = sparsify(&f, &all(1500), &cfg).expect("valid config");
        let b = sparsify(&f, &all(1500), &cfg).expect("valid config");
        check.record(a == b, || format!("{sampling:?}: traces differ"));
    }
    check
}

/// Sieve reaches `(0.5 − 0.1)·OPT` and never holds more than
/// `n_thresholds·k` ids.
pub fn sieve_guarantee(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("sieve ≥ 0.4·OPT, memory ≤ 50k");
    let cfg = SieveConfig::default();
    for i in 0..instances {
        let mut r = rng(seed, 1100 + i as u64);
        let n = r.gen_range(2..=10);
        let k = r.gen_range(1..=4.min(n));
        let f = mixed_instance(n, seed.wrapping_add(i as u64));
        let mut stream = all(n);
        stream.shuffle(&mut r);
        let mut sieve = Sieve::new(&f, k, cfg).expect("valid budget");
        let mut peak = 0;
        for &v in &stream {
            sieve.push(v).expect("valid element");
            peak = peak.max(sieve.retained());
        }
        let peak = peak.max(sieve.peak_retained());
        let value = sieve.finish().value;
        let opt = brute_force_max(&f, &all(n), k)
            .expect("small instance")
            .value;
        check.record(
            value >= 0.4 * opt - TOL && peak <= cfg.n_thresholds * k,
            || format!("instance {i}: value {value} vs OPT {opt}, peak {peak}"),
        );
    }
    check
}

/// Deterministic double greedy reaches a third of `max h`; the randomized
/// variant averages at least 0.45 of it over `seeds` seeds.
pub fn double_greedy_on_h(instances: usize, seeds: u64, seed: u64) -> (Check, Check) {
    let mut det = Check::new("double greedy (det) ≥ max h / 3");
    let mut rand = Check::new("double greedy (rand) mean ≥ 0.45·max h");
    for i in 0..instances {
        let f = h_instance(i, seed.wrapping_add(11), 8);
        let n = f.n_elements();
        let w = GraphWeights::new(&f, &all(n)).expect("valid instance");
        for eps in epsilon_grid(&w) {
            let inst = SparsificationInstance::new(w.clone(), eps).expect("finite ε");
            let (vstar, _) = exact_sparsifier_optimum(&inst).expect("small instance");
            let best = inst.h_value(&vstar).expect("valid set") as f64;
            let d = double_greedy(&inst, &all(n), DoubleGreedyMode::Deterministic)
                .expect("valid ground");
            let dv = inst.value_of(&d);
            det.record(dv >= best / 3.0 - TOL, || {
                format!("instance {i} ε={eps}: {dv} < {best}/3")
            });
            let total: f64 = (0..seeds)
                .map(|s| {
                    let mode = DoubleGreedyMode::Randomized {
                        seed: seed.wrapping_add(s),
                    };
                    inst.value_of(&double_greedy(&inst, &all(n), mode).expect("valid ground"))
                })
                .sum();
            let mean = total / seeds as f64;
            rand.record(mean >= 0.45 * best - TOL, || {
                format!("instance {i} ε={eps}: mean {mean} vs max {best}")
            });
        }
    }
    (det, rand)
}

/// Greedy on the pre-pruned ground set selects the same value as on `V`.
pub fn pre_prune_safety(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("pre-prune keeps greedy value");
    let mut removed = 0;
    for i in 0..instances {
        let mut r = rng(seed, 1200 + i as u64);
        let n = r.gen_range(2..=12);
        let k = r.gen_range(1..=n.min(5));
        let f = mixed_instance(n, seed.wrapping_add(i as u64));
        let full = greedy(&f, &all(n), k).expect("valid instance").value;
        let kept = pre_prune(&f, &all(n), k).expect("valid budget");
        removed += n - kept.len();
        let pruned = greedy(&f, &kept, k).expect("valid ground").value;
        check.record(pruned == full, || {
            format!("instance {i} k={k}: {pruned} vs {full}, kept {kept:?}")
        });
    }
    if check.detail.is_empty() {
        check.detail = format!("{removed} elements pruned in total");
    }
    check
}

/// Every element `post_reduce` drops has divergence at most `ε` from the
/// result.
pub fn post_reduce_guarantee(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("post-reduce covers dropped elements");
    for i in 0..instances {
        let f = h_instance(i, seed.wrapping_add(13), 10);
        let n = f.n_elements();
        let w = GraphWeights::new(&f, &all(n)).expect("valid instance");
        for eps in epsilon_grid(&w) {
            let kept = post_reduce(&f, &all(n), eps, seed).expect("small ground");
            for v in (0..n).filter(|v| !kept.contains(v)) {
                let div = w.divergence(&kept, v).expect("nonempty result");
                check.record(div <= eps, || {
                    format!("instance {i} ε={eps}: w(V'', {v}) = {div}")
                });
            }
        }
    }
    check
}

/// The three worked examples, then bounds on random token lists.
pub fn rouge(samples: usize, seed: u64) -> Check {
    let mut check = Check::new("rouge-2 examples and bounds");
    let same = rouge2(&["a", "b", "c"], &["a", "b", "c"]);
    check.record(same.recall == 1.0 && same.f1 == 1.0, || {
        format!("identity: {same:?}")
    });
    let half = rouge2(&["a", "b", "c"], &["a", "b", "d"]);
    check.record(half.recall == 0.5 && half.f1 == 0.5, || {
        format!("abc vs abd: {half:?}")
    });
    let none = rouge2(&["a", "b"], &["c", "d"]);
    check.record(none.recall == 0.0 && none.f1 == 0.0, || {
        format!("disjoint: {none:?}")
    });
    let mut r = rng(seed, 1300);
    for _ in 0..samples {
        let cand: Vec<u8> = (0..r.gen_range(0..12)).map(|_| r.gen_range(0..4)).collect();
        let refr: Vec<u8> = (0..r.gen_range(0..12)).map(|_| r.gen_range(0..4)).collect();
        let s = rouge2(&cand, &refr);
        let ok = (0.0..=1.0).contains(&s.recall)
            && (0.0..=1.0).contains(&s.precision)
            && s.f1 <= 2.0 * s.recall.min(s.precision) + TOL
            && rouge2(&refr, &cand).f1 == s.f1;
        check.record(ok, || format!("{cand:?} vs {refr:?}: {s:?}"));
    }
    check
}

/// TF-IDF output satisfies the matrix invariants and the smoothed-idf formula
/// on generated corpora.
pub fn tfidf(instances: usize, seed: u64) -> Check {
    let mut check = Check::new("tf-idf weights");
    let words = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"];
    for i in 0..instances {
        let mut r = rng(seed, 1400 + i as u64);
        let text: String = (0..r.gen_range(1..8))
            .map(|_| {
                let len = r.gen_range(1..6);
                let body: Vec<&str> = (0..len)
                    .map(|_| *words.choose(&mut r).expect("nonempty"))
                    .collect();
                format!("{}. ", body.join(" "))
            })
            .collect();
        let corpus = Corpus {
            documents: vec![Document::from_text("d", &text)],
            reference_summaries: None,
        };
        let t = tfidf_featurize(&corpus).expect("nonempty vocabulary");
        let sentences: Vec<_> = corpus.sentences().collect();
        let big_n = sentences.len() as f64;
        for (v, f, w) in t.matrix.entries() {
            let term = &t.vocabulary[f];
            let tf = sentences[v].iter().filter(|tok| *tok == term).count() as f64;
            let df = sentences.iter().filter(|s| s.contains(term)).count() as f64;
            let expected = tf * (1.0 + big_n / df).ln();
            check.record(w > 0.0 && (w - expected).abs() <= TOL, || {
                format!("{text:?} ({v}, {term}): {w} vs {expected}")
            });
        }
    }
    check
}

/// Every suite; `quick` shrinks instance counts roughly tenfold.
pub fn run_suite(quick: bool, seed: u64) -> Vec<Check> {
    let m = |full: usize| if quick { (full / 10).max(2) } else { full };
    let lazy = lazy_eager(m(100), seed);
    let (det, rand) = double_greedy_on_h(m(50), if quick { 50 } else { 500 }, seed);
    let triples = if quick { 4 } else { 20 };
    vec![
        gain_context(m(100), seed),
        global_gains(m(100), seed),
        greedy_guarantee(m(200), seed),
        lazy.same_sequence,
        lazy.fewer_evals,
        conditioning_monotone(m(10_000), seed),
        marginal_gain_bound(m(10_000), seed),
        triangle_inequality(triples, seed, Triples::MiddleDistinct),
        pruning_price(m(5_000), seed),
        h_properties(m(50), seed),
        cover_bound(m(50), seed),
        sparsify_bookkeeping(
            if quick {
                &[512, 1024]
            } else {
                &[512, 1024, 4096]
            },
            &[2.0, 8.0],
            8.0,
            seed,
        ),
        sparsify_determinism(seed),
        sieve_guarantee(m(200), seed),
        det,
        rand,
        pre_prune_safety(m(200), seed),
        post_reduce_guarantee(m(30), seed),
        rouge(m(1000), seed),
        tfidf(m(50), seed),
    ]
}

const _: () = assert!(MAX_EXACT_SPARSIFIER_ELEMENTS >= 10);

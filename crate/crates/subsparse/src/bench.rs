//! Benchmark harness.
//!
//! Every (dataset, seed) cell runs eager greedy first; its value is the
//! baseline for the relative utility of every other row in the cell. `ss`
//! runs [`sparsify`] and then lazy greedy on the reduced set, timed together.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use subsparse_core::metrics::ratio;
use subsparse_core::{
    greedy, lazy_greedy, sieve_streaming, sparsify, SieveConfig, Solution, SparsifierConfig,
};

use crate::dataset::{Dataset, DatasetSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Greedy,
    LazyGreedy,
    Sieve,
    /// Sparsify, then lazy greedy on `V′`.
    Ss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub datasets: Vec<DatasetSpec>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// Budget; `None` takes each dataset's default.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Its `seed` is replaced by the run seed.
    #[serde(default)]
    pub sparsifier: SparsifierConfig,
    /// When nonempty, `ss` runs once per `r` and rows are labelled `ss_r{r}`.
    #[serde(default)]
    pub r_sweep: Vec<f64>,
    #[serde(default)]
    pub sieve: SieveConfig,
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Greedy, Algorithm::LazyGreedy, Algorithm::Ss]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Input("suite lists no datasets".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Input("suite lists no seeds".into()));
        }
        self.sparsifier.validate()?;
        for &r in &self.r_sweep {
            SparsifierConfig {
                r,
                ..self.sparsifier.clone()
            }
            .validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub dataset_id: String,
    pub n: usize,
    pub algorithm: String,
    pub k: usize,
    pub value: f64,
    /// `value / greedy value`; absent when the greedy value is zero.
    pub relative_utility: Option<f64>,
    pub vprime_size: Option<usize>,
    pub wall_time_s: f64,
    pub evals_used: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub dataset_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub tool: String,
    pub version: String,
    pub config: SuiteConfig,
    pub rows: Vec<BenchmarkRow>,
    pub failures: Vec<RowFailure>,
}

pub fn run_benchmark(cfg: &SuiteConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for spec in &cfg.datasets {
        for &seed in &cfg.seeds {
            let fail = |algorithm: &str, error: String| RowFailure {
                dataset_id: spec.id.clone(),
                algorithm: algorithm.into(),
                seed,
                error,
            };
            match spec.source.load(seed) {
                Ok(data) => run_cell(cfg, spec, &data, seed, &mut rows, &mut |a, e| {
                    failures.push(fail(a, e))
                }),
                Err(e) => failures.push(fail("load", e.to_string())),
            }
        }
    }
    rows.sort_by(|a, b| (&a.dataset_id, a.seed).cmp(&(&b.dataset_id, b.seed)));
    Ok(BenchmarkReport {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        rows,
        failures,
    })
}

fn run_cell(
    cfg: &SuiteConfig,
    spec: &DatasetSpec,
    data: &Dataset,
    seed: u64,
    rows: &mut Vec<BenchmarkRow>,
    fail: &mut dyn FnMut(&str, String),
) {
    let f = &data.objective;
    let n = data.n();
    let k = cfg.k.unwrap_or_else(|| data.default_k());
    let ground: Vec<usize> = (0..n).collect();
    let row =
        |algorithm: String, sol: &Solution, baseline: f64, vprime: Option<usize>, wall: f64| {
            BenchmarkRow {
                dataset_id: spec.id.clone(),
                n,
                algorithm,
                k,
                value: sol.value,
                relative_utility: ratio(sol.value, baseline),
                vprime_size: vprime,
                wall_time_s: wall,
                evals_used: sol.evals_used,
                seed,
            }
        };

    let baseline = match greedy(f, &ground, k) {
        Ok(sol) => sol,
        Err(e) => return fail("greedy", e.to_string()),
    };
    rows.push(row(
        "greedy".into(),
        &baseline,
        baseline.value,
        None,
        baseline.wall_time_s,
    ));

    for &algorithm in &cfg.algorithms {
        match algorithm {
            Algorithm::Greedy => {}
            Algorithm::LazyGreedy => match lazy_greedy(f, &ground, k) {
                Ok(sol) => rows.push(row(
                    "lazy_greedy".into(),
                    &sol,
                    baseline.value,
                    None,
                    sol.wall_time_s,
                )),
                Err(e) => fail("lazy_greedy", e.to_string()),
            },
            Algorithm::Sieve => match sieve_streaming(f, &ground, k, cfg.sieve) {
                Ok(sol) => rows.push(row(
                    "sieve".into(),
                    &sol,
                    baseline.value,
                    None,
                    sol.wall_time_s,
                )),
                Err(e) => fail("sieve", e.to_string()),
            },
            Algorithm::Ss => {
                let sweep = if cfg.r_sweep.is_empty() {
                    vec![None]
                } else {
                    cfg.r_sweep.iter().map(|&r| Some(r)).collect()
                };
                for r in sweep {
                    let label = r.map_or_else(|| "ss".to_string(), |r| format!("ss_r{r}"));
                    let sparse_cfg = SparsifierConfig {
                        r: r.unwrap_or(cfg.sparsifier.r),
                        seed,
                        ..cfg.sparsifier.clone()
                    };
                    let start = Instant::now();
                    let run = sparsify(f, &ground, &sparse_cfg)
                        .and_then(|(vprime, _)| Ok((lazy_greedy(f, &vprime, k)?, vprime.len())));
                    let wall = start.elapsed().as_secs_f64();
                    match run {
                        Ok((sol, size)) => {
                            rows.push(row(label, &sol, baseline.value, Some(size), wall))
                        }
                        Err(e) => fail(&label, e.to_string()),
                    }
                }
            }
        }
    }
}

impl BenchmarkReport {
    pub fn clear_timings(&mut self) {
        for row in &mut self.rows {
            row.wall_time_s = 0.0;
        }
    }

    /// Every row's relative utility recomputes from its value and the greedy
    /// row of the same cell, and greedy rows sit at exactly 1.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        for row in &self.rows {
            let greedy = self
                .rows
                .iter()
                .find(|g| {
                    g.algorithm == "greedy"
                        && g.dataset_id == row.dataset_id
                        && g.seed == row.seed
                        && g.k == row.k
                })
                .ok_or_else(|| format!("no greedy row for {} seed {}", row.dataset_id, row.seed))?;
            let expected = ratio(row.value, greedy.value);
            if row.relative_utility != expected {
                return Err(format!(
                    "{} {} seed {}: relative utility {:?}, recomputed {:?}",
                    row.dataset_id, row.algorithm, row.seed, row.relative_utility, expected
                ));
            }
            if row.algorithm == "greedy" && !matches!(row.relative_utility, Some(1.0) | None) {
                return Err(format!(
                    "greedy row for {} has relative utility {:?}",
                    row.dataset_id, row.relative_utility
                ));
            }
        }
        Ok(())
    }

    /// Header row plus one line per row, columns in field order.
    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for row in &self.rows {
            writer.serialize(row)?;
        }
        if self.rows.is_empty() {
            writer.write_record(CSV_COLUMNS)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

pub const CSV_COLUMNS: [&str; 10] = [
    "dataset_id",
    "n",
    "algorithm",
    "k",
    "value",
    "relative_utility",
    "vprime_size",
    "wall_time_s",
    "evals_used",
    "seed",
];

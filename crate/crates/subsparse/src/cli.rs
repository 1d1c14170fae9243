//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 for bad flags or input, 2 when a result breaks
//! a library invariant (including failing `validate` checks).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subsparse_core::synth::{generate_synthetic, SynthConfig};
use subsparse_core::{
    greedy, lazy_greedy, pre_prune, rouge2, sieve_streaming, sparsify, Objective, Rouge2, Sampling,
    SetFunction, SieveConfig, Solution, SparsifierConfig,
};

use crate::audit;
use crate::bench::{run_benchmark, SuiteConfig};
use crate::dataset::{self, Dataset, DatasetSource};
use crate::error::{Error, Result};
use crate::io;
use crate::validate;

#[derive(Debug, Parser)]
#[command(
    name = "subsparse",
    version,
    about = "Submodular sparsification and summarization"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "SUBSPARSE_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Zero every wall-clock field so outputs are byte-reproducible.
    #[arg(long, global = true)]
    pub no_timings: bool,

    /// More logging; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Featurize a corpus or generate a synthetic matrix, writing the triple format.
    Ingest(IngestArgs),
    /// Run the sparsifier and write its trace.
    Sparsify(SparsifyArgs),
    /// Select a summary, optionally after pre-pruning and sparsification.
    Summarize(SummarizeArgs),
    /// Run a benchmark suite.
    Benchmark(BenchmarkArgs),
    /// Run the property suite and print a pass/fail table.
    Validate(ValidateArgs),
    /// Dump sampled edge weights of the submodularity graph as CSV.
    GraphAudit(AuditArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Feature matrix file; a `.csv` extension reads a similarity matrix instead.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Corpus directory with `docs/` and optional `refs/`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Synthetic generator config (JSON).
    #[arg(long)]
    pub synth: Option<PathBuf>,
}

impl InputArgs {
    fn source(&self) -> Result<DatasetSource> {
        if let Some(path) = &self.input {
            let path = path.clone();
            return Ok(if path.extension().is_some_and(|x| x == "csv") {
                DatasetSource::Similarity { path }
            } else {
                DatasetSource::Matrix { path }
            });
        }
        if let Some(path) = &self.corpus {
            return Ok(DatasetSource::Corpus { path: path.clone() });
        }
        let path = self
            .synth
            .as_ref()
            .ok_or_else(|| Error::Input("no input given".into()))?;
        Ok(DatasetSource::Synth {
            config: io::load_json::<SynthConfig>(path)?,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Feature matrix destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Vocabulary destination, one term per line in feature order (corpora only).
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Manifest destination; stdout when absent.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingArg {
    Uniform,
    Importance,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Uniform => Sampling::Uniform,
            SamplingArg::Importance => Sampling::Importance,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SparsifierArgs {
    #[arg(long, default_value_t = 8.0)]
    pub r: f64,
    #[arg(long, default_value_t = 8.0)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = SamplingArg::Uniform)]
    pub sampling: SamplingArg,
    /// Drop elements that cannot enter a size-`k` greedy solution first.
    #[arg(long, requires = "k")]
    pub pre_prune: bool,
    /// Shrink the output further, keeping every dropped element within this divergence.
    #[arg(long)]
    pub post_reduce_eps: Option<f64>,
}

impl SparsifierArgs {
    fn config(&self, seed: u64, k: Option<usize>) -> SparsifierConfig {
        SparsifierConfig {
            r: self.r,
            c: self.c,
            seed,
            sampling: self.sampling.into(),
            pre_prune_k: if self.pre_prune { k } else { None },
            post_reduce: self.post_reduce_eps,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SparsifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sparsifier: SparsifierArgs,
    /// Budget used by `--pre-prune`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Trace destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reduced ground set, one id per line.
    #[arg(long)]
    pub out_set: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Greedy,
    Lazy,
    Sieve,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Budget; defaults to the reference summary length, else ⌈0.15·n⌉.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Algo::Lazy)]
    pub algo: Algo,
    /// Run the sparsifier before maximizing.
    #[arg(long)]
    pub sparsify: bool,
    #[command(flatten)]
    pub sparsifier: SparsifierArgs,
    #[arg(long, default_value_t = 50)]
    pub thresholds: usize,
    /// Solution destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchmarkArgs {
    /// Suite config (JSON).
    #[arg(long)]
    pub suite: PathBuf,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV report destination.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    /// Roughly a tenth of the full instance counts.
    #[arg(long)]
    pub quick: bool,
    /// JSON results destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuditArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What every JSON artifact carries besides its payload.
#[derive(Serialize)]
struct Envelope<'a, C: Serialize, P: Serialize> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    seed: u64,
    config: &'a C,
    #[serde(flatten)]
    payload: P,
}

fn envelope<'a, C: Serialize, P: Serialize>(
    command: &'a str,
    seed: u64,
    config: &'a C,
    payload: P,
) -> String {
    io::to_json(&Envelope {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
        payload,
    })
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return parse_exit_code(&e);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Help and version requests succeed; every other parse failure is an input error.
fn parse_exit_code(e: &clap::Error) -> i32 {
    i32::from(e.use_stderr())
}

pub fn run(cli: &Cli) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cli.threads > 0 {
        builder = builder.num_threads(cli.threads);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Ingest(args) => ingest(args, seed),
        Command::Sparsify(args) => run_sparsify(args, seed),
        Command::Summarize(args) => summarize(args, seed, cli.no_timings),
        Command::Benchmark(args) => benchmark(args, cli.seed, cli.no_timings),
        Command::Validate(args) => run_validate(args, seed),
        Command::GraphAudit(args) => graph_audit(args, seed),
    }
}

fn ingest(args: &IngestArgs, seed: u64) -> Result<i32> {
    #[derive(Serialize)]
    struct Manifest {
        n_elements: usize,
        n_features: usize,
        nnz: usize,
        matrix: PathBuf,
        documents: Option<usize>,
        vocabulary: Option<usize>,
    }
    let (matrix, documents, vocabulary) = match args.input.source()? {
        DatasetSource::Corpus { path } => {
            let data = dataset::from_corpus(io::load_corpus(&path)?)?;
            let text = data.text.expect("corpus datasets carry text");
            if let Some(vocab) = &args.vocab {
                let mut lines = text.tfidf.vocabulary.join("\n");
                lines.push('\n');
                std::fs::write(vocab, lines).map_err(|e| Error::io(vocab, e))?;
            }
            (
                text.tfidf.matrix,
                Some(text.corpus.documents.len()),
                Some(text.tfidf.vocabulary.len()),
            )
        }
        DatasetSource::Synth { config } => {
            let config = SynthConfig {
                seed: config.seed.wrapping_add(seed),
                ..config
            };
            (generate_synthetic(&config)?, None, None)
        }
        DatasetSource::Matrix { path } => (io::load_feature_matrix(&path)?, None, None),
        DatasetSource::Similarity { .. } => {
            return Err(Error::Input(
                "ingest produces feature matrices; similarity input has none".into(),
            ))
        }
    };
    io::save_feature_matrix(&matrix, &args.out)?;
    let manifest = Manifest {
        n_elements: matrix.n_elements(),
        n_features: matrix.n_features(),
        nnz: matrix.nnz(),
        matrix: args.out.clone(),
        documents,
        vocabulary,
    };
    io::write_output(
        args.manifest.as_deref(),
        &envelope("ingest", seed, args, manifest),
    )?;
    Ok(0)
}

fn load(input: &InputArgs, seed: u64) -> Result<Dataset> {
    input.source()?.load(seed)
}

fn run_sparsify(args: &SparsifyArgs, seed: u64) -> Result<i32> {
    let data = load(&args.input, seed)?;
    let n = data.n();
    let cfg = args.sparsifier.config(seed, args.k);
    let ground: Vec<usize> = (0..n).collect();
    let (vprime, trace) = sparsify(&data.objective, &ground, &cfg)?;
    check_subset(&vprime, n, "sparsify output")?;
    #[derive(Serialize)]
    struct Payload<'a> {
        resolved: &'a SparsifierConfig,
        n: usize,
        vprime_size: usize,
        trace: &'a subsparse_core::PruneTrace,
    }
    let payload = Payload {
        resolved: &cfg,
        n,
        vprime_size: vprime.len(),
        trace: &trace,
    };
    io::write_output(
        args.out.as_deref(),
        &envelope("sparsify", seed, args, payload),
    )?;
    if let Some(path) = &args.out_set {
        write_ids(path, &vprime)?;
    }
    Ok(0)
}

fn write_ids(path: &Path, ids: &[usize]) -> Result<()> {
    let text: String = ids.iter().map(|v| format!("{v}\n")).collect();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn check_subset(ids: &[usize], n: usize, what: &str) -> Result<()> {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ids.len() || sorted.last().is_some_and(|&v| v >= n) {
        return Err(Error::Invariant(format!(
            "{what} is not a set of distinct ground elements"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct RougeReport {
    per_reference: Vec<Rouge2>,
    mean_recall: f64,
    mean_f1: f64,
}

fn summarize(args: &SummarizeArgs, seed: u64, no_timings: bool) -> Result<i32> {
    let data = load(&args.input, seed)?;
    let f = &data.objective;
    let n = data.n();
    let k = args.k.unwrap_or_else(|| data.default_k());
    let ground: Vec<usize> = (0..n).collect();

    let mut candidates = ground.clone();
    if args.sparsifier.pre_prune {
        candidates = pre_prune(f, &candidates, k)?;
    }
    let pre_pruned_size = args.sparsifier.pre_prune.then_some(candidates.len());
    let mut sparsify_config = None;
    if args.sparsify {
        let cfg = SparsifierConfig {
            pre_prune_k: None,
            ..args.sparsifier.config(seed, Some(k))
        };
        candidates = sparsify(f, &candidates, &cfg)?.0;
        sparsify_config = Some(cfg);
    }
    check_subset(&candidates, n, "reduced ground set")?;

    let mut solution = maximize(f, &candidates, k, args.algo, args.thresholds)?;
    let mut baseline = if candidates.len() == n && args.algo != Algo::Sieve {
        solution.clone()
    } else {
        greedy(f, &ground, k)?
    };
    if solution.selected.len() > k {
        return Err(Error::Invariant(format!(
            "selected {} elements with budget {k}",
            solution.selected.len()
        )));
    }
    let recomputed = SetFunction::eval(f, &solution.selected)?;
    if (recomputed - solution.value).abs() > 1e-9 * (1.0 + recomputed.abs()) {
        return Err(Error::Invariant(format!(
            "reported value {} but f(S) = {recomputed}",
            solution.value
        )));
    }
    if no_timings {
        solution.wall_time_s = 0.0;
        baseline.wall_time_s = 0.0;
    }

    let mut summary = None;
    let mut rouge = None;
    if let Some(text) = &data.text {
        let tokens = text.tfidf.summary_tokens(&text.corpus, &solution.selected);
        let mut ids = solution.selected.clone();
        ids.sort_unstable();
        summary = Some(
            ids.iter()
                .map(|&v| {
                    let (d, s) = text.tfidf.origin[v];
                    text.corpus.documents[d].sentences[s].join(" ")
                })
                .collect::<Vec<_>>(),
        );
        if let Some(refs) = text
            .corpus
            .reference_summaries
            .as_ref()
            .filter(|r| !r.is_empty())
        {
            let per_reference: Vec<Rouge2> = refs
                .iter()
                .map(|r| {
                    let reference: Vec<&str> =
                        r.sentences.iter().flatten().map(String::as_str).collect();
                    rouge2(&tokens, &reference)
                })
                .collect();
            let m = per_reference.len() as f64;
            rouge = Some(RougeReport {
                mean_recall: per_reference.iter().map(|s| s.recall).sum::<f64>() / m,
                mean_f1: per_reference.iter().map(|s| s.f1).sum::<f64>() / m,
                per_reference,
            });
        }
    }

    #[derive(Serialize)]
    struct Payload {
        n: usize,
        k: usize,
        sparsifier: Option<SparsifierConfig>,
        pre_pruned_size: Option<usize>,
        candidate_size: usize,
        solution: Solution,
        greedy_value: f64,
        relative_utility: Option<f64>,
        summary: Option<Vec<String>>,
        rouge2: Option<RougeReport>,
    }
    let payload = Payload {
        n,
        k,
        sparsifier: sparsify_config,
        pre_pruned_size,
        candidate_size: candidates.len(),
        relative_utility: subsparse_core::relative_utility(&solution, &baseline),
        greedy_value: baseline.value,
        solution,
        summary,
        rouge2: rouge,
    };
    io::write_output(
        args.out.as_deref(),
        &envelope("summarize", seed, args, payload),
    )?;
    Ok(0)
}

fn maximize(
    f: &Objective,
    ground: &[usize],
    k: usize,
    algo: Algo,
    thresholds: usize,
) -> Result<Solution> {
    Ok(match algo {
        Algo::Greedy => greedy(f, ground, k)?,
        Algo::Lazy => lazy_greedy(f, ground, k)?,
        Algo::Sieve => sieve_streaming(
            f,
            ground,
            k,
            SieveConfig {
                n_thresholds: thresholds,
            },
        )?,
    })
}

fn benchmark(args: &BenchmarkArgs, seed: Option<u64>, no_timings: bool) -> Result<i32> {
    let mut suite: SuiteConfig = io::load_json(&args.suite)?;
    if let Some(seed) = seed {
        suite.seeds = vec![seed];
    }
    let mut report = run_benchmark(&suite)?;
    if no_timings {
        report.clear_timings();
    }
    report.check_consistency().map_err(Error::Invariant)?;
    for failure in &report.failures {
        log::warn!(
            "{} {} seed {}: {}",
            failure.dataset_id,
            failure.algorithm,
            failure.seed,
            failure.error
        );
    }
    io::write_output(args.out.as_deref(), &io::to_json(&report))?;
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv()).map_err(|e| Error::io(path, e))?;
    }
    Ok(0)
}

fn run_validate(args: &ValidateArgs, seed: u64) -> Result<i32> {
    let checks = validate::run_suite(args.quick, seed);
    for check in &checks {
        println!("{check}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!(
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if let Some(path) = &args.out {
        #[derive(Serialize)]
        struct Payload<'a> {
            checks: &'a [validate::Check],
        }
        io::write_output(
            Some(path),
            &envelope("validate", seed, args, Payload { checks: &checks }),
        )?;
    }
    Ok(if failed == 0 { 0 } else { 2 })
}

fn graph_audit(args: &AuditArgs, seed: u64) -> Result<i32> {
    let data = load(&args.input, seed)?;
    let edges = audit::sample_edges(&data.objective, args.samples, seed)?;
    let mut buf = Vec::new();
    audit::write_edges_csv(&edges, &mut buf).map_err(|source| Error::Csv {
        path: args.out.clone().unwrap_or_else(|| "<stdout>".into()),
        source,
    })?;
    io::write_output(
        args.out.as_deref(),
        &String::from_utf8(buf).expect("csv output is UTF-8"),
    )?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sparsify_flags() {
        let cli = Cli::try_parse_from([
            "subsparse",
            "sparsify",
            "--input",
            "m.txt",
            "--r",
            "4",
            "--c",
            "6",
            "--seed",
            "7",
            "--sampling",
            "importance",
            "--pre-prune",
            "--k",
            "3",
            "--post-reduce-eps",
            "0.5",
            "--threads",
            "2",
        ])
        .unwrap();
        assert_eq!((cli.seed, cli.threads), (Some(7), 2));
        let Command::Sparsify(args) = cli.command else {
            panic!()
        };
        let cfg = args.sparsifier.config(7, args.k);
        assert_eq!(cfg.pre_prune_k, Some(3));
        assert_eq!(cfg.sampling, Sampling::Importance);
        assert_eq!((cfg.r, cfg.c, cfg.post_reduce), (4.0, 6.0, Some(0.5)));
    }

    #[test]
    fn pre_prune_needs_k_and_inputs_are_exclusive() {
        assert!(
            Cli::try_parse_from(["subsparse", "sparsify", "--input", "m.txt", "--pre-prune"])
                .is_err()
        );
        assert!(Cli::try_parse_from([
            "subsparse",
            "sparsify",
            "--input",
            "m.txt",
            "--corpus",
            "d"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["subsparse", "sparsify"]).is_err());
    }

    #[test]
    fn bad_flags_exit_with_one() {
        let code = |args: &[&str]| parse_exit_code(&Cli::try_parse_from(args).unwrap_err());
        assert_eq!(code(&["subsparse", "sparsify", "--bogus"]), 1);
        assert_eq!(code(&["subsparse", "frobnicate"]), 1);
        assert_eq!(code(&["subsparse", "--help"]), 0);
        assert_eq!(code(&["subsparse", "--version"]), 0);
    }

    #[test]
    fn csv_inputs_are_similarities() {
        let args = InputArgs {
            input: Some("s.csv".into()),
            corpus: None,
            synth: None,
        };
        assert!(matches!(
            args.source().unwrap(),
            DatasetSource::Similarity { .. }
        ));
    }
}

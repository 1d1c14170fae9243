//! The thirteen acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stderr (bypassing output capture) and
//! then asserts. Tests take a shared lock so the timing comparison runs alone.

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use subsparse::bench::{run_benchmark, Algorithm, BenchmarkRow, SuiteConfig};
use subsparse::dataset::{DatasetSource, DatasetSpec};
use subsparse::validate::{self, Check, Triples};
use subsparse_core::synth::{SynthConfig, WeightLaw};
use subsparse_core::{rouge2, SieveConfig, SparsifierConfig};

static SERIAL: Mutex<()> = Mutex::new(());

const SEED: u64 = 2024;

fn verdict(criterion: u32, passed: bool, summary: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion {criterion:>2}: {verdict}  {summary}"
    );
}

fn report_checks(criterion: u32, checks: &[&Check]) {
    let passed = checks.iter().all(|c| c.passed());
    let summary: Vec<String> = checks
        .iter()
        .map(|c| {
            let mut s = format!("{} [{}/{} violations]", c.name, c.violations, c.cases);
            if !c.passed() && !c.detail.is_empty() {
                s.push_str(&format!(" ({})", c.detail));
            }
            s
        })
        .collect();
    verdict(criterion, passed, &summary.join("; "));
    for c in checks {
        assert!(c.passed(), "{c}");
    }
}

fn lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn criterion_01_greedy_guarantee() {
    let _guard = lock();
    let start = Instant::now();
    let check = validate::greedy_guarantee(200, SEED);
    let elapsed = start.elapsed().as_secs_f64();
    let passed = check.passed() && check.cases == 200 && elapsed < 60.0;
    verdict(
        1,
        passed,
        &format!(
            "{} violations in {} instances, {elapsed:.2} s",
            check.violations, check.cases
        ),
    );
    assert!(passed, "{check}; {elapsed} s");
}

#[test]
fn criterion_02_lazy_matches_eager() {
    let _guard = lock();
    let lazy = validate::lazy_eager(100, SEED);
    let saved = lazy.fewer_evals.cases - lazy.fewer_evals.violations;
    let share = saved as f64 / lazy.fewer_evals.cases as f64;
    let passed = lazy.same_sequence.passed() && lazy.same_sequence.cases == 100 && share >= 0.95;
    verdict(
        2,
        passed,
        &format!(
            "{}/100 identical sequences; lazy cheaper on {saved}/{} instances with n ≥ 50 ({:.1}%)",
            100 - lazy.same_sequence.violations,
            lazy.fewer_evals.cases,
            100.0 * share
        ),
    );
    assert!(passed, "{}; {}", lazy.same_sequence, lazy.fewer_evals);
}

#[test]
fn criterion_03_edge_weight_properties() {
    let _guard = lock();
    let l1 = validate::conditioning_monotone(10_000, SEED);
    let l2 = validate::marginal_gain_bound(10_000, SEED);
    let l3 = validate::triangle_inequality(20, SEED, Triples::All);
    report_checks(3, &[&l1, &l2, &l3]);
}

#[test]
fn criterion_04_h_is_submodular() {
    let _guard = lock();
    report_checks(4, &[&validate::h_properties(50, SEED)]);
}

#[test]
fn criterion_05_sparsifier_bound() {
    let _guard = lock();
    report_checks(5, &[&validate::cover_bound(50, SEED)]);
}

#[test]
fn criterion_06_sparsify_bookkeeping() {
    let _guard = lock();
    report_checks(
        6,
        &[&validate::sparsify_bookkeeping(
            &[512, 1024, 4096],
            &[2.0, 8.0],
            8.0,
            SEED,
        )],
    );
}

fn clustered(id: &str, n: usize) -> DatasetSpec {
    DatasetSpec {
        id: id.into(),
        source: DatasetSource::Synth {
            config: SynthConfig {
                n_elements: n,
                n_features: 2000,
                nnz_per_element: 20,
                weight_law: WeightLaw::Uniform,
                cluster_count: 20,
                noise: 0.2,
                seed: 100,
            },
        },
    }
}

fn rows<'a>(
    rows: &'a [BenchmarkRow],
    dataset: &'a str,
    algorithm: &'a str,
) -> impl Iterator<Item = &'a BenchmarkRow> {
    rows.iter()
        .filter(move |r| r.dataset_id == dataset && r.algorithm == algorithm)
}

#[test]
fn criterion_07_scaling_against_lazy_greedy() {
    let _guard = lock();
    let sizes = [2000, 5000, 10_000, 20_000];
    let suite = SuiteConfig {
        datasets: sizes
            .iter()
            .map(|&n| clustered(&format!("n{n:05}"), n))
            .collect(),
        algorithms: vec![Algorithm::LazyGreedy, Algorithm::Ss],
        k: Some(50),
        seeds: (0..20).collect(),
        sparsifier: SparsifierConfig {
            r: 8.0,
            c: 8.0,
            ..SparsifierConfig::default()
        },
        r_sweep: vec![],
        sieve: SieveConfig::default(),
    };
    let report = run_benchmark(&suite).expect("valid suite");
    assert!(report.failures.is_empty(), "{:?}", report.failures);

    let mut utility_ok = true;
    let mut lines = Vec::new();
    for &n in &sizes {
        let id = format!("n{n:05}");
        let lazy: Vec<&BenchmarkRow> = rows(&report.rows, &id, "lazy_greedy").collect();
        let ss: Vec<&BenchmarkRow> = rows(&report.rows, &id, "ss").collect();
        assert_eq!((lazy.len(), ss.len()), (20, 20));
        let rel: f64 = ss
            .iter()
            .zip(&lazy)
            .map(|(s, l)| s.value / l.value)
            .sum::<f64>()
            / 20.0;
        let vprime: f64 = ss
            .iter()
            .map(|s| s.vprime_size.unwrap() as f64)
            .sum::<f64>()
            / 20.0;
        let t_ss: f64 = ss.iter().map(|s| s.wall_time_s).sum::<f64>() / 20.0;
        let t_lazy: f64 = lazy.iter().map(|l| l.wall_time_s).sum::<f64>() / 20.0;
        utility_ok &= rel >= 0.95;
        lines.push(format!(
            "n={n}: rel {rel:.4}, |V'| {vprime:.0}, time ss {t_ss:.4} s vs lazy {t_lazy:.4} s"
        ));
    }
    let big: Vec<(f64, f64)> = rows(&report.rows, "n20000", "ss")
        .zip(rows(&report.rows, "n20000", "lazy_greedy"))
        .map(|(s, l)| (s.wall_time_s, l.wall_time_s))
        .collect();
    let faster = big.iter().filter(|(s, l)| s < l).count();
    let timing_ok = faster == big.len();
    verdict(
        7,
        utility_ok && timing_ok,
        &format!(
            "mean relative utility ≥ 0.95: {}; SS+lazy faster than lazy at n=20000 on {faster}/{} seeds; {}",
            if utility_ok { "yes" } else { "no" },
            big.len(),
            lines.join("; ")
        ),
    );
    assert!(utility_ok, "{lines:?}");
    assert!(
        timing_ok,
        "SS+lazy faster on only {faster}/{} seeds: {lines:?}",
        big.len()
    );
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        0.5 * (xs[m / 2 - 1] + xs[m / 2])
    }
}

#[test]
fn criterion_08_utility_against_sparsifier_size() {
    let _guard = lock();
    let rs: Vec<f64> = (1..=10).map(|i| 2.0 * i as f64).collect();
    let suite = SuiteConfig {
        datasets: vec![clustered("n2000", 2000)],
        algorithms: vec![Algorithm::Ss],
        k: Some(50),
        seeds: (0..20).collect(),
        sparsifier: SparsifierConfig::default(),
        r_sweep: rs.clone(),
        sieve: SieveConfig::default(),
    };
    let report = run_benchmark(&suite).expect("valid suite");
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    let mut curve: Vec<(f64, f64, f64)> = rs
        .iter()
        .map(|r| {
            let label = format!("ss_r{r}");
            let ss: Vec<&BenchmarkRow> = rows(&report.rows, "n2000", &label).collect();
            assert_eq!(ss.len(), 20);
            let size = median(ss.iter().map(|s| s.vprime_size.unwrap() as f64).collect());
            let rel = median(ss.iter().map(|s| s.relative_utility.unwrap()).collect());
            (size, rel, *r)
        })
        .collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.total_cmp(&b.2)));
    let monotone = curve
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 || w[1].0 == w[0].0);
    let at_largest_r = curve.iter().find(|c| c.2 == 20.0).unwrap().1;
    let passed = monotone && at_largest_r > 0.95;
    let points: Vec<String> = curve
        .iter()
        .map(|(s, u, r)| format!("r={r}: |V'|={s} rel={u:.4}"))
        .collect();
    verdict(
        8,
        passed,
        &format!(
            "median utility nondecreasing in |V'|: {monotone}; at r=20: {at_largest_r:.4}; {}",
            points.join(", ")
        ),
    );
    assert!(passed, "{points:?}");
}

#[test]
fn criterion_09_sieve_streaming() {
    let _guard = lock();
    report_checks(9, &[&validate::sieve_guarantee(200, SEED)]);
}

#[test]
fn criterion_10_double_greedy() {
    let _guard = lock();
    let (det, rand) = validate::double_greedy_on_h(50, 500, SEED);
    report_checks(10, &[&det, &rand]);
}

#[test]
fn criterion_11_pre_prune_safety() {
    let _guard = lock();
    report_checks(11, &[&validate::pre_prune_safety(200, SEED)]);
}

#[test]
fn criterion_12_rouge2() {
    let _guard = lock();
    let identity = rouge2(&["the", "cat", "sat"], &["the", "cat", "sat"]);
    let hand = rouge2(&["a", "b", "c"], &["a", "b", "d"]);
    let disjoint = rouge2(&["x", "y", "z"], &["a", "b", "c"]);
    let examples = (identity.recall, identity.f1) == (1.0, 1.0)
        && (hand.recall, hand.f1) == (0.5, 0.5)
        && (disjoint.recall, disjoint.f1) == (0.0, 0.0);
    let property = validate::rouge(10_000, SEED);
    let passed = examples && property.passed();
    verdict(
        12,
        passed,
        &format!(
            "hand examples exact: {examples}; bounds on {} random pairs: {} violations",
            property.cases, property.violations
        ),
    );
    assert!(passed, "{identity:?} {hand:?} {disjoint:?}; {property}");
}

fn subsparse(args: &[&str], dir: &Path) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_subsparse"))
        .args(args)
        .current_dir(dir)
        .env_remove("SUBSPARSE_THREADS")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn criterion_13_determinism_across_thread_counts() {
    let _guard = lock();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let synth = r#"{"n_elements": 6000, "n_features": 800, "nnz_per_element": 15, "cluster_count": 12, "noise": 0.2, "seed": 5}"#;
    std::fs::write(d.join("synth.json"), synth).unwrap();
    subsparse(
        &[
            "ingest",
            "--synth",
            "synth.json",
            "--out",
            "m.txt",
            "--manifest",
            "manifest.json",
        ],
        d,
    );
    let suite = r#"{
        "datasets": [
            {"id": "file", "kind": "matrix", "path": "m.txt"},
            {"id": "gen", "kind": "synth", "config": {"n_elements": 3000, "n_features": 500, "nnz_per_element": 10, "cluster_count": 8, "noise": 0.3}}
        ],
        "algorithms": ["greedy", "lazy_greedy", "sieve", "ss"],
        "k": 20,
        "seeds": [1, 2],
        "sparsifier": {"sampling": "importance"}
    }"#;
    std::fs::write(d.join("suite.json"), suite).unwrap();

    let mut outputs: Vec<(String, Vec<Vec<u8>>)> = Vec::new();
    let runs: [(&str, Vec<&str>); 3] = [
        (
            "sparsify",
            vec![
                "sparsify",
                "--input",
                "m.txt",
                "--seed",
                "7",
                "--out-set",
                "ids.txt",
            ],
        ),
        (
            "sparsify importance",
            vec![
                "sparsify",
                "--input",
                "m.txt",
                "--seed",
                "7",
                "--sampling",
                "importance",
                "--r",
                "4",
            ],
        ),
        (
            "benchmark",
            vec![
                "benchmark",
                "--suite",
                "suite.json",
                "--no-timings",
                "--csv",
                "report.csv",
            ],
        ),
    ];
    for (name, args) in &runs {
        let mut variants = Vec::new();
        for threads in ["1", "1", "8"] {
            let mut full = args.clone();
            full.extend(["--threads", threads]);
            let mut bytes = subsparse(&full, d);
            for side in ["ids.txt", "report.csv"] {
                if full.contains(&side) {
                    bytes.extend(std::fs::read(d.join(side)).unwrap());
                }
            }
            variants.push(bytes);
        }
        outputs.push((name.to_string(), variants));
    }
    let identical: Vec<(String, bool)> = outputs
        .iter()
        .map(|(name, v)| {
            (
                name.clone(),
                v.iter().all(|b| b == &v[0]) && !v[0].is_empty(),
            )
        })
        .collect();
    let passed = identical.iter().all(|(_, ok)| *ok);
    let summary: Vec<String> = identical
        .iter()
        .map(|(n, ok)| format!("{n}: {}", if *ok { "identical" } else { "DIFFERS" }))
        .collect();
    verdict(
        13,
        passed,
        &format!(
            "two runs at --threads 1 and one at --threads 8; {}",
            summary.join(", ")
        ),
    );
    assert!(passed, "{summary:?}");
}

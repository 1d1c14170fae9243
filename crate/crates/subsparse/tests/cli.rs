use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use subsparse::io::load_feature_matrix;
use subsparse_core::{greedy, Objective};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsparse"))
        .current_dir(dir)
        .env_remove("SUBSPARSE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn small_matrix(dir: &Path) {
    fs::write(
        dir.join("m.txt"),
        "# three elements\n3 2\n0 0 1.0\n1 0 1.0\n1 1 4.0\n2 1 1.0\n",
    )
    .unwrap();
}

fn synth_config(dir: &Path, n: usize) {
    let cfg = format!(
        r#"{{"n_elements": {n}, "n_features": 300, "nnz_per_element": 10, "cluster_count": 8, "noise": 0.2, "seed": 3}}"#
    );
    fs::write(dir.join("synth.json"), cfg).unwrap();
}

#[test]
fn summarize_matches_library_greedy() {
    let dir = tempfile::tempdir().unwrap();
    small_matrix(dir.path());
    let json = ok_json(
        dir.path(),
        &[
            "--no-timings",
            "summarize",
            "--input",
            "m.txt",
            "--k",
            "1",
            "--algo",
            "greedy",
        ],
    );
    assert_eq!(json["solution"]["selected"], serde_json::json!([1]));
    assert_eq!(json["solution"]["value"], 3.0);
    assert_eq!(json["relative_utility"], 1.0);

    let f = Objective::feature_sqrt(load_feature_matrix(&dir.path().join("m.txt")).unwrap());
    let sol = greedy(&f, &[0, 1, 2], 2).unwrap();
    let json = ok_json(
        dir.path(),
        &[
            "summarize",
            "--input",
            "m.txt",
            "--k",
            "2",
            "--algo",
            "greedy",
        ],
    );
    let selected: Vec<usize> =
        serde_json::from_value(json["solution"]["selected"].clone()).unwrap();
    assert_eq!(selected, sol.selected);
    assert_eq!(json["solution"]["value"].as_f64().unwrap(), sol.value);
}

#[test]
fn ingest_round_trips_a_synthetic_matrix() {
    let dir = tempfile::tempdir().unwrap();
    synth_config(dir.path(), 400);
    let manifest = ok_json(
        dir.path(),
        &[
            "--seed",
            "1",
            "ingest",
            "--synth",
            "synth.json",
            "--out",
            "m.txt",
        ],
    );
    assert_eq!(manifest["command"], "ingest");
    let matrix = load_feature_matrix(&dir.path().join("m.txt")).unwrap();
    assert_eq!(matrix.n_elements(), 400);
    let out = run(
        dir.path(),
        &[
            "--seed",
            "1",
            "ingest",
            "--input",
            "m.txt",
            "--out",
            "again.txt",
        ],
    );
    assert!(out.status.success());
    assert_eq!(
        fs::read(dir.path().join("m.txt")).unwrap(),
        fs::read(dir.path().join("again.txt")).unwrap()
    );
}

#[test]
fn corpus_summary_reports_rouge() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    fs::create_dir_all(c.join("docs")).unwrap();
    fs::create_dir_all(c.join("refs")).unwrap();
    fs::write(
        c.join("docs/a.txt"),
        "The river flooded the valley. Farmers moved uphill.",
    )
    .unwrap();
    fs::write(
        c.join("docs/b.txt"),
        "Rain fell for a week. The valley flooded after the rain.",
    )
    .unwrap();
    fs::write(c.join("refs/r.txt"), "The valley flooded after rain.").unwrap();
    let json = ok_json(dir.path(), &["summarize", "--corpus", "c", "--k", "2"]);
    assert_eq!(json["n"], 4);
    assert_eq!(json["summary"].as_array().unwrap().len(), 2);
    let recall = json["rouge2"]["mean_recall"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&recall));

    let out = run(
        dir.path(),
        &[
            "ingest",
            "--corpus",
            "c",
            "--out",
            "m.txt",
            "--vocab",
            "vocab.txt",
        ],
    );
    assert!(out.status.success());
    let vocab = fs::read_to_string(dir.path().join("vocab.txt")).unwrap();
    let terms: Vec<&str> = vocab.lines().collect();
    assert!(terms.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(
        load_feature_matrix(&dir.path().join("m.txt"))
            .unwrap()
            .n_features(),
        terms.len()
    );
}

#[test]
fn sparsify_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    synth_config(dir.path(), 1500);
    let args = [
        "--seed",
        "4",
        "--no-timings",
        "sparsify",
        "--synth",
        "synth.json",
        "--out-set",
        "set.txt",
    ];
    let a = run(dir.path(), &args);
    let set_a = fs::read(dir.path().join("set.txt")).unwrap();
    let b = run(dir.path(), &args);
    let set_b = fs::read(dir.path().join("set.txt")).unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(set_a, set_b);
    let ids: Vec<usize> = String::from_utf8(set_a)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert!(!ids.is_empty() && ids.len() < 1500);
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn graph_audit_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    small_matrix(dir.path());
    let out = run(
        dir.path(),
        &["graph-audit", "--input", "m.txt", "--samples", "25"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,w,global_gain_u"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn quick_validation_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["validate", "--quick"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "2 2\n0 0 1.0\n0 5 1.0\n").unwrap();
    let out = run(dir.path(), &["summarize", "--input", "bad.txt", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:3:"));
    assert_eq!(
        run(dir.path(), &["summarize", "--k", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

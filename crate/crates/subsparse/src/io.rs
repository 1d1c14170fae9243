//! File formats.
//!
//! Feature matrices are whitespace-separated text: a header
//! `n_elements n_features [nnz]`, then one `element feature weight` triple per
//! line. Blank lines and lines starting with `#` are skipped. When the header
//! carries the optional third field, the number of triples must equal it.
//!
//! Similarity matrices are headerless CSV, one row per element.
//!
//! A corpus is a directory holding `docs/*.txt` and optionally `refs/*.txt`,
//! one document per file, read in file-name order.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use subsparse_core::text::{Corpus, Document};
use subsparse_core::{FeatureMatrix, SimilarityMatrix};

use crate::error::{Error, Result};

pub fn load_feature_matrix(path: &Path) -> Result<FeatureMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_feature_matrix(BufReader::new(file), path)
}

/// Parses the triple format; `path` only labels errors.
pub fn read_feature_matrix(reader: impl BufRead, path: &Path) -> Result<FeatureMatrix> {
    let mut header: Option<(usize, usize, Option<usize>)> = None;
    let mut triples = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((n, nf, _)) = header else {
            if !(2..=3).contains(&fields.len()) {
                return Err(Error::parse(
                    path,
                    lineno,
                    "expected header `n_elements n_features [nnz]`",
                ));
            }
            let count = |s: &str, what: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(path, lineno, format!("{what} `{s}` is not a count")))
            };
            let nnz = fields.get(2).map(|s| count(s, "nnz")).transpose()?;
            header = Some((
                count(fields[0], "n_elements")?,
                count(fields[1], "n_features")?,
                nnz,
            ));
            continue;
        };
        let [v, f, w] = fields[..] else {
            return Err(Error::parse(
                path,
                lineno,
                "expected `element feature weight`",
            ));
        };
        let v: usize = v
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("element id `{v}` is not an index")))?;
        let f: usize = f
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("feature id `{f}` is not an index")))?;
        let w: f64 = w
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("weight `{w}` is not a number")))?;
        if v >= n {
            return Err(Error::parse(
                path,
                lineno,
                format!("element id {v} exceeds header count {n}"),
            ));
        }
        if f >= nf {
            return Err(Error::parse(
                path,
                lineno,
                format!("feature id {f} exceeds header count {nf}"),
            ));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::parse(
                path,
                lineno,
                format!("weight {w} must be finite and nonnegative"),
            ));
        }
        if !seen.insert((v, f)) {
            return Err(Error::parse(
                path,
                lineno,
                format!("duplicate entry for ({v}, {f})"),
            ));
        }
        triples.push((v, f, w));
    }
    let Some((n, nf, nnz)) = header else {
        return Err(Error::parse(path, 0, "missing header"));
    };
    if let Some(nnz) = nnz {
        if nnz != triples.len() {
            return Err(Error::parse(
                path,
                0,
                format!("header declares {nnz} entries, file has {}", triples.len()),
            ));
        }
    }
    Ok(FeatureMatrix::from_triples(n, nf, triples)?)
}

/// Writes the header with the entry count; weights use the shortest
/// representation that parses back to the same value.
pub fn write_feature_matrix(matrix: &FeatureMatrix, mut out: impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{} {} {}",
        matrix.n_elements(),
        matrix.n_features(),
        matrix.nnz()
    )?;
    for (v, f, w) in matrix.entries() {
        writeln!(out, "{v} {f} {w}")?;
    }
    out.flush()
}

pub fn save_feature_matrix(matrix: &FeatureMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_feature_matrix(matrix, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn load_similarity(path: &Path) -> Result<SimilarityMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let row = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|_| Error::parse(path, i + 1, format!("`{cell}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(SimilarityMatrix::from_rows(&rows)?)
}

pub fn save_similarity(sim: &SimilarityMatrix, path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    for i in 0..sim.n_elements() {
        writer
            .write_record(sim.row(i).iter().map(|x| x.to_string()))
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Reads `dir/docs/*.txt` and, if present, `dir/refs/*.txt`.
pub fn load_corpus(dir: &Path) -> Result<Corpus> {
    let documents = load_documents(&dir.join("docs"))?;
    let refs = dir.join("refs");
    let reference_summaries = if refs.is_dir() {
        Some(load_documents(&refs)?)
    } else {
        None
    };
    Ok(Corpus {
        documents,
        reference_summaries,
    })
}

fn load_documents(dir: &Path) -> Result<Vec<Document>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "txt") && p.is_file());
    paths.sort();
    paths.par_iter().map(|p| load_document(p)).collect()
}

pub fn load_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let doc = Document::from_text(id, &text);
    if doc.sentences.is_empty() {
        log::warn!("{}: no sentences", path.display());
    }
    Ok(doc)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes to `path`, or stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, contents).map_err(|e| Error::io(p, e)),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use subsparse_core::synth::{generate_synthetic, SynthConfig};
use subsparse_core::text::{tfidf_featurize, Corpus, Tfidf};
use subsparse_core::Objective;

use crate::error::Result;
use crate::io;

/// Where a ground set comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSource {
    /// Feature-matrix text file; square-root feature coverage.
    Matrix { path: PathBuf },
    /// Similarity CSV; facility location.
    Similarity { path: PathBuf },
    /// Corpus directory, TF-IDF featurized; square-root feature coverage.
    Corpus { path: PathBuf },
    /// Generated matrix; the run seed is added to `config.seed`.
    Synth { config: SynthConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub id: String,
    #[serde(flatten)]
    pub source: DatasetSource,
}

pub struct TextData {
    pub corpus: Corpus,
    pub tfidf: Tfidf,
}

pub struct Dataset {
    pub objective: Objective,
    pub text: Option<TextData>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.objective.n_elements()
    }

    /// Reference summary length when references exist, else `⌈0.15·n⌉`.
    pub fn default_k(&self) -> usize {
        self.text
            .as_ref()
            .and_then(|t| t.corpus.reference_length())
            .unwrap_or_else(|| (self.n() * 15).div_ceil(100))
    }
}

impl DatasetSource {
    pub fn load(&self, seed: u64) -> Result<Dataset> {
        Ok(match self {
            Self::Matrix { path } => plain(Objective::feature_sqrt(io::load_feature_matrix(path)?)),
            Self::Similarity { path } => {
                plain(Objective::facility_location(io::load_similarity(path)?))
            }
            Self::Corpus { path } => from_corpus(io::load_corpus(path)?)?,
            Self::Synth { config } => {
                let config = SynthConfig {
                    seed: config.seed.wrapping_add(seed),
                    ..config.clone()
                };
                plain(Objective::feature_sqrt(generate_synthetic(&config)?))
            }
        })
    }
}

fn plain(objective: Objective) -> Dataset {
    Dataset {
        objective,
        text: None,
    }
}

pub fn from_corpus(corpus: Corpus) -> Result<Dataset> {
    let tfidf = tfidf_featurize(&corpus)?;
    Ok(Dataset {
        objective: Objective::feature_sqrt(tfidf.matrix.clone()),
        text: Some(TextData { corpus, tfidf }),
    })
}

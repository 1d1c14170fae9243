//! Sentence splitting, tokenization and TF-IDF featurization.
//!
//! A sentence ends at `.`, `?` or `!` followed by whitespace or end of text.
//! Tokens are maximal runs of alphanumeric characters, lowercased. Sentences
//! without tokens are dropped.
//!
//! Weights are `tf · ln(1 + N / df)` with raw term counts, `N` the number of
//! sentences and `df` the number of sentences containing the term, so every
//! stored weight is strictly positive.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::ln;
use crate::objective::FeatureMatrix;
use crate::{ElementId, Error, Result};

pub type Sentence = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn from_text(doc_id: impl Into<String>, text: &str) -> Self {
        Self {
            doc_id: doc_id.into(),
            sentences: split_sentences(text),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    /// Human summaries, each split into sentences.
    #[serde(default)]
    pub reference_summaries: Option<Vec<Document>>,
}

impl Corpus {
    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    /// Sentences in element order: documents in order, sentences in order.
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> + '_ {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    /// Mean reference summary length in sentences, rounded, at least 1.
    pub fn reference_length(&self) -> Option<usize> {
        let refs = self
            .reference_summaries
            .as_ref()
            .filter(|r| !r.is_empty())?;
        let total: usize = refs.iter().map(|r| r.sentences.len()).sum();
        Some(((total + refs.len() / 2) / refs.len()).max(1))
    }
}

/// Lowercased alphanumeric tokens of `text`.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Tokenized sentences of `text`, empty sentences removed.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '?' | '!') {
            let at_boundary = chars.peek().map_or(true, |&(_, next)| next.is_whitespace());
            if at_boundary {
                let end = i + c.len_utf8();
                push_sentence(&mut out, &text[start..end]);
                start = end;
            }
        }
    }
    push_sentence(&mut out, &text[start..]);
    out
}

fn push_sentence(out: &mut Vec<Sentence>, raw: &str) {
    let tokens = tokenize(raw);
    if !tokens.is_empty() {
        out.push(tokens);
    }
}

/// A featurized corpus: one element per sentence, one feature per term.
#[derive(Debug, Clone, PartialEq)]
pub struct Tfidf {
    pub matrix: FeatureMatrix,
    /// Terms in ascending order; feature `j` is `vocabulary[j]`.
    pub vocabulary: Vec<String>,
    /// `(document index, sentence index)` of each element.
    pub origin: Vec<(usize, usize)>,
}

impl Tfidf {
    /// Concatenated tokens of the given sentences, in ascending element order.
    pub fn summary_tokens<'c>(&self, corpus: &'c Corpus, selected: &[ElementId]) -> Vec<&'c str> {
        let mut ids = selected.to_vec();
        ids.sort_unstable();
        ids.iter()
            .flat_map(|&v| {
                let (d, s) = self.origin[v];
                corpus.documents[d].sentences[s].iter().map(String::as_str)
            })
            .collect()
    }
}

pub fn tfidf_featurize(corpus: &Corpus) -> Result<Tfidf> {
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    let mut origin = Vec::new();
    let mut counts: Vec<BTreeMap<&str, usize>> = Vec::new();
    for (d, doc) in corpus.documents.iter().enumerate() {
        for (s, sentence) in doc.sentences.iter().enumerate() {
            let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
            for token in sentence {
                *tf.entry(token.as_str()).or_insert(0) += 1;
            }
            for term in tf.keys() {
                *df.entry(term).or_insert(0) += 1;
            }
            counts.push(tf);
            origin.push((d, s));
        }
    }
    if df.is_empty() {
        return Err(Error::Empty("vocabulary"));
    }
    let n = counts.len() as f64;
    let index: BTreeMap<&str, (usize, f64)> = df
        .iter()
        .enumerate()
        .map(|(j, (&term, &d))| (term, (j, ln(1.0 + n / d as f64))))
        .collect();
    let triples = counts.iter().enumerate().flat_map(|(v, tf)| {
        let index = &index;
        tf.iter().map(move |(term, &c)| {
            let (j, idf) = index[term];
            (v, j, c as f64 * idf)
        })
    });
    let matrix = FeatureMatrix::from_triples(counts.len(), df.len(), triples)?;
    let vocabulary = df.keys().map(|t| String::from(*t)).collect();
    Ok(Tfidf {
        matrix,
        vocabulary,
        origin,
    })
}

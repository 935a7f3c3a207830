//! Embedding similarity between query words and sentences.
//!
//! With unit query vectors stacked as rows of `Q` and sentence word vectors as
//! rows of `S`, `R = Q Sᵀ` holds every word-word cosine. The similarity of a
//! query word to the sentence is the maximum of its row of `R`; the query is
//! then summarized against the sentence by sum, idf-weighted sum, max and
//! idf-weighted max of those similarities (SS, SWS, MS, MWS).

use alloc::vec::Vec;

use crate::corpus::TokenStream;
use crate::embedding::EmbeddingTable;
use crate::{Error, Result};

pub const SEMANTIC_FEATURES: usize = 8;

pub const SEMANTIC_FEATURE_NAMES: [&str; SEMANTIC_FEATURES] = [
    "max_ss", "max_sws", "max_ms", "max_mws", "avg_ss", "avg_sws", "avg_ms", "avg_mws",
];

/// Row reduction applied to `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SimMode {
    /// Largest dot product.
    #[default]
    Max,
    /// Largest absolute dot product.
    InfNorm,
}

/// Dense row-major `m x n` matrix of word similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

impl SimilarityMatrix {
    /// `R = Q Sᵀ` for `dim`-wide row-major `q` and `s`.
    pub fn product(q: &[f64], s: &[f64], dim: usize) -> Self {
        let rows = q.len() / dim;
        let cols = s.len() / dim;
        let mut data = Vec::with_capacity(rows * cols);
        for qi in q.chunks_exact(dim) {
            for sj in s.chunks_exact(dim) {
                data.push(dot(qi, sj));
            }
        }
        Self { rows, cols, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn reduce_rows(&self, mode: SimMode) -> Vec<f64> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                match mode {
                    SimMode::Max => row.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    SimMode::InfNorm => row.iter().fold(0.0f64, |m, x| m.max(x.abs())),
                }
            })
            .collect()
    }
}

/// SS, SWS, MS and MWS of one query against one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SemanticAggregate {
    pub ss: f64,
    pub sws: f64,
    pub ms: f64,
    pub mws: f64,
}

impl SemanticAggregate {
    /// Aggregates per-word similarities with their idf weights.
    pub fn from_sims(sims: &[f64], idfs: &[f64]) -> Self {
        let mut agg = Self {
            ss: 0.0,
            sws: 0.0,
            ms: f64::NEG_INFINITY,
            mws: f64::NEG_INFINITY,
        };
        for (&s, &w) in sims.iter().zip(idfs) {
            agg.ss += s;
            agg.sws += s * w;
            agg.ms = agg.ms.max(s);
            agg.mws = agg.mws.max(s * w);
        }
        agg
    }

    fn as_array(&self) -> [f64; 4] {
        [self.ss, self.sws, self.ms, self.mws]
    }
}

pub fn word_sentence_sim(word: &[f64], sentence: &[&[f64]]) -> Result<f64> {
    if sentence.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(sentence
        .iter()
        .map(|s| dot(word, s))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Query vectors and their idf weights, looked up once per (query, stream).
pub struct QueryEmbedding {
    dim: usize,
    vectors: Vec<f64>,
    idfs: Vec<f64>,
}

impl QueryEmbedding {
    pub fn new<S: AsRef<str>>(query: &[S], table: &EmbeddingTable, idf: impl Fn(&str) -> f64) -> Self {
        let dim = table.dim();
        let mut vectors = Vec::with_capacity(query.len() * dim);
        let mut idfs = Vec::with_capacity(query.len());
        for q in query {
            vectors.extend_from_slice(&table.vector(q.as_ref()));
            idfs.push(idf(q.as_ref()));
        }
        Self { dim, vectors, idfs }
    }

    pub fn is_empty(&self) -> bool {
        self.idfs.is_empty()
    }

    pub fn against<S: AsRef<str>>(&self, sentence: &[S], table: &EmbeddingTable, mode: SimMode) -> Result<SemanticAggregate> {
        if self.is_empty() {
            return Err(Error::EmptyQuery);
        }
        if sentence.is_empty() {
            return Err(Error::EmptySentence);
        }
        let mut s = Vec::with_capacity(sentence.len() * self.dim);
        for w in sentence {
            s.extend_from_slice(&table.vector(w.as_ref()));
        }
        let r = SimilarityMatrix::product(&self.vectors, &s, self.dim);
        Ok(SemanticAggregate::from_sims(&r.reduce_rows(mode), &self.idfs))
    }
}

pub fn sentence_aggregates<S: AsRef<str>, T: AsRef<str>>(
    query: &[S],
    sentence: &[T],
    table: &EmbeddingTable,
    idf: impl Fn(&str) -> f64,
    mode: SimMode,
) -> Result<SemanticAggregate> {
    QueryEmbedding::new(query, table, idf).against(sentence, table, mode)
}

/// Max then mean over sentences of SS, SWS, MS, MWS. Streams without
/// sentences, and empty queries, give zeros.
pub fn stream_semantic_features(
    query: &QueryEmbedding,
    stream: &TokenStream,
    table: &EmbeddingTable,
    mode: SimMode,
) -> [f64; SEMANTIC_FEATURES] {
    let mut out = [0.0; SEMANTIC_FEATURES];
    if query.is_empty() {
        return out;
    }
    let mut max = [f64::NEG_INFINITY; 4];
    let mut sum = [0.0; 4];
    let mut count = 0usize;
    for sentence in stream.sentences.iter().filter(|s| !s.is_empty()) {
        let agg = query
            .against(sentence, table, mode)
            .expect("query and sentence are non-empty")
            .as_array();
        for k in 0..4 {
            max[k] = max[k].max(agg[k]);
            sum[k] += agg[k];
        }
        count += 1;
    }
    if count == 0 {
        return out;
    }
    for k in 0..4 {
        out[k] = max[k];
        out[4 + k] = sum[k] / count as f64;
    }
    out
}

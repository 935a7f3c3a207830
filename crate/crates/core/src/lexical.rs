//! Corpus statistics and the frequency-based query-stream features:
//! summed TF, IDF and TF-IDF, Okapi BM25, and query log-likelihood under
//! Jelinek-Mercer, Dirichlet and absolute-discount smoothing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Document, StreamKind, TextConfig, TokenStream, Tokenization};
use crate::{Error, Result};

/// Number of features produced by [`lexical_features`].
pub const LEXICAL_FEATURES: usize = 7;

pub const LEXICAL_FEATURE_NAMES: [&str; LEXICAL_FEATURES] = [
    "sum_tf",
    "sum_idf",
    "sum_tfidf",
    "bm25",
    "lmir_jm",
    "lmir_dir",
    "lmir_abs",
];

/// Denominator used by absolute discounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AbsDenominator {
    /// Document length, as in the usual absolute discounting estimate.
    #[default]
    DocLength,
    /// Sum over query tokens of their in-document counts.
    QueryTermCount,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LexicalParams {
    pub k1: f64,
    pub k3: f64,
    pub b: f64,
    pub lambda_jm: f64,
    pub mu_dir: f64,
    pub delta_abs: f64,
    /// Probabilities below this value are raised to it before taking the log.
    pub prob_floor: f64,
    /// Clamp negative IDF values to zero.
    pub clamp_idf: bool,
    pub abs_denominator: AbsDenominator,
}

impl Default for LexicalParams {
    fn default() -> Self {
        Self {
            k1: 2.0,
            k3: 0.0,
            b: 0.75,
            lambda_jm: 0.1,
            mu_dir: 2000.0,
            delta_abs: 0.7,
            prob_floor: 1e-10,
            clamp_idf: false,
            abs_denominator: AbsDenominator::DocLength,
        }
    }
}

impl LexicalParams {
    pub fn validate(&self) -> Result<()> {
        let non_neg = [
            ("k1", self.k1),
            ("k3", self.k3),
            ("b", self.b),
            ("lambda_jm", self.lambda_jm),
            ("mu_dir", self.mu_dir),
            ("delta_abs", self.delta_abs),
        ];
        for (name, v) in non_neg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!("{name} must be finite and >= 0")));
            }
        }
        if self.b > 1.0 {
            return Err(Error::InvalidParameter("b must be in [0, 1]".into()));
        }
        if self.lambda_jm > 1.0 {
            return Err(Error::InvalidParameter("lambda_jm must be in [0, 1]".into()));
        }
        if !(self.prob_floor > 0.0 && self.prob_floor < 1.0) {
            return Err(Error::InvalidParameter("prob_floor must be in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TermStats {
    /// Documents containing the term.
    pub df: u32,
    /// Total occurrences over the corpus.
    pub ctf: u64,
}

/// Statistics of one stream kind over the whole corpus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StreamStats {
    pub terms: BTreeMap<String, TermStats>,
    pub corpus_len: u64,
    pub doc_len: Vec<u32>,
    pub doc_unique: Vec<u32>,
    pub avg_len: f64,
}

impl StreamStats {
    pub fn term(&self, term: &str) -> TermStats {
        self.terms.get(term).copied().unwrap_or_default()
    }

    /// Corpus language model probability `ctf / corpus_len`.
    pub fn corpus_prob(&self, term: &str) -> f64 {
        if self.corpus_len == 0 {
            return 0.0;
        }
        self.term(term).ctf as f64 / self.corpus_len as f64
    }
}

/// Per-stream document frequencies, collection frequencies and lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub tokenization: Tokenization,
    pub n_docs: usize,
    entity_index: BTreeMap<String, usize>,
    streams: [StreamStats; 3],
}

impl CorpusStats {
    pub fn build(docs: &[Document], tokenization: Tokenization) -> Result<Self> {
        Self::build_with(docs, tokenization, &TextConfig::default())
    }

    pub fn build_with(docs: &[Document], tokenization: Tokenization, text: &TextConfig) -> Result<Self> {
        let streams = docs
            .iter()
            .map(|d| text.build_streams(d, tokenization))
            .collect::<Result<Vec<_>>>()?;
        let ids: Vec<&str> = docs.iter().map(|d| d.entity_id.as_str()).collect();
        Self::from_streams(&ids, &streams, tokenization)
    }

    /// Builds statistics from already tokenized streams, one triple per entity.
    pub fn from_streams(ids: &[&str], streams: &[[TokenStream; 3]], tokenization: Tokenization) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        debug_assert_eq!(ids.len(), streams.len());
        let mut entity_index = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if id.is_empty() {
                return Err(Error::EmptyId);
            }
            if entity_index.insert(String::from(*id), i).is_some() {
                return Err(Error::DuplicateId(String::from(*id)));
            }
        }
        let mut out: [StreamStats; 3] = Default::default();
        for triple in streams {
            for stream in triple {
                let stats = &mut out[stream.kind.index()];
                let doc = DocTerms::from_stream(stream);
                for (term, &count) in &doc.counts {
                    let entry = stats.terms.entry(term.clone()).or_default();
                    entry.df += 1;
                    entry.ctf += u64::from(count);
                }
                stats.corpus_len += u64::from(doc.len);
                stats.doc_len.push(doc.len);
                stats.doc_unique.push(doc.unique());
            }
        }
        let n = ids.len();
        for stats in &mut out {
            stats.avg_len = stats.corpus_len as f64 / n as f64;
        }
        Ok(Self {
            tokenization,
            n_docs: n,
            entity_index,
            streams: out,
        })
    }

    pub fn stream(&self, kind: StreamKind) -> &StreamStats {
        &self.streams[kind.index()]
    }

    pub fn entity_position(&self, entity_id: &str) -> Option<usize> {
        self.entity_index.get(entity_id).copied()
    }

    pub fn doc_len(&self, entity_id: &str, kind: StreamKind) -> Option<u32> {
        self.entity_position(entity_id)
            .map(|i| self.stream(kind).doc_len[i])
    }

    pub fn doc_unique(&self, entity_id: &str, kind: StreamKind) -> Option<u32> {
        self.entity_position(entity_id)
            .map(|i| self.stream(kind).doc_unique[i])
    }

    /// `ln((N - n + 0.5) / (n + 0.5))` with `n` the document frequency of
    /// `term` in the stream. Negative for terms in more than half the corpus.
    pub fn idf(&self, term: &str, kind: StreamKind) -> f64 {
        let n = f64::from(self.stream(kind).term(term).df);
        let total = self.n_docs as f64;
        libm::log((total - n + 0.5) / (n + 0.5))
    }

    fn idf_with(&self, term: &str, kind: StreamKind, params: &LexicalParams) -> f64 {
        let v = self.idf(term, kind);
        if params.clamp_idf {
            v.max(0.0)
        } else {
            v
        }
    }
}

/// Term counts of one document stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocTerms {
    pub counts: BTreeMap<String, u32>,
    pub len: u32,
}

impl DocTerms {
    pub fn from_stream(stream: &TokenStream) -> Self {
        Self::from_tokens(stream.tokens())
    }

    pub fn from_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Self {
        let mut counts = BTreeMap::new();
        let mut len = 0u32;
        for t in tokens {
            *counts.entry(String::from(t)).or_insert(0) += 1;
            len += 1;
        }
        Self { counts, len }
    }

    pub fn tf(&self, term: &str) -> u32 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn unique(&self) -> u32 {
        self.counts.len() as u32
    }
}

/// Query tokens with their multiplicities, in first-occurrence order.
fn distinct_with_counts(query: &[String]) -> Vec<(&str, u32)> {
    let mut out: Vec<(&str, u32)> = Vec::new();
    for q in query {
        match out.iter_mut().find(|(t, _)| *t == q.as_str()) {
            Some((_, c)) => *c += 1,
            None => out.push((q.as_str(), 1)),
        }
    }
    out
}

pub fn sum_tf(query: &[String], doc: &DocTerms) -> f64 {
    query.iter().map(|q| f64::from(doc.tf(q))).fold(0.0, |acc, x| acc + x)
}

pub fn sum_idf(query: &[String], kind: StreamKind, stats: &CorpusStats, params: &LexicalParams) -> f64 {
    query.iter().map(|q| stats.idf_with(q, kind, params)).fold(0.0, |acc, x| acc + x)
}

pub fn sum_tfidf(
    query: &[String],
    doc: &DocTerms,
    kind: StreamKind,
    stats: &CorpusStats,
    params: &LexicalParams,
) -> f64 {
    query
        .iter()
        .map(|q| f64::from(doc.tf(q)) * stats.idf_with(q, kind, params))
        .fold(0.0, |acc, x| acc + x)
}

/// Okapi BM25 over the distinct query terms present in the document, with
/// the query-frequency factor `(k3 + 1) qtf / (k3 + qtf)`.
pub fn bm25(query: &[String], doc: &DocTerms, kind: StreamKind, stats: &CorpusStats, params: &LexicalParams) -> f64 {
    let avg = stats.stream(kind).avg_len;
    if avg <= 0.0 {
        return 0.0;
    }
    let norm = params.k1 * (1.0 - params.b + params.b * f64::from(doc.len) / avg);
    distinct_with_counts(query)
        .into_iter()
        .filter_map(|(term, qtf)| {
            let f = f64::from(doc.tf(term));
            if f == 0.0 {
                return None;
            }
            let qtf = f64::from(qtf);
            let doc_part = f * (params.k1 + 1.0) / (f + norm);
            let query_part = (params.k3 + 1.0) * qtf / (params.k3 + qtf);
            Some(stats.idf_with(term, kind, params) * doc_part * query_part)
        })
        .fold(0.0, |acc, x| acc + x)
}

pub fn jm_prob(tf: u32, doc_len: u32, corpus_prob: f64, lambda: f64) -> f64 {
    let ml = if doc_len == 0 {
        0.0
    } else {
        f64::from(tf) / f64::from(doc_len)
    };
    (1.0 - lambda) * ml + lambda * corpus_prob
}

pub fn dir_prob(tf: u32, doc_len: u32, corpus_prob: f64, mu: f64) -> f64 {
    let denom = f64::from(doc_len) + mu;
    if denom <= 0.0 {
        return 0.0;
    }
    (f64::from(tf) + mu * corpus_prob) / denom
}

/// Absolute discounting with `denominator` normally equal to the document
/// length and `unique` the number of distinct terms in the document.
pub fn abs_prob(tf: u32, unique: u32, denominator: f64, corpus_prob: f64, delta: f64) -> f64 {
    if denominator <= 0.0 {
        return 0.0;
    }
    ((f64::from(tf) - delta).max(0.0) + delta * f64::from(unique) * corpus_prob) / denominator
}

fn floored_ln(p: f64, floor: f64) -> f64 {
    libm::log(p.max(floor))
}

pub fn lmir_jm(query: &[String], doc: &DocTerms, kind: StreamKind, stats: &CorpusStats, params: &LexicalParams) -> f64 {
    let s = stats.stream(kind);
    query
        .iter()
        .map(|q| {
            let p = jm_prob(doc.tf(q), doc.len, s.corpus_prob(q), params.lambda_jm);
            floored_ln(p, params.prob_floor)
        })
        .fold(0.0, |acc, x| acc + x)
}

pub fn lmir_dir(query: &[String], doc: &DocTerms, kind: StreamKind, stats: &CorpusStats, params: &LexicalParams) -> f64 {
    let s = stats.stream(kind);
    query
        .iter()
        .map(|q| {
            let p = dir_prob(doc.tf(q), doc.len, s.corpus_prob(q), params.mu_dir);
            floored_ln(p, params.prob_floor)
        })
        .fold(0.0, |acc, x| acc + x)
}

pub fn lmir_abs(query: &[String], doc: &DocTerms, kind: StreamKind, stats: &CorpusStats, params: &LexicalParams) -> f64 {
    let s = stats.stream(kind);
    let denominator = match params.abs_denominator {
        AbsDenominator::DocLength => f64::from(doc.len),
        AbsDenominator::QueryTermCount => query.iter().map(|q| f64::from(doc.tf(q))).fold(0.0, |acc, x| acc + x),
    };
    query
        .iter()
        .map(|q| {
            let p = abs_prob(doc.tf(q), doc.unique(), denominator, s.corpus_prob(q), params.delta_abs);
            floored_ln(p, params.prob_floor)
        })
        .fold(0.0, |acc, x| acc + x)
}

/// All seven frequency features in table order.
pub fn lexical_features(
    query: &[String],
    doc: &DocTerms,
    kind: StreamKind,
    stats: &CorpusStats,
    params: &LexicalParams,
) -> [f64; LEXICAL_FEATURES] {
    [
        sum_tf(query, doc),
        sum_idf(query, kind, stats, params),
        sum_tfidf(query, doc, kind, stats, params),
        bm25(query, doc, kind, stats, params),
        lmir_jm(query, doc, kind, stats, params),
        lmir_dir(query, doc, kind, stats, params),
        lmir_abs(query, doc, kind, stats, params),
    ]
}

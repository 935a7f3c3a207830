//! Per-pair feature vectors.
//!
//! Each (tokenization, stream) block holds the seven frequency features
//! followed by the eight embedding features, so a block is 15 wide and the
//! layout over both tokenizations and all three streams is 90 wide.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corpus::{Document, LabeledPair, Query, StreamKind, TextConfig, TokenStream, Tokenization};
use crate::embedding::EmbeddingTable;
use crate::hash::fnv1a;
use crate::lexical::{lexical_features, CorpusStats, DocTerms, LexicalParams, LEXICAL_FEATURES, LEXICAL_FEATURE_NAMES};
use crate::semantic::{stream_semantic_features, QueryEmbedding, SimMode, SEMANTIC_FEATURE_NAMES};
use crate::{Error, Result};

pub const BLOCK_WIDTH: usize = LEXICAL_FEATURES + SEMANTIC_FEATURE_NAMES.len();

/// Which (tokenization, stream) blocks are emitted and in what order.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureLayout {
    pub tokenizations: Vec<Tokenization>,
    pub streams: Vec<StreamKind>,
}

impl Default for FeatureLayout {
    fn default() -> Self {
        Self::new(alloc::vec![Tokenization::TwoGram], StreamKind::ALL.to_vec()).unwrap()
    }
}

impl FeatureLayout {
    pub fn new(tokenizations: Vec<Tokenization>, streams: Vec<StreamKind>) -> Result<Self> {
        if tokenizations.is_empty() || streams.is_empty() {
            return Err(Error::InvalidParameter("layout needs at least one tokenization and one stream".into()));
        }
        let dup = |n: usize, m: usize| n != m;
        let mut t = tokenizations.clone();
        t.sort();
        t.dedup();
        let mut s = streams.clone();
        s.sort();
        s.dedup();
        if dup(t.len(), tokenizations.len()) || dup(s.len(), streams.len()) {
            return Err(Error::InvalidParameter("layout lists a tokenization or stream twice".into()));
        }
        Ok(Self { tokenizations, streams })
    }

    pub fn total_dim(&self) -> usize {
        self.tokenizations.len() * self.streams.len() * BLOCK_WIDTH
    }

    /// Column names `<tokenization>.<stream>.<feature>` in emission order.
    pub fn column_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.total_dim());
        for t in &self.tokenizations {
            for s in &self.streams {
                for name in LEXICAL_FEATURE_NAMES.iter().chain(SEMANTIC_FEATURE_NAMES.iter()) {
                    out.push(format!("{t}.{s}.{name}"));
                }
            }
        }
        out
    }

    /// Hex FNV-1a of the newline-joined column names.
    pub fn fingerprint(&self) -> String {
        format!("{:016x}", fnv1a(self.column_names().join("\n").as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub query_id: String,
    pub entity_id: String,
    pub label: u8,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureParams {
    pub lexical: LexicalParams,
    pub sim_mode: SimMode,
}

/// One tokenization of the whole corpus.
#[derive(Debug, Clone)]
pub struct TokenizedCorpus {
    pub stats: CorpusStats,
    pub streams: Vec<[TokenStream; 3]>,
    terms: Vec<[DocTerms; 3]>,
}

impl TokenizedCorpus {
    pub fn build(docs: &[Document], tokenization: Tokenization, text: &TextConfig) -> Result<Self> {
        let streams = docs
            .iter()
            .map(|d| text.build_streams(d, tokenization))
            .collect::<Result<Vec<_>>>()?;
        let ids: Vec<&str> = docs.iter().map(|d| d.entity_id.as_str()).collect();
        let stats = CorpusStats::from_streams(&ids, &streams, tokenization)?;
        let terms = streams
            .iter()
            .map(|[t, b, tb]| [DocTerms::from_stream(t), DocTerms::from_stream(b), DocTerms::from_stream(tb)])
            .collect();
        Ok(Self { stats, streams, terms })
    }

    pub fn tokenization(&self) -> Tokenization {
        self.stats.tokenization
    }
}

/// Corpus indexes, embeddings and settings needed to featurize pairs.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    layout: FeatureLayout,
    params: FeatureParams,
    text: TextConfig,
    table: EmbeddingTable,
    corpora: Vec<TokenizedCorpus>,
    entity_index: BTreeMap<String, usize>,
}

impl FeatureExtractor {
    pub fn new(
        docs: &[Document],
        layout: FeatureLayout,
        params: FeatureParams,
        text: TextConfig,
        mut table: EmbeddingTable,
    ) -> Result<Self> {
        params.lexical.validate()?;
        let corpora = layout
            .tokenizations
            .iter()
            .map(|&t| TokenizedCorpus::build(docs, t, &text))
            .collect::<Result<Vec<_>>>()?;
        for c in &corpora {
            for triple in &c.streams {
                table.precompute_oov(triple[StreamKind::TitleBody.index()].tokens());
            }
        }
        let entity_index = docs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.entity_id.clone(), i))
            .collect();
        Ok(Self {
            layout,
            params,
            text,
            table,
            corpora,
            entity_index,
        })
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn table(&self) -> &EmbeddingTable {
        &self.table
    }

    pub fn corpus(&self, tokenization: Tokenization) -> Option<&TokenizedCorpus> {
        self.corpora.iter().find(|c| c.tokenization() == tokenization)
    }

    /// Query tokens for every tokenization of the layout, in layout order.
    pub fn query_tokens(&self, query: &Query) -> Result<Vec<Vec<String>>> {
        self.layout
            .tokenizations
            .iter()
            .map(|&t| self.text.query_tokens(query, t))
            .collect()
    }

    /// Caches unknown-word vectors for the queries' tokens.
    pub fn prepare_queries(&mut self, queries: &[Query]) -> Result<()> {
        for q in queries {
            for tokens in self.query_tokens(q)? {
                self.table.precompute_oov(tokens.iter().map(String::as_str));
            }
        }
        Ok(())
    }

    fn doc_position(&self, entity_id: &str) -> Result<usize> {
        self.entity_index
            .get(entity_id)
            .copied()
            .ok_or_else(|| Error::UnknownId(entity_id.into()))
    }

    fn values_for(&self, query_tokens: &[Vec<String>], doc: usize) -> Vec<f64> {
        let mut values = Vec::with_capacity(self.layout.total_dim());
        for (corpus, tokens) in self.corpora.iter().zip(query_tokens) {
            for &kind in &self.layout.streams {
                let stats = &corpus.stats;
                let terms = &corpus.terms[doc][kind.index()];
                values.extend_from_slice(&lexical_features(tokens, terms, kind, stats, &self.params.lexical));
                let lex = &self.params.lexical;
                let qe = QueryEmbedding::new(tokens, &self.table, |w| {
                    let v = stats.idf(w, kind);
                    if lex.clamp_idf {
                        v.max(0.0)
                    } else {
                        v
                    }
                });
                let stream = &corpus.streams[doc][kind.index()];
                values.extend_from_slice(&stream_semantic_features(&qe, stream, &self.table, self.params.sim_mode));
            }
        }
        values
    }

    pub fn featurize_pair(&self, query: &Query, entity_id: &str, label: u8) -> Result<FeatureVector> {
        let doc = self.doc_position(entity_id)?;
        let tokens = self.query_tokens(query)?;
        Ok(FeatureVector {
            query_id: query.query_id.clone(),
            entity_id: entity_id.into(),
            label,
            values: self.values_for(&tokens, doc),
        })
    }

    /// Featurizes `pairs` in input order.
    pub fn featurize_pairs(&self, queries: &[Query], pairs: &[LabeledPair]) -> Result<Vec<FeatureVector>> {
        let mut query_tokens: BTreeMap<&str, Vec<Vec<String>>> = BTreeMap::new();
        for q in queries {
            query_tokens.insert(q.query_id.as_str(), self.query_tokens(q)?);
        }
        let resolved = pairs
            .iter()
            .map(|p| {
                let tokens = query_tokens
                    .get(p.query_id.as_str())
                    .ok_or_else(|| Error::UnknownId(p.query_id.clone()))?;
                Ok((p, tokens, self.doc_position(&p.entity_id)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let build = |(p, tokens, doc): &(&LabeledPair, &Vec<Vec<String>>, usize)| FeatureVector {
            query_id: p.query_id.clone(),
            entity_id: p.entity_id.clone(),
            label: p.label,
            values: self.values_for(tokens, *doc),
        };
        #[cfg(feature = "parallel")]
        let out = resolved.par_iter().map(build).collect();
        #[cfg(not(feature = "parallel"))]
        let out = resolved.iter().map(build).collect();
        Ok(out)
    }
}

//! The pipeline stages as plain functions over in-memory values. The command
//! line tool is a thin layer over these.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use entityrank_core::corpus::{Document, LabeledPair, Query, TextConfig};
use entityrank_core::embedding::EmbeddingTable;
use entityrank_core::eval::{avgprec, map_score, mrr, reciprocal_rank, ApMode, RankedList};
use entityrank_core::features::{FeatureExtractor, FeatureLayout, FeatureParams, FeatureVector, TokenizedCorpus};
use entityrank_core::ranker::{
    cross_validate, fuse, grid_search, rank_order, CvReport, ExtraTreesModel, ExtraTreesParams, FusionMode,
    GridSearchResult, HyperparameterGrid,
};
use entityrank_core::synth::{generate, SynthData, SynthSpec, SYNTH_EMBEDDING_DIM};

use crate::io::{self, LetorFile, Prediction};
use crate::{Error, Result};

/// Checks that every pair names a known query and entity.
pub fn check_pairs(pairs_path: &Path, pairs: &[LabeledPair], docs: &[Document], queries: &[Query]) -> Result<()> {
    let entities: HashSet<&str> = docs.iter().map(|d| d.entity_id.as_str()).collect();
    let qids: HashSet<&str> = queries.iter().map(|q| q.query_id.as_str()).collect();
    for p in pairs {
        if !qids.contains(p.query_id.as_str()) {
            return Err(Error::invalid(pairs_path, format!("unknown query id {:?}", p.query_id)));
        }
        if !entities.contains(p.entity_id.as_str()) {
            return Err(Error::invalid(pairs_path, format!("unknown entity id {:?}", p.entity_id)));
        }
    }
    Ok(())
}

/// Corpus statistics for one tokenization.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestSummary {
    pub tokenization: String,
    pub documents: usize,
    /// (stream, total tokens, distinct terms, mean document length)
    pub streams: Vec<(String, u64, usize, f64)>,
}

pub fn ingest(docs: &[Document], layout: &FeatureLayout, text: &TextConfig) -> Result<Vec<IngestSummary>> {
    layout
        .tokenizations
        .iter()
        .map(|&t| {
            let c = TokenizedCorpus::build(docs, t, text)?;
            let streams = layout
                .streams
                .iter()
                .map(|&k| {
                    let s = c.stats.stream(k);
                    (k.to_string(), s.corpus_len, s.terms.len(), s.avg_len)
                })
                .collect();
            Ok(IngestSummary {
                tokenization: t.to_string(),
                documents: docs.len(),
                streams,
            })
        })
        .collect()
}

pub fn featurize(
    docs: &[Document],
    queries: &[Query],
    pairs: &[LabeledPair],
    table: EmbeddingTable,
    layout: FeatureLayout,
    params: FeatureParams,
    text: TextConfig,
) -> Result<Vec<FeatureVector>> {
    let mut extractor = FeatureExtractor::new(docs, layout, params, text, table)?;
    extractor.prepare_queries(queries)?;
    Ok(extractor.featurize_pairs(queries, pairs)?)
}

/// How `train` picks the ensemble shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeChoice {
    Fixed,
    /// Cross-validated grid search over `grid` with `folds` folds.
    Search { grid: HyperparameterGrid, folds: usize },
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: ExtraTreesModel,
    pub search: Option<GridSearchResult>,
}

pub fn train(
    file: &LetorFile,
    params: &ExtraTreesParams,
    shape: &ShapeChoice,
    mode: ApMode,
) -> Result<TrainOutcome> {
    let (params, search) = match shape {
        ShapeChoice::Fixed => (*params, None),
        ShapeChoice::Search { grid, folds } => {
            let r = grid_search(&file.vectors, grid, params, *folds, params.seed, mode)?;
            (params.with_shape(r.best_n_estimators, r.best_max_depth), Some(r))
        }
    };
    let model = ExtraTreesModel::train_vectors(&file.vectors, &params, file.fingerprint())?;
    Ok(TrainOutcome { model, search })
}

pub fn cv(vectors: &[FeatureVector], params: &ExtraTreesParams, folds: usize, mode: ApMode) -> Result<CvReport> {
    Ok(cross_validate(vectors, params, folds, params.seed, mode)?)
}

pub fn cv_grid(
    vectors: &[FeatureVector],
    grid: &HyperparameterGrid,
    params: &ExtraTreesParams,
    folds: usize,
    mode: ApMode,
) -> Result<GridSearchResult> {
    Ok(grid_search(vectors, grid, params, folds, params.seed, mode)?)
}

/// Groups `keys` by query in order of first appearance and ranks each group.
fn rank_groups(keys: &[(String, String)], scores: &[f64]) -> Vec<Prediction> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, (q, _)) in keys.iter().enumerate() {
        groups
            .entry(q.as_str())
            .or_insert_with(|| {
                order.push(q.as_str());
                Vec::new()
            })
            .push(i);
    }
    let mut out = Vec::with_capacity(keys.len());
    for q in order {
        let members = &groups[q];
        let ids: Vec<&str> = members.iter().map(|&i| keys[i].1.as_str()).collect();
        let s: Vec<f64> = members.iter().map(|&i| scores[i]).collect();
        for (rank, j) in rank_order(&ids, &s).into_iter().enumerate() {
            let i = members[j];
            out.push(Prediction {
                query_id: keys[i].0.clone(),
                entity_id: keys[i].1.clone(),
                score: scores[i],
                rank: rank + 1,
            });
        }
    }
    out
}

pub fn predict(model: &ExtraTreesModel, features_path: &Path, file: &LetorFile) -> Result<Vec<Prediction>> {
    let fp = file.fingerprint();
    if !fp.is_empty() && !model.layout_fingerprint.is_empty() && fp != model.layout_fingerprint {
        return Err(Error::invalid(
            features_path,
            format!("feature layout {fp} does not match the model's {}", model.layout_fingerprint),
        ));
    }
    if file.dim != model.dim {
        return Err(Error::invalid(
            features_path,
            format!("features have {} columns, the model expects {}", file.dim, model.dim),
        ));
    }
    let scores = model.predict_many(&file.vectors)?;
    let keys: Vec<(String, String)> = file
        .vectors
        .iter()
        .map(|v| (v.query_id.clone(), v.entity_id.clone()))
        .collect();
    Ok(rank_groups(&keys, &scores))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryScore {
    pub query_id: String,
    pub avgprec: f64,
    pub reciprocal_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_query: Vec<QueryScore>,
    pub map: f64,
    pub mrr: f64,
}

impl EvalReport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("query_id\tavgprec\treciprocal_rank\n");
        for q in &self.per_query {
            s += &format!("{}\t{}\t{}\n", q.query_id, q.avgprec, q.reciprocal_rank);
        }
        s += &format!("MAP\t{}\n", self.map);
        s += &format!("MRR\t{}\n", self.mrr);
        s
    }
}

/// Ranked lists from predictions, queries in sorted order. Entities without
/// a judgment count as irrelevant.
pub fn ranked_lists(predictions_path: &Path, predictions: &[Prediction], qrels: &[LabeledPair]) -> Result<Vec<RankedList>> {
    let labels: HashMap<(&str, &str), u8> = qrels
        .iter()
        .map(|p| ((p.query_id.as_str(), p.entity_id.as_str()), p.label))
        .collect();
    let mut by_query: BTreeMap<&str, Vec<&Prediction>> = BTreeMap::new();
    for p in predictions {
        by_query.entry(p.query_id.as_str()).or_default().push(p);
    }
    by_query
        .into_iter()
        .map(|(q, mut ps)| {
            ps.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.entity_id.cmp(&b.entity_id)));
            let mut seen = HashSet::new();
            let mut entries = Vec::with_capacity(ps.len());
            for p in ps {
                if !seen.insert(p.entity_id.as_str()) {
                    return Err(Error::invalid(predictions_path, format!("entity {:?} listed twice for query {q:?}", p.entity_id)));
                }
                let label = labels.get(&(q, p.entity_id.as_str())).copied().unwrap_or(0);
                entries.push((p.entity_id.clone(), label));
            }
            Ok(RankedList::new(q, entries))
        })
        .collect()
}

pub fn evaluate(predictions_path: &Path, predictions: &[Prediction], qrels: &[LabeledPair], mode: ApMode) -> Result<EvalReport> {
    let lists = ranked_lists(predictions_path, predictions, qrels)?;
    if lists.is_empty() {
        return Err(Error::invalid(predictions_path, "no predictions"));
    }
    let per_query = lists
        .iter()
        .map(|l| {
            Ok(QueryScore {
                query_id: l.query_id.clone(),
                avgprec: avgprec(l, mode)?,
                reciprocal_rank: reciprocal_rank(l),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport {
        per_query,
        map: map_score(&lists, mode)?,
        mrr: mrr(&lists)?,
    })
}

/// Fuses several prediction files over the same (query, entity) pairs.
pub fn fuse_predictions(inputs: &[(PathBuf, Vec<Prediction>)], mode: FusionMode) -> Result<Vec<Prediction>> {
    let Some((first_path, first)) = inputs.first() else {
        return Err(Error::Core(entityrank_core::Error::EmptyList));
    };
    let keys: Vec<(String, String)> = first
        .iter()
        .map(|p| (p.query_id.clone(), p.entity_id.clone()))
        .collect();
    let index: HashMap<&(String, String), usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    if index.len() != keys.len() {
        return Err(Error::invalid(first_path, "duplicate (query, entity) pair"));
    }
    let mut scores = Vec::with_capacity(inputs.len());
    for (path, preds) in inputs {
        if preds.len() != keys.len() {
            return Err(Error::invalid(path, "pair set differs from the first input"));
        }
        let mut s = vec![f64::NAN; keys.len()];
        for p in preds {
            let k = (p.query_id.clone(), p.entity_id.clone());
            let i = *index
                .get(&k)
                .ok_or_else(|| Error::invalid(path, format!("pair {}/{} missing from the first input", k.0, k.1)))?;
            s[i] = p.score;
        }
        if s.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid(path, "duplicate (query, entity) pair"));
        }
        scores.push(s);
    }
    let fused = fuse(&scores, &keys, mode)?;
    Ok(rank_groups(&keys, &fused))
}

/// Paths written by [`write_synth`].
#[derive(Debug, Clone, PartialEq)]
pub struct SynthPaths {
    pub corpus: PathBuf,
    pub queries: PathBuf,
    pub pairs: PathBuf,
    pub embeddings: PathBuf,
}

impl SynthPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            corpus: dir.join("corpus.jsonl"),
            queries: dir.join("queries.jsonl"),
            pairs: dir.join("pairs.tsv"),
            embeddings: dir.join("embeddings.txt"),
        }
    }
}

pub fn synth(spec: &SynthSpec) -> Result<SynthData> {
    Ok(generate(spec)?)
}

pub fn write_synth(data: &SynthData, dir: &Path) -> Result<SynthPaths> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = SynthPaths::in_dir(dir);
    io::write_documents(&paths.corpus, &data.documents)?;
    io::write_queries(&paths.queries, &data.queries)?;
    io::write_pairs(&paths.pairs, &data.pairs)?;
    let rows: Vec<(&str, &[f32])> = data.embeddings.iter().map(|(w, v)| (w.as_str(), v.as_slice())).collect();
    io::write_word2vec_text(&paths.embeddings, SYNTH_EMBEDDING_DIM, &rows)?;
    Ok(paths)
}

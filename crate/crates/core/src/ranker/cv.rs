//! Query-grouped cross-validation and grid search.
//!
//! Folds are formed over queries, never pairs: the distinct query ids are
//! sorted, shuffled with the fold seed and dealt round-robin, so the same
//! query set and seed always give the same folds whatever the model settings.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::trees::{Dataset, ExtraTreesModel, ExtraTreesParams};
use super::rank_order;
use crate::eval::{avgprec, ApMode, RankedList};
use crate::features::FeatureVector;
use crate::{Error, Result};

pub const N_ESTIMATORS_RANGE: (usize, usize) = (100, 500);
pub const MAX_DEPTH_CHOICES: [usize; 5] = [4, 6, 8, 10, 12];

/// Splits the distinct query ids into `n_folds` groups.
pub fn assign_folds<'a>(query_ids: impl IntoIterator<Item = &'a str>, n_folds: usize, seed: u64) -> Result<Vec<Vec<String>>> {
    if n_folds < 2 {
        return Err(Error::InvalidParameter("need at least 2 folds".into()));
    }
    let distinct: BTreeSet<&str> = query_ids.into_iter().collect();
    if distinct.len() < n_folds {
        return Err(Error::TooFewQueries {
            needed: n_folds,
            found: distinct.len(),
        });
    }
    let mut ids: Vec<&str> = distinct.into_iter().collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::new(); n_folds];
    for (i, q) in ids.into_iter().enumerate() {
        folds[i % n_folds].push(String::from(q));
    }
    Ok(folds)
}

/// Cross-validated MAP for one parameter setting.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvReport {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub fold_maps: Vec<f64>,
    pub mean_map: f64,
}

/// Ranks every held-out query with `model` and averages AP over them.
fn fold_map(model: &ExtraTreesModel, held_out: &[&FeatureVector], mode: ApMode) -> Result<f64> {
    let mut by_query: BTreeMap<&str, Vec<&FeatureVector>> = BTreeMap::new();
    for v in held_out {
        by_query.entry(v.query_id.as_str()).or_default().push(v);
    }
    let mut total = 0.0;
    for (qid, pairs) in &by_query {
        let scores = pairs
            .iter()
            .map(|p| model.predict_proba(&p.values))
            .collect::<Result<Vec<_>>>()?;
        let ids: Vec<&str> = pairs.iter().map(|p| p.entity_id.as_str()).collect();
        let entries = rank_order(&ids, &scores)
            .into_iter()
            .map(|i| (pairs[i].entity_id.clone(), pairs[i].label))
            .collect();
        total += avgprec(&RankedList::new(*qid, entries), mode)?;
    }
    Ok(total / by_query.len() as f64)
}

pub fn cross_validate(
    vectors: &[FeatureVector],
    params: &ExtraTreesParams,
    n_folds: usize,
    seed: u64,
    mode: ApMode,
) -> Result<CvReport> {
    let folds = assign_folds(vectors.iter().map(|v| v.query_id.as_str()), n_folds, seed)?;
    let mut fold_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (f, qs) in folds.iter().enumerate() {
        for q in qs {
            fold_of.insert(q.as_str(), f);
        }
    }
    let mut fold_maps = Vec::with_capacity(n_folds);
    for f in 0..n_folds {
        let (test, train): (Vec<&FeatureVector>, Vec<&FeatureVector>) =
            vectors.iter().partition(|v| fold_of[v.query_id.as_str()] == f);
        let data = Dataset::from_vectors(train.iter().copied())?;
        let model = ExtraTreesModel::train(&data, params, "")?;
        fold_maps.push(fold_map(&model, &test, mode)?);
    }
    let mean_map = fold_maps.iter().sum::<f64>() / fold_maps.len() as f64;
    Ok(CvReport {
        n_estimators: params.n_estimators,
        max_depth: params.max_depth,
        fold_maps,
        mean_map,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HyperparameterGrid {
    pub n_estimators: Vec<usize>,
    pub max_depth: Vec<usize>,
}

impl HyperparameterGrid {
    pub fn new(n_estimators: Vec<usize>, max_depth: Vec<usize>) -> Result<Self> {
        if n_estimators.is_empty() || max_depth.is_empty() {
            return Err(Error::InvalidGrid("grid axes must be non-empty".into()));
        }
        let (lo, hi) = N_ESTIMATORS_RANGE;
        if let Some(n) = n_estimators.iter().find(|n| !(lo..=hi).contains(*n)) {
            return Err(Error::InvalidGrid(alloc::format!("n_estimators {n} outside [{lo}, {hi}]")));
        }
        if let Some(d) = max_depth.iter().find(|d| !MAX_DEPTH_CHOICES.contains(d)) {
            return Err(Error::InvalidGrid(alloc::format!("max_depth {d} not in {{4,6,8,10,12}}")));
        }
        Ok(Self { n_estimators, max_depth })
    }

    /// `draws` distinct tree counts drawn uniformly from `[100, 500]`,
    /// sorted, crossed with every depth in `{4, 6, 8, 10, 12}`.
    pub fn drawn(draws: usize, seed: u64) -> Result<Self> {
        let (lo, hi) = N_ESTIMATORS_RANGE;
        if draws == 0 || draws > hi - lo + 1 {
            return Err(Error::InvalidGrid(alloc::format!("cannot draw {draws} distinct tree counts")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = BTreeSet::new();
        while picked.len() < draws {
            picked.insert(rng.random_range(lo..=hi));
        }
        Self::new(picked.into_iter().collect(), MAX_DEPTH_CHOICES.to_vec())
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.n_estimators
            .iter()
            .flat_map(move |&n| self.max_depth.iter().map(move |&d| (n, d)))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSearchResult {
    pub best_n_estimators: usize,
    pub best_max_depth: usize,
    pub table: Vec<CvReport>,
}

/// Highest mean MAP; ties go to fewer trees, then to the shallower depth.
pub fn select_best(table: &[CvReport]) -> Option<&CvReport> {
    table.iter().min_by(|a, b| {
        b.mean_map
            .total_cmp(&a.mean_map)
            .then(a.n_estimators.cmp(&b.n_estimators))
            .then(a.max_depth.cmp(&b.max_depth))
    })
}

/// Cross-validates every grid cell on the same folds.
pub fn grid_search(
    vectors: &[FeatureVector],
    grid: &HyperparameterGrid,
    base: &ExtraTreesParams,
    n_folds: usize,
    seed: u64,
    mode: ApMode,
) -> Result<GridSearchResult> {
    let table = grid
        .cells()
        .map(|(n, d)| cross_validate(vectors, &base.with_shape(n, d), n_folds, seed, mode))
        .collect::<Result<Vec<_>>>()?;
    let best = select_best(&table).ok_or_else(|| Error::InvalidGrid("empty grid".into()))?;
    Ok(GridSearchResult {
        best_n_estimators: best.n_estimators,
        best_max_depth: best.max_depth,
        table,
    })
}

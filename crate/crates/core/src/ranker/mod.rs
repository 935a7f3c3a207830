//! Pointwise ranking with an extremely randomized trees classifier.

mod cv;
mod fusion;
mod trees;

use alloc::string::String;
use alloc::vec::Vec;

pub use cv::{
    assign_folds, cross_validate, grid_search, select_best, CvReport, GridSearchResult, HyperparameterGrid,
    MAX_DEPTH_CHOICES, N_ESTIMATORS_RANGE,
};
pub use fusion::{fuse, FusionMode};
pub use trees::{build_tree, Dataset, ExtraTreesModel, ExtraTreesParams, Node, Tree, DEFAULT_SEED};

use crate::features::FeatureVector;
use crate::{Error, Result};

/// Indices of `ids` ordered by descending score, ties by ascending id.
pub fn rank_order<S: AsRef<str>>(ids: &[S], scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| ids[a].as_ref().cmp(ids[b].as_ref()))
    });
    order
}

/// Entity ids of one query's pairs, most probable first.
pub fn rank_candidates(model: &ExtraTreesModel, pairs: &[FeatureVector]) -> Result<Vec<String>> {
    if let Some(first) = pairs.first() {
        if pairs.iter().any(|p| p.query_id != first.query_id) {
            return Err(Error::MixedQueries);
        }
    }
    let scores = model.predict_many(pairs)?;
    let ids: Vec<&str> = pairs.iter().map(|p| p.entity_id.as_str()).collect();
    Ok(rank_order(&ids, &scores)
        .into_iter()
        .map(|i| pairs[i].entity_id.clone())
        .collect())
}

//! Extremely randomized trees for binary classification.
//!
//! Every tree sees the full training set. At each node up to `k` features
//! that are not constant on the node are drawn without replacement, each gets
//! one cut point uniform in `[min, max)` of its node values, and the cut with
//! the lowest weighted Gini impurity is kept. Samples with `x <= threshold` go
//! left.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::features::FeatureVector;
use crate::hash::derive_seed;
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 2016;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtraTreesParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    /// Candidate features per node; `None` means `ceil(sqrt(dim))`.
    pub k_features: Option<usize>,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl Default for ExtraTreesParams {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            max_depth: 8,
            k_features: None,
            min_samples_split: 2,
            seed: DEFAULT_SEED,
        }
    }
}

impl ExtraTreesParams {
    pub fn with_shape(mut self, n_estimators: usize, max_depth: usize) -> Self {
        self.n_estimators = n_estimators;
        self.max_depth = max_depth;
        self
    }

    pub fn features_per_node(&self, dim: usize) -> usize {
        let k = self.k_features.unwrap_or_else(|| {
            let mut r = libm::sqrt(dim as f64) as usize;
            while r * r < dim {
                r += 1;
            }
            r
        });
        k.clamp(1, dim.max(1))
    }
}

/// Dense row-major training matrix with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub dim: usize,
    pub rows: Vec<f64>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn from_vectors<'a>(vectors: impl IntoIterator<Item = &'a FeatureVector>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut dim = None;
        for v in vectors {
            let d = *dim.get_or_insert(v.values.len());
            if v.values.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.values.len(),
                });
            }
            if v.label > 1 {
                return Err(Error::InvalidLabel(u32::from(v.label)));
            }
            rows.extend_from_slice(&v.values);
            labels.push(v.label);
        }
        Ok(Self {
            dim: dim.unwrap_or(0),
            rows,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn value(&self, row: usize, feature: usize) -> f64 {
        self.rows[row * self.dim + feature]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Node {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        /// Training samples reaching the leaf, by label.
        counts: [u32; 2],
    },
}

/// Nodes in depth-first order; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(&self, x: &[f64]) -> [u32; 2] {
        let mut i = 0usize;
        loop {
            match &self.nodes[i] {
                Node::Leaf { counts } => return *counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    pub fn positive_rate(&self, x: &[f64]) -> f64 {
        let [c0, c1] = self.leaf(x);
        f64::from(c1) / f64::from(c0 + c1)
    }

    /// Checks the node records of a tree read from outside: children come
    /// after their parent, features are below `dim`, leaves are non-empty.
    pub fn validate(&self, dim: usize) -> core::result::Result<(), String> {
        if self.nodes.is_empty() {
            return Err("tree has no nodes".into());
        }
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Leaf { counts } => {
                    if counts[0] + counts[1] == 0 {
                        return Err(alloc::format!("leaf {i} is empty"));
                    }
                }
                Node::Split { feature, left, right, .. } => {
                    let (l, r) = (*left as usize, *right as usize);
                    if *feature as usize >= dim || l <= i || r <= i || l >= n || r >= n {
                        return Err(alloc::format!("split {i} is malformed"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left as usize).max(walk(nodes, *right as usize)),
            }
        }
        walk(&self.nodes, 0)
    }
}

struct TreeBuilder<'a> {
    data: &'a Dataset,
    params: &'a ExtraTreesParams,
    k: usize,
    rng: ChaCha8Rng,
    features: Vec<usize>,
    nodes: Vec<Node>,
}

fn gini(c0: usize, c1: usize) -> f64 {
    let n = (c0 + c1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = c0 as f64 / n;
    let p1 = c1 as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

impl<'a> TreeBuilder<'a> {
    fn counts(&self, idx: &[usize]) -> [usize; 2] {
        let ones = idx.iter().filter(|&&i| self.data.labels[i] == 1).count();
        [idx.len() - ones, ones]
    }

    fn best_split(&mut self, idx: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len() as f64;
        let mut remaining = self.features.len();
        let mut found = 0usize;
        let mut best: Option<(f64, usize, f64)> = None;
        while found < self.k && remaining > 0 {
            let j = self.rng.random_range(0..remaining);
            self.features.swap(j, remaining - 1);
            remaining -= 1;
            let f = self.features[remaining];
            let (lo, hi) = idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = self.data.value(i, f);
                (lo.min(v), hi.max(v))
            });
            if !(hi > lo) {
                continue;
            }
            found += 1;
            let t = self.rng.random_range(lo..hi);
            let mut left = [0usize; 2];
            let mut right = [0usize; 2];
            for &i in idx {
                let side = if self.data.value(i, f) <= t { &mut left } else { &mut right };
                side[self.data.labels[i] as usize] += 1;
            }
            let nl = (left[0] + left[1]) as f64;
            let nr = (right[0] + right[1]) as f64;
            let impurity = (nl * gini(left[0], left[1]) + nr * gini(right[0], right[1])) / n;
            if best.is_none_or(|(b, _, _)| impurity < b) {
                best = Some((impurity, f, t));
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn build(&mut self, idx: &mut [usize], depth: usize) -> u32 {
        let [c0, c1] = self.counts(idx);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            counts: [c0 as u32, c1 as u32],
        });
        if depth >= self.params.max_depth || idx.len() < self.params.min_samples_split || c0 == 0 || c1 == 0 {
            return id as u32;
        }
        let Some((feature, threshold)) = self.best_split(idx) else {
            return id as u32;
        };
        let mut mid = 0;
        for j in 0..idx.len() {
            if self.data.value(idx[j], feature) <= threshold {
                idx.swap(mid, j);
                mid += 1;
            }
        }
        let (l, r) = idx.split_at_mut(mid);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature: feature as u32,
            threshold,
            left,
            right,
        };
        id as u32
    }
}

/// Grows tree number `index` of an ensemble; its RNG is seeded from
/// `(params.seed, index)` so trees can be built in any order.
pub fn build_tree(data: &Dataset, params: &ExtraTreesParams, index: usize) -> Tree {
    let mut builder = TreeBuilder {
        data,
        params,
        k: params.features_per_node(data.dim),
        rng: ChaCha8Rng::seed_from_u64(derive_seed(params.seed, index as u64)),
        features: (0..data.dim).collect(),
        nodes: Vec::new(),
    };
    let mut idx: Vec<usize> = (0..data.len()).collect();
    builder.build(&mut idx, 0);
    Tree { nodes: builder.nodes }
}

/// Trained ensemble; the probability of relevance is the mean over trees of
/// the label-1 fraction in the reached leaf.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtraTreesModel {
    pub params: ExtraTreesParams,
    pub dim: usize,
    pub layout_fingerprint: String,
    pub trees: Vec<Tree>,
}

impl ExtraTreesModel {
    pub fn train(data: &Dataset, params: &ExtraTreesParams, layout_fingerprint: impl Into<String>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let ones = data.labels.iter().filter(|&&l| l == 1).count();
        if ones == 0 || ones == data.len() {
            return Err(Error::SingleClassTraining);
        }
        if params.n_estimators == 0 {
            return Err(Error::InvalidParameter("n_estimators must be positive".into()));
        }
        if params.min_samples_split < 2 {
            return Err(Error::InvalidParameter("min_samples_split must be at least 2".into()));
        }
        let build = |i: usize| build_tree(data, params, i);
        #[cfg(feature = "parallel")]
        let trees = (0..params.n_estimators).into_par_iter().map(build).collect();
        #[cfg(not(feature = "parallel"))]
        let trees = (0..params.n_estimators).map(build).collect();
        Ok(Self {
            params: *params,
            dim: data.dim,
            layout_fingerprint: layout_fingerprint.into(),
            trees,
        })
    }

    pub fn train_vectors(vectors: &[FeatureVector], params: &ExtraTreesParams, layout_fingerprint: impl Into<String>) -> Result<Self> {
        Self::train(&Dataset::from_vectors(vectors)?, params, layout_fingerprint)
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.positive_rate(x)).sum();
        Ok(sum / self.trees.len() as f64)
    }

    pub fn predict_many(&self, vectors: &[FeatureVector]) -> Result<Vec<f64>> {
        let score = |v: &FeatureVector| self.predict_proba(&v.values);
        #[cfg(feature = "parallel")]
        return vectors.par_iter().map(score).collect();
        #[cfg(not(feature = "parallel"))]
        return vectors.iter().map(score).collect();
    }
}

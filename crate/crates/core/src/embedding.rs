//! Unit-normalized word vectors with seeded vectors for unknown words.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hash::seeded_word_hash;
use crate::{Error, Result};

pub const DEFAULT_OOV_SEED: u64 = 0x00E1_7175;

/// Half-width of the uniform distribution for out-of-vocabulary components.
pub const OOV_RANGE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: BTreeMap<String, usize>,
    data: Vec<f64>,
    oov_seed: u64,
    oov_cache: BTreeMap<String, Vec<f64>>,
}

fn normalized(raw: impl Iterator<Item = f64> + Clone) -> Option<Vec<f64>> {
    let norm = libm::sqrt(raw.clone().map(|x| x * x).sum::<f64>());
    if !(norm > 0.0) || !norm.is_finite() {
        return None;
    }
    Some(raw.map(|x| x / norm).collect())
}

/// Unit vector for an unknown word: components drawn from
/// `U[-0.25, 0.25]` with a ChaCha8 stream seeded by FNV-1a of
/// `(seed, word)`, then normalized.
pub fn oov_vector(seed: u64, word: &str, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seeded_word_hash(seed, word));
    loop {
        let raw: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-OOV_RANGE..=OOV_RANGE))
            .collect();
        if let Some(v) = normalized(raw.iter().copied()) {
            return v;
        }
    }
}

impl EmbeddingTable {
    pub fn new(dim: usize, oov_seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            words: Vec::new(),
            index: BTreeMap::new(),
            data: Vec::new(),
            oov_seed,
            oov_cache: BTreeMap::new(),
        })
    }

    /// Adds a word, normalizing its vector to unit length.
    pub fn insert(&mut self, word: impl Into<String>, raw: &[f64]) -> Result<()> {
        let word = word.into();
        if raw.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: raw.len(),
            });
        }
        if self.index.contains_key(&word) {
            return Err(Error::DuplicateWord(word));
        }
        let unit = normalized(raw.iter().copied()).ok_or_else(|| Error::ZeroNormVector(word.clone()))?;
        self.data.extend_from_slice(&unit);
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn oov_seed(&self) -> u64 {
        self.oov_seed
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// Stored vector of an in-vocabulary word.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    /// Vocabulary in insertion order with the normalized vectors.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .zip(self.data.chunks_exact(self.dim))
            .map(|(w, v)| (w.as_str(), v))
    }

    /// Unit vector for any word. Unknown words get their seeded vector,
    /// from the cache when [`precompute_oov`](Self::precompute_oov) saw them.
    pub fn vector(&self, word: &str) -> Cow<'_, [f64]> {
        if let Some(v) = self.get(word) {
            return Cow::Borrowed(v);
        }
        match self.oov_cache.get(word) {
            Some(v) => Cow::Borrowed(v.as_slice()),
            None => Cow::Owned(oov_vector(self.oov_seed, word, self.dim)),
        }
    }

    /// Generates and caches vectors for every unknown word in `words`.
    pub fn precompute_oov<'a>(&mut self, words: impl IntoIterator<Item = &'a str>) {
        for w in words {
            if !self.index.contains_key(w) && !self.oov_cache.contains_key(w) {
                let v = oov_vector(self.oov_seed, w, self.dim);
                self.oov_cache.insert(String::from(w), v);
            }
        }
    }

    pub fn oov_cached(&self) -> usize {
        self.oov_cache.len()
    }
}

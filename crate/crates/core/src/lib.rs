//! Entity search ranking core.
//!
//! Text streams and 2-gram tokenization, corpus statistics with the seven
//! frequency features (TF, IDF, TF-IDF, BM25 and three smoothed query
//! likelihoods), embedding similarity features, an extremely randomized trees
//! classifier used as a pointwise ranker, query-grouped cross-validation and
//! MAP/MRR evaluation.
//!
//! The crate is `no_std` and only needs `alloc`. The `parallel` feature pulls
//! in `std` and rayon for tree construction and batch featurization; results
//! are identical with and without it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod corpus;
pub mod embedding;
mod error;
pub mod eval;
pub mod features;
pub mod hash;
pub mod lexical;
pub mod ranker;
pub mod semantic;
pub mod synth;

pub use error::{Error, Result};

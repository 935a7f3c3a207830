//! File formats, pipeline stages and the `entityrank` command line tool on
//! top of `entityrank-core`.

pub mod cli;
pub mod config;
mod error;
pub mod io;
pub mod pipeline;

pub use error::{Error, Result};
pub use entityrank_core as core;

//! Pipeline settings read from a JSON file. Every field is optional; command
//! line flags take precedence over whatever is set here.

use std::path::{Path, PathBuf};

use entityrank_core::corpus::{StreamKind, Tokenization};
use entityrank_core::eval::ApMode;
use entityrank_core::semantic::SimMode;
use entityrank_core::synth::SynthSpec;
use serde::{Deserialize, Serialize};

use crate::io::EmbeddingFormat;
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    pub qrels: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub embeddings_format: Option<EmbeddingFormat>,
    pub features: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,

    pub layout: Option<Vec<Tokenization>>,
    pub streams: Option<Vec<StreamKind>>,
    pub terminators: Option<String>,
    pub k1: Option<f64>,
    pub k3: Option<f64>,
    pub b: Option<f64>,
    pub lambda_jm: Option<f64>,
    pub mu_dir: Option<f64>,
    pub delta_abs: Option<f64>,
    pub prob_floor: Option<f64>,
    pub clamp_idf: Option<bool>,
    pub abs_literal: Option<bool>,
    pub sim_mode: Option<SimMode>,
    pub oov_seed: Option<u64>,

    pub seed: Option<u64>,
    pub n_estimators: Option<usize>,
    pub max_depth: Option<usize>,
    pub n_estimators_draws: Option<usize>,
    pub folds: Option<usize>,
    pub ap_mode: Option<ApMode>,
    pub threads: Option<usize>,

    pub synth: Option<SynthSpec>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e.line(), e.to_string()))
    }
}

//! Versioned JSON model files.

use std::io::Write;
use std::path::Path;

use entityrank_core::ranker::{ExtraTreesModel, ExtraTreesParams, Tree};
use serde::{Deserialize, Serialize};

use super::{open, write_with};
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "entityrank-extra-trees";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    pub layout_fingerprint: String,
    pub dim: usize,
    pub params: ExtraTreesParams,
    pub trees: Vec<Tree>,
}

impl From<&ExtraTreesModel> for ModelFile {
    fn from(m: &ExtraTreesModel) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            seed: m.params.seed,
            layout_fingerprint: m.layout_fingerprint.clone(),
            dim: m.dim,
            params: m.params,
            trees: m.trees.clone(),
        }
    }
}

pub fn save_model(path: &Path, model: &ExtraTreesModel) -> Result<()> {
    let file = ModelFile::from(model);
    write_with(path, |w| {
        serde_json::to_writer(&mut *w, &file)?;
        w.write_all(b"\n")
    })
}

pub fn load_model(path: &Path) -> Result<ExtraTreesModel> {
    let f: ModelFile = serde_json::from_reader(open(path)?).map_err(|e| {
        if e.line() > 0 {
            Error::parse(path, e.line(), e.to_string())
        } else {
            Error::invalid(path, e.to_string())
        }
    })?;
    if f.format != MODEL_FORMAT {
        return Err(Error::invalid(path, format!("not a model file (format {:?})", f.format)));
    }
    if f.version != MODEL_VERSION {
        return Err(Error::invalid(path, format!("unsupported model version {}", f.version)));
    }
    if f.trees.len() != f.params.n_estimators || f.seed != f.params.seed {
        return Err(Error::invalid(path, "tree count or seed disagrees with params"));
    }
    for t in &f.trees {
        t.validate(f.dim).map_err(|m| Error::invalid(path, m))?;
    }
    let mut params = f.params;
    params.seed = f.seed;
    Ok(ExtraTreesModel {
        params,
        dim: f.dim,
        layout_fingerprint: f.layout_fingerprint,
        trees: f.trees,
    })
}

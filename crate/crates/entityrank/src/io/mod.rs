//! Readers and writers for every file the pipeline consumes or produces.

mod corpus;
mod embeddings;
mod letor;
mod model;
mod predictions;

pub use corpus::{read_documents, read_pairs, read_queries, write_documents, write_pairs, write_queries};
pub use embeddings::{
    load_embeddings, load_word2vec_binary, load_word2vec_text, write_word2vec_binary, write_word2vec_text,
    EmbeddingFormat,
};
pub use letor::{format_letor_line, format_value, layout_path, read_letor, write_letor, LayoutSidecar, LetorFile};
pub use model::{load_model, save_model, ModelFile, MODEL_FORMAT, MODEL_VERSION};
pub use predictions::{read_predictions, write_predictions, Prediction};

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Writes through a buffered file and flushes before returning.
pub(crate) fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

//! LETOR-style feature files and their layout sidecar.
//!
//! One pair per line: `<label> qid:<query_id> 1:<v1> ... <d>:<vd> # <entity_id>`.
//! Values use the shortest decimal that parses back to the same `f64`.
//! Readers accept sparse lines (missing indices are zero).

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use entityrank_core::features::{FeatureLayout, FeatureVector};
use serde::{Deserialize, Serialize};

use super::{open, write_with};
use crate::{Error, Result};

/// Column description written next to every feature file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSidecar {
    pub dim: usize,
    pub fingerprint: String,
    pub layout: FeatureLayout,
    pub columns: Vec<String>,
}

impl LayoutSidecar {
    pub fn new(layout: &FeatureLayout) -> Self {
        Self {
            dim: layout.total_dim(),
            fingerprint: layout.fingerprint(),
            layout: layout.clone(),
            columns: layout.column_names(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LetorFile {
    pub vectors: Vec<FeatureVector>,
    pub dim: usize,
    pub layout: Option<LayoutSidecar>,
}

impl LetorFile {
    pub fn fingerprint(&self) -> &str {
        self.layout.as_ref().map_or("", |l| l.fingerprint.as_str())
    }
}

/// `<path>.layout.json`.
pub fn layout_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".layout.json");
    PathBuf::from(s)
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn format_letor_line(v: &FeatureVector) -> String {
    let mut s = format!("{} qid:{}", v.label, v.query_id);
    for (i, x) in v.values.iter().enumerate() {
        let _ = write!(s, " {}:{}", i + 1, format_value(*x));
    }
    let _ = write!(s, " # {}", v.entity_id);
    s
}

fn check_id(path: &Path, kind: &str, id: &str) -> Result<()> {
    if id.is_empty() || id.contains(char::is_whitespace) || id.contains('#') {
        return Err(Error::invalid(path, format!("{kind} {id:?} cannot be written to a feature file")));
    }
    Ok(())
}

/// Writes `vectors` and the sidecar for `layout`.
pub fn write_letor(path: &Path, vectors: &[FeatureVector], layout: &FeatureLayout) -> Result<()> {
    let dim = layout.total_dim();
    for (i, v) in vectors.iter().enumerate() {
        if v.values.len() != dim {
            return Err(Error::DimensionMismatch {
                path: path.into(),
                line: i + 1,
                expected: dim,
                found: v.values.len(),
            });
        }
        check_id(path, "query id", &v.query_id)?;
        check_id(path, "entity id", &v.entity_id)?;
    }
    let sidecar = LayoutSidecar::new(layout);
    let side = layout_path(path);
    write_with(&side, |w| {
        serde_json::to_writer_pretty(&mut *w, &sidecar)?;
        w.write_all(b"\n")
    })?;
    write_with(path, |w| {
        for v in vectors {
            writeln!(w, "{}", format_letor_line(v))?;
        }
        Ok(())
    })
}

struct RawLine {
    vector: FeatureVector,
    entries: Vec<(usize, f64)>,
}

fn parse_line(path: &Path, n: usize, line: &str) -> Result<RawLine> {
    let err = |m: String| Error::parse(path, n, m);
    let (data, comment) = line.split_once('#').ok_or_else(|| err("missing \"# <entity_id>\" comment".into()))?;
    let entity_id = comment.trim();
    if entity_id.is_empty() {
        return Err(err("empty entity id".into()));
    }
    let mut fields = data.split_whitespace();
    let label_s = fields.next().ok_or_else(|| err("missing label".into()))?;
    let label: u8 = match label_s {
        "0" => 0,
        "1" => 1,
        _ => return Err(err(format!("label must be 0 or 1, found {label_s:?}"))),
    };
    let qid_s = fields.next().ok_or_else(|| err("missing qid".into()))?;
    let query_id = match qid_s.strip_prefix("qid:") {
        Some(q) if !q.is_empty() => q,
        _ => return Err(err(format!("expected qid:<id>, found {qid_s:?}"))),
    };
    let mut entries = Vec::new();
    let mut last = 0;
    for f in fields {
        let (i, v) = f.split_once(':').ok_or_else(|| err(format!("expected <index>:<value>, found {f:?}")))?;
        let i: usize = i.parse().map_err(|_| err(format!("bad feature index {i:?}")))?;
        if i <= last {
            return Err(err(format!("feature index {i} out of order")));
        }
        last = i;
        let v: f64 = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
        entries.push((i, v));
    }
    Ok(RawLine {
        vector: FeatureVector {
            query_id: query_id.to_string(),
            entity_id: entity_id.to_string(),
            label,
            values: Vec::new(),
        },
        entries,
    })
}

/// Reads a feature file. With a sidecar the dimension comes from it;
/// otherwise it is the largest index in the file.
pub fn read_letor(path: &Path) -> Result<LetorFile> {
    let side = layout_path(path);
    let layout: Option<LayoutSidecar> = if side.exists() {
        let r = open(&side)?;
        let s: LayoutSidecar = serde_json::from_reader(r).map_err(|e| Error::invalid(&side, e.to_string()))?;
        if s.dim != s.layout.total_dim() || s.fingerprint != s.layout.fingerprint() {
            return Err(Error::invalid(&side, "dimension or fingerprint does not match the layout"));
        }
        Some(s)
    } else {
        None
    };
    let mut raw = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        raw.push((i + 1, parse_line(path, i + 1, &line)?));
    }
    let max_index = raw.iter().filter_map(|(_, r)| r.entries.last().map(|e| e.0)).max().unwrap_or(0);
    let dim = layout.as_ref().map_or(max_index, |l| l.dim);
    let vectors = raw
        .into_iter()
        .map(|(n, mut r)| {
            let mut values = vec![0.0; dim];
            for &(i, v) in &r.entries {
                if i > dim {
                    return Err(Error::DimensionMismatch {
                        path: path.into(),
                        line: n,
                        expected: dim,
                        found: i,
                    });
                }
                values[i - 1] = v;
            }
            r.vector.values = values;
            Ok(r.vector)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LetorFile { vectors, dim, layout })
}

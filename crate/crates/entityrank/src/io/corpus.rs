//! JSON Lines corpora and queries, TSV relevance pairs.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use entityrank_core::corpus::{Document, LabeledPair, Query};
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{open, write_with};
use crate::{Error, Result};

pub const PAIRS_HEADER: &str = "query_id\tentity_id\tlabel";

fn read_jsonl<T: DeserializeOwned>(path: &Path, id: impl Fn(&T) -> &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let item: T = serde_json::from_str(&line).map_err(|e| Error::parse(path, n, e.to_string()))?;
        let key = id(&item);
        if key.is_empty() {
            return Err(Error::parse(path, n, "empty id"));
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::parse(path, n, format!("duplicate id {key:?}")));
        }
        out.push(item);
    }
    Ok(out)
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    write_with(path, |w| {
        for item in items {
            serde_json::to_writer(&mut *w, item)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

pub fn read_documents(path: &Path) -> Result<Vec<Document>> {
    let docs = read_jsonl(path, |d: &Document| &d.entity_id)?;
    if docs.is_empty() {
        return Err(Error::invalid(path, "corpus has no documents"));
    }
    Ok(docs)
}

pub fn read_queries(path: &Path) -> Result<Vec<Query>> {
    read_jsonl(path, |q: &Query| &q.query_id)
}

pub fn write_documents(path: &Path, docs: &[Document]) -> Result<()> {
    write_jsonl(path, docs)
}

pub fn write_queries(path: &Path, queries: &[Query]) -> Result<()> {
    write_jsonl(path, queries)
}

/// Reads a pairs file. The header line is required; duplicate
/// (query, entity) pairs are rejected.
pub fn read_pairs(path: &Path) -> Result<Vec<LabeledPair>> {
    let mut lines = open(path)?.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end_matches('\r') == PAIRS_HEADER => {}
        Some(Err(e)) => return Err(Error::io(path, e)),
        _ => return Err(Error::parse(path, 1, format!("expected header {PAIRS_HEADER:?}"))),
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let n = i + 2;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [q, e, l] = fields[..] else {
            return Err(Error::parse(path, n, format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        if q.is_empty() || e.is_empty() {
            return Err(Error::parse(path, n, "empty id"));
        }
        let label: u32 = l
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, n, format!("bad label {l:?}")))?;
        let pair = LabeledPair::new(q, e, label).map_err(|err| Error::parse(path, n, err.to_string()))?;
        if !seen.insert((pair.query_id.clone(), pair.entity_id.clone())) {
            return Err(Error::parse(path, n, format!("duplicate pair {q}/{e}")));
        }
        out.push(pair);
    }
    Ok(out)
}

pub fn write_pairs(path: &Path, pairs: &[LabeledPair]) -> Result<()> {
    write_with(path, |w| {
        writeln!(w, "{PAIRS_HEADER}")?;
        for p in pairs {
            writeln!(w, "{}\t{}\t{}", p.query_id, p.entity_id, p.label)?;
        }
        Ok(())
    })
}

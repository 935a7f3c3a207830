//! Prediction TSV: `query_id  entity_id  score  rank`.

use std::io::{BufRead, Write};
use std::path::Path;

use super::{format_value, open, write_with};
use crate::{Error, Result};

pub const PREDICTIONS_HEADER: &str = "query_id\tentity_id\tscore\trank";

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub query_id: String,
    pub entity_id: String,
    pub score: f64,
    /// 1-based position within the query.
    pub rank: usize,
}

pub fn write_predictions(path: &Path, predictions: &[Prediction]) -> Result<()> {
    write_with(path, |w| {
        writeln!(w, "{PREDICTIONS_HEADER}")?;
        for p in predictions {
            writeln!(w, "{}\t{}\t{}\t{}", p.query_id, p.entity_id, format_value(p.score), p.rank)?;
        }
        Ok(())
    })
}

pub fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let mut lines = open(path)?.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end_matches('\r') == PREDICTIONS_HEADER => {}
        Some(Err(e)) => return Err(Error::io(path, e)),
        _ => return Err(Error::parse(path, 1, format!("expected header {PREDICTIONS_HEADER:?}"))),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [q, e, s, r] = fields[..] else {
            return Err(Error::parse(path, n, format!("expected 4 tab-separated fields, found {}", fields.len())));
        };
        let score: f64 = s.parse().map_err(|_| Error::parse(path, n, format!("bad score {s:?}")))?;
        let rank: usize = r.parse().map_err(|_| Error::parse(path, n, format!("bad rank {r:?}")))?;
        if q.is_empty() || e.is_empty() || rank == 0 {
            return Err(Error::parse(path, n, "empty id or zero rank"));
        }
        out.push(Prediction {
            query_id: q.into(),
            entity_id: e.into(),
            score,
            rank,
        });
    }
    Ok(out)
}

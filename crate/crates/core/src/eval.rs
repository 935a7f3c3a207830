//! Average precision, MAP and MRR over binary-relevance ranked lists.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Ranked candidates of one query, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedList {
    pub query_id: String,
    pub entries: Vec<(String, u8)>,
}

impl RankedList {
    pub fn new(query_id: impl Into<String>, entries: Vec<(String, u8)>) -> Self {
        Self {
            query_id: query_id.into(),
            entries,
        }
    }

    /// Builds a list with anonymous entities from relevance flags.
    pub fn from_relevance(query_id: impl Into<String>, rels: &[u8]) -> Self {
        let entries = rels
            .iter()
            .enumerate()
            .map(|(i, &r)| (alloc::format!("e{i}"), r))
            .collect();
        Self::new(query_id, entries)
    }

    fn relevant_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, (_, r))| *r > 0)
            .map(|(i, _)| i + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ApMode {
    /// Mean of precision at each relevant position.
    #[default]
    Standard,
    /// Sum of reciprocal positions of the relevant entities, unnormalized.
    ReciprocalSum,
}

pub fn avgprec(list: &RankedList, mode: ApMode) -> Result<f64> {
    if list.entries.is_empty() {
        return Err(Error::EmptyList);
    }
    let ap = match mode {
        ApMode::ReciprocalSum => list.relevant_positions().fold(0.0, |acc, p| acc + 1.0 / p as f64),
        ApMode::Standard => {
            let mut hits = 0usize;
            let mut total = 0.0;
            for pos in list.relevant_positions() {
                hits += 1;
                total += hits as f64 / pos as f64;
            }
            if hits == 0 {
                0.0
            } else {
                total / hits as f64
            }
        }
    };
    Ok(ap)
}

/// Mean of [`avgprec`] over queries.
pub fn map_score(lists: &[RankedList], mode: ApMode) -> Result<f64> {
    if lists.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut sum = 0.0;
    for l in lists {
        sum += avgprec(l, mode)?;
    }
    Ok(sum / lists.len() as f64)
}

/// Reciprocal position of the first relevant entity, 0 when none is relevant.
pub fn reciprocal_rank(list: &RankedList) -> f64 {
    list.relevant_positions()
        .next()
        .map_or(0.0, |p| 1.0 / p as f64)
}

pub fn mrr(lists: &[RankedList]) -> Result<f64> {
    if lists.is_empty() {
        return Err(Error::EmptyList);
    }
    Ok(lists.iter().map(reciprocal_rank).sum::<f64>() / lists.len() as f64)
}

/// Expected standard AP of a uniformly random ordering of `n` candidates of
/// which `relevant` are relevant:
/// `(H_n + (R - 1) / (n - 1) * (n - H_n)) / n`.
pub fn expected_random_ap(n: usize, relevant: usize) -> f64 {
    if n == 0 || relevant == 0 {
        return 0.0;
    }
    let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    if n == 1 {
        return 1.0;
    }
    let r = relevant as f64;
    let n_f = n as f64;
    (harmonic + (r - 1.0) / (n_f - 1.0) * (n_f - harmonic)) / n_f
}

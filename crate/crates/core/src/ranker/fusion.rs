use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::rank_order;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FusionMode {
    /// Mean of the models' probabilities.
    #[default]
    Prob,
    /// Sum over models of `1 / position` within the pair's query.
    Rank,
}

/// Combines aligned per-pair scores from several models. `keys` holds the
/// `(query_id, entity_id)` of each pair.
pub fn fuse(scores: &[Vec<f64>], keys: &[(String, String)], mode: FusionMode) -> Result<Vec<f64>> {
    if scores.is_empty() || scores.iter().any(|s| s.len() != keys.len()) {
        return Err(Error::LengthMismatch);
    }
    match mode {
        FusionMode::Prob => Ok((0..keys.len())
            .map(|i| scores.iter().map(|s| s[i]).sum::<f64>() / scores.len() as f64)
            .collect()),
        FusionMode::Rank => {
            let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for (i, (q, _)) in keys.iter().enumerate() {
                groups.entry(q.as_str()).or_default().push(i);
            }
            let mut fused = vec![0.0; keys.len()];
            for members in groups.values() {
                let ids: Vec<&str> = members.iter().map(|&i| keys[i].1.as_str()).collect();
                for model in scores {
                    let local: Vec<f64> = members.iter().map(|&i| model[i]).collect();
                    for (pos, j) in rank_order(&ids, &local).into_iter().enumerate() {
                        fused[members[j]] += 1.0 / (pos + 1) as f64;
                    }
                }
            }
            Ok(fused)
        }
    }
}

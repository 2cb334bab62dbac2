//! Adaptive cutoff selection: contiguous cluster regions along the ranking,
//! gap scores with the position penalty, and the final prefix cut.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::types::{ClusterAssignment, CutoffDecision, NormalizedList, RankedList};

/// Ranks in `{2..=N}` where the label differs from the previous rank — the
/// first rank of every new cluster region. Noise runs count as regions.
pub fn boundary_set(labels: &ClusterAssignment) -> Vec<usize> {
    labels
        .labels
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(i, _)| i + 2)
        .collect()
}

/// Scores every boundary with `g_i / max_j g_j + i/N` and picks the argmax
/// (ties toward the smallest rank). With an empty boundary set the whole list
/// is kept. When every boundary gap is zero the gap terms drop out and the
/// position penalty alone decides, favoring the latest boundary.
pub fn select_cutoff(
    normalized: &NormalizedList,
    labels: &ClusterAssignment,
) -> Result<CutoffDecision> {
    let n = normalized.len();
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            labels: labels.len(),
            list: n,
        });
    }
    if n == 0 {
        return Err(Error::EmptyList);
    }
    let boundaries = boundary_set(labels);
    if boundaries.is_empty() {
        return Ok(CutoffDecision::keep_all(n));
    }

    let mut gaps = BTreeMap::new();
    for &i in &boundaries {
        gaps.insert(i, normalized.values[i - 1] - normalized.values[i - 2]);
    }
    let max_gap = gaps.values().fold(0.0f64, |m, &g| m.max(g));

    let mut scores = BTreeMap::new();
    for &i in &boundaries {
        let gap_term = if max_gap > 0.0 {
            gaps[&i] / max_gap
        } else {
            0.0
        };
        scores.insert(i, gap_term + i as f64 / n as f64);
    }

    let mut chosen = boundaries[0];
    for &i in &boundaries[1..] {
        if scores[&i] > scores[&chosen] {
            chosen = i;
        }
    }

    Ok(CutoffDecision {
        boundaries,
        gaps,
        scores,
        chosen_boundary: Some(chosen),
        cutoff: chosen - 1,
        best_config: None,
        best_silhouette: None,
    })
}

/// Keeps the rank prefix of length `decision.cutoff`.
pub fn apply_cutoff(list: &RankedList, decision: &CutoffDecision) -> RankedList {
    RankedList {
        query_id: list.query_id.clone(),
        candidates: list.candidates[..decision.cutoff.min(list.len())].to_vec(),
    }
}

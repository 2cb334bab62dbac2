//! End-to-end orchestration: retrieve, normalize, cluster with grid search,
//! select the cutoff, and return the retained prefix with a full audit record.

use serde::{Deserialize, Serialize};

use crate::cluster::scale_points;
use crate::cutoff::{apply_cutoff, select_cutoff};
use crate::error::{Error, Result};
use crate::knn::EmbeddingStore;
use crate::silhouette::grid_search;
use crate::types::{ClusterAssignment, CutoffDecision, GridSpec, NormalizedList, RankedList};

/// Tuning knobs that are not part of the hyperparameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarOptions {
    /// Scale the rank axis to `i/N` before clustering so both coordinates are
    /// commensurate. On by default.
    pub scale_index: bool,
}

impl Default for CarOptions {
    fn default() -> Self {
        CarOptions { scale_index: true }
    }
}

/// Result of one adaptive-retrieval run.
#[derive(Debug, Clone, PartialEq)]
pub struct CarOutcome {
    pub retained: RankedList,
    pub decision: CutoffDecision,
}

/// Min-max rescales the raw distances to `[0, 1]`. A constant list maps to
/// all zeros, which flows into the keep-everything branch downstream.
pub fn normalize(list: &RankedList) -> NormalizedList {
    let min = list.candidates.first().map_or(0.0, |c| c.raw_distance);
    let max = list.candidates.last().map_or(0.0, |c| c.raw_distance);
    let range = max - min;
    NormalizedList {
        query_id: list.query_id.clone(),
        values: list
            .candidates
            .iter()
            .map(|c| {
                if range > 0.0 {
                    (c.raw_distance - min) / range
                } else {
                    0.0
                }
            })
            .collect(),
    }
}

/// Full pipeline from a query vector: top-N retrieval followed by
/// [`run_car_on_distances`].
pub fn run_car(
    query_id: impl Into<String>,
    query_vector: &[f64],
    store: &EmbeddingStore,
    n: usize,
    grid: &GridSpec,
    seed: u64,
) -> Result<CarOutcome> {
    let list = store.retrieve_top_n(query_id, query_vector, n)?;
    run_car_on_distances(&list, grid, seed)
}

/// Pipeline over precomputed distances (the path external embedding models
/// feed into).
pub fn run_car_on_distances(list: &RankedList, grid: &GridSpec, seed: u64) -> Result<CarOutcome> {
    run_car_on_distances_with(list, grid, seed, CarOptions::default())
}

pub fn run_car_on_distances_with(
    list: &RankedList,
    grid: &GridSpec,
    seed: u64,
    options: CarOptions,
) -> Result<CarOutcome> {
    list.validate()?;
    grid.validate()?;
    let n = list.len();
    if n < 2 {
        let decision = CutoffDecision::keep_all(n);
        return Ok(CarOutcome {
            retained: apply_cutoff(list, &decision),
            decision,
        });
    }
    let normalized = normalize(list);
    // constant profile: no structure to cut on, keep everything
    if normalized.values.iter().all(|&v| v == 0.0) {
        let decision = CutoffDecision::keep_all(n);
        return Ok(CarOutcome {
            retained: apply_cutoff(list, &decision),
            decision,
        });
    }
    let points = scale_points(&normalized, options.scale_index);
    let decision = match grid_search(&points, grid, seed) {
        Ok(outcome) => {
            let mut decision = select_cutoff(&normalized, &outcome.labels)?;
            decision.best_config = Some(outcome.config);
            decision.best_silhouette = Some(outcome.score);
            decision
        }
        // a query must still answer: no usable partition means keep everything
        Err(Error::AllConfigsDegenerate) => CutoffDecision::keep_all(n),
        Err(e) => return Err(e),
    };
    Ok(CarOutcome {
        retained: apply_cutoff(list, &decision),
        decision,
    })
}

/// Phase 3 only, with externally supplied labels. Used by the CLI's
/// label-pinning debug path to isolate cutoff selection from clustering.
pub fn run_car_with_labels(list: &RankedList, labels: &ClusterAssignment) -> Result<CarOutcome> {
    list.validate()?;
    let normalized = normalize(list);
    let decision = select_cutoff(&normalized, labels)?;
    Ok(CarOutcome {
        retained: apply_cutoff(list, &decision),
        decision,
    })
}

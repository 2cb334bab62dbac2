//! Silhouette scoring and the hyperparameter grid search that maximizes it.

use crate::cluster;
use crate::error::{Error, Result};
use crate::types::{
    AlgorithmKind, ClusterAssignment, ClusterPoint, ClusteringConfig, GridSpec, Linkage, NOISE,
};

/// The eps ladder behind "five steps from 0.1 to 1.0": evenly spaced with
/// inclusive endpoints.
pub const DBSCAN_EPS_STEPS: [f64; 5] = [0.1, 0.325, 0.55, 0.775, 1.0];

/// Threshold candidates for the BIRCH CF radius.
pub const BIRCH_THRESHOLDS: [f64; 3] = [0.3, 0.5, 0.7];

/// Mean silhouette over non-noise points: `s(p) = (b - a) / max(a, b)` with
/// `a` the mean intra-cluster distance and `b` the smallest mean distance to
/// another cluster. Singleton clusters contribute `s = 0`.
///
/// Fails with [`Error::DegeneratePartition`] when fewer than two non-noise
/// clusters exist or every pairwise distance is zero; callers treat that as
/// the worst possible score.
pub fn silhouette_score(points: &[ClusterPoint], labels: &ClusterAssignment) -> Result<f64> {
    if points.len() != labels.len() {
        return Err(Error::LengthMismatch {
            labels: labels.len(),
            list: points.len(),
        });
    }
    if points.len() < 2 {
        return Err(Error::DegeneratePartition);
    }
    let cluster_ids: Vec<i32> = labels.distinct_clusters().into_iter().collect();
    if cluster_ids.len() < 2 {
        return Err(Error::DegeneratePartition);
    }
    let member_idx: Vec<usize> = (0..points.len())
        .filter(|&i| labels.labels[i] != NOISE)
        .collect();
    let spread = member_idx.iter().any(|&i| {
        member_idx
            .iter()
            .any(|&j| points[i].distance_sq(&points[j]) > 0.0)
    });
    if !spread {
        return Err(Error::DegeneratePartition);
    }

    let cluster_pos = |label: i32| cluster_ids.iter().position(|&c| c == label).unwrap();
    let sizes: Vec<usize> = cluster_ids
        .iter()
        .map(|&c| labels.labels.iter().filter(|&&l| l == c).count())
        .collect();

    let mut total = 0.0;
    for &i in &member_idx {
        let own = cluster_pos(labels.labels[i]);
        if sizes[own] == 1 {
            continue; // singleton contributes 0
        }
        let mut sums = vec![0.0f64; cluster_ids.len()];
        for &j in &member_idx {
            if i != j {
                sums[cluster_pos(labels.labels[j])] += points[i].distance(&points[j]);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..cluster_ids.len())
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / member_idx.len() as f64)
}

/// Enumerates the default search space for one backbone, in a fixed order.
///
/// K-means-family and agglomerative and BIRCH search `n_clusters` from 2 up
/// to `max(2, n/2)`; DBSCAN pairs the five-step eps ladder with
/// `min_samples` in `2..=min(5, n-1)`.
pub fn build_default_grid(algorithm: AlgorithmKind, n_points: usize) -> Result<GridSpec> {
    if n_points < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {n_points}"
        )));
    }
    let k_max = (n_points / 2).max(2);
    let k_range = 2..=k_max;
    let configs: Vec<ClusteringConfig> = match algorithm {
        AlgorithmKind::Kmeans => k_range
            .map(|n_clusters| ClusteringConfig::Kmeans { n_clusters })
            .collect(),
        AlgorithmKind::BisectingKmeans => k_range
            .map(|n_clusters| ClusteringConfig::BisectingKmeans { n_clusters })
            .collect(),
        AlgorithmKind::Dbscan => {
            let ms_max = 5.min(n_points - 1);
            if ms_max < 2 {
                return Err(Error::InvalidGrid(
                    "dbscan needs at least 3 points for min_samples >= 2".into(),
                ));
            }
            DBSCAN_EPS_STEPS
                .iter()
                .flat_map(|&eps| {
                    (2..=ms_max)
                        .map(move |min_samples| ClusteringConfig::Dbscan { eps, min_samples })
                })
                .collect()
        }
        AlgorithmKind::Agglomerative => k_range
            .flat_map(|n_clusters| {
                [Linkage::Ward, Linkage::Average, Linkage::Complete]
                    .into_iter()
                    .map(move |linkage| ClusteringConfig::Agglomerative {
                        n_clusters,
                        linkage,
                    })
            })
            .collect(),
        AlgorithmKind::Birch => k_range
            .flat_map(|n_clusters| {
                BIRCH_THRESHOLDS
                    .iter()
                    .map(move |&threshold| ClusteringConfig::Birch {
                        n_clusters,
                        threshold,
                    })
            })
            .collect(),
    };
    GridSpec::new(configs)
}

/// Outcome of a grid search: the winning setting, its silhouette, and its
/// labels (so the caller need not recluster).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchOutcome {
    pub config: ClusteringConfig,
    pub score: f64,
    pub labels: ClusterAssignment,
}

/// Evaluates every config in grid order and keeps the first strictly-best
/// silhouette. Configs that degenerate or ask for more clusters than points
/// score negative infinity.
pub fn grid_search(
    points: &[ClusterPoint],
    grid: &GridSpec,
    seed: u64,
) -> Result<GridSearchOutcome> {
    grid.validate()?;
    if points.len() < 2 {
        return Err(Error::AllConfigsDegenerate);
    }
    let mut best: Option<GridSearchOutcome> = None;
    for config in &grid.configs {
        let labels = match cluster::cluster(points, config, seed) {
            Ok(l) => l,
            Err(Error::TooFewPoints { .. }) => continue,
            Err(e) => return Err(e),
        };
        let score = match silhouette_score(points, &labels) {
            Ok(s) => s,
            Err(Error::DegeneratePartition) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| score > b.score) {
            best = Some(GridSearchOutcome {
                config: config.clone(),
                score,
                labels,
            });
        }
    }
    best.ok_or(Error::AllConfigsDegenerate)
}

//! Clustering backbones over the scaled (index, distance) profile.
//!
//! All backbones are deterministic given `(points, config, seed)`. Adding a
//! new backbone means extending [`ClusteringConfig`] and the dispatch below;
//! cutoff selection never looks at anything but the label sequence.

mod agglomerative;
mod birch;
mod dbscan;
mod kmeans;

use crate::error::{Error, Result};
use crate::types::{ClusterAssignment, ClusterPoint, ClusteringConfig, NormalizedList};

/// Detailed k-means output for callers that need more than labels.
#[derive(Debug, Clone)]
pub struct KmeansOutcome {
    pub labels: ClusterAssignment,
    pub centroids: Vec<ClusterPoint>,
    pub inertia: f64,
    /// Assignment-step inertia of each Lloyd iteration of the winning restart.
    pub inertia_history: Vec<f64>,
}

/// Seeded k-means++ fit exposing inertia and the Lloyd trajectory.
pub fn kmeans_fit(points: &[ClusterPoint], n_clusters: usize, seed: u64) -> Result<KmeansOutcome> {
    if n_clusters == 0 || n_clusters > points.len() {
        return Err(Error::TooFewPoints {
            n_clusters,
            n_points: points.len(),
        });
    }
    let fit = kmeans::run_kmeans(points, n_clusters, seed);
    Ok(KmeansOutcome {
        labels: ClusterAssignment::new(fit.labels.iter().map(|&l| l as i32).collect()),
        centroids: fit.centroids,
        inertia: fit.inertia,
        inertia_history: fit.inertia_history,
    })
}

/// Maps the normalized profile to 2-D points `(i/N, δ̃_i)`, keeping both axes
/// commensurate. With `scale_index` off the raw 1-based rank is used instead.
pub fn scale_points(normalized: &NormalizedList, scale_index: bool) -> Vec<ClusterPoint> {
    let n = normalized.len() as f64;
    normalized
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let rank = (i + 1) as f64;
            let x = if scale_index { rank / n } else { rank };
            ClusterPoint::new(x, v)
        })
        .collect()
}

/// Partitions the profile points under one hyperparameter setting.
pub fn cluster(
    points: &[ClusterPoint],
    config: &ClusteringConfig,
    seed: u64,
) -> Result<ClusterAssignment> {
    config.validate()?;
    if points.is_empty() {
        return Err(Error::TooFewPoints {
            n_clusters: 0,
            n_points: 0,
        });
    }
    let n = points.len();
    if let ClusteringConfig::Kmeans { n_clusters }
    | ClusteringConfig::BisectingKmeans { n_clusters }
    | ClusteringConfig::Agglomerative { n_clusters, .. }
    | ClusteringConfig::Birch { n_clusters, .. } = *config
    {
        if n_clusters > n {
            return Err(Error::TooFewPoints {
                n_clusters,
                n_points: n,
            });
        }
    }
    let labels: Vec<i32> = match *config {
        ClusteringConfig::Kmeans { n_clusters } => kmeans::run_kmeans(points, n_clusters, seed)
            .labels
            .into_iter()
            .map(|l| l as i32)
            .collect(),
        ClusteringConfig::BisectingKmeans { n_clusters } => {
            kmeans::run_bisecting(points, n_clusters, seed)
                .into_iter()
                .map(|l| l as i32)
                .collect()
        }
        ClusteringConfig::Dbscan { eps, min_samples } => {
            dbscan::run_dbscan(points, eps, min_samples)
        }
        ClusteringConfig::Agglomerative {
            n_clusters,
            linkage,
        } => agglomerative::run_agglomerative(points, n_clusters, linkage)
            .into_iter()
            .map(|l| l as i32)
            .collect(),
        ClusteringConfig::Birch {
            n_clusters,
            threshold,
        } => birch::run_birch(points, n_clusters, threshold)
            .into_iter()
            .map(|l| l as i32)
            .collect(),
    };
    Ok(ClusterAssignment::new(labels))
}

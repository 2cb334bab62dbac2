//! Shared domain types for the retrieval pipeline.
//!
//! Ranks are 1-based throughout: the boundary set lives in `{2..=N}` and file
//! formats store 1-based ranks. The reserved noise label is `-1`; it takes part
//! in contiguous-region detection like any other label.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved cluster label for noise / outlier points.
pub const NOISE: i32 = -1;

/// A document or query id with its dense embedding vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub id: String,
    pub vector: Vec<f64>,
}

/// One entry of a ranked list: a candidate document, its raw distance to the
/// query, and its 1-based rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedCandidate {
    pub doc_id: String,
    #[serde(rename = "distance")]
    pub raw_distance: f64,
    /// Recomputed on deserialization; any stored value is ignored.
    pub rank: usize,
}

#[derive(Deserialize)]
struct WireCandidate {
    doc_id: String,
    distance: f64,
}

/// Top-N candidates for one query, sorted by ascending raw distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub query_id: String,
    pub candidates: Vec<RankedCandidate>,
}

impl<'de> Deserialize<'de> for RankedList {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Wire {
            query_id: String,
            candidates: Vec<WireCandidate>,
        }
        let wire = Wire::deserialize(deserializer)?;
        Ok(RankedList {
            query_id: wire.query_id,
            candidates: wire
                .candidates
                .into_iter()
                .enumerate()
                .map(|(i, c)| RankedCandidate {
                    doc_id: c.doc_id,
                    raw_distance: c.distance,
                    rank: i + 1,
                })
                .collect(),
        })
    }
}

impl RankedList {
    /// Builds a list from `(doc_id, distance)` pairs already sorted by ascending
    /// distance, assigning ranks 1..=N. Fails if any invariant is violated.
    pub fn from_sorted_pairs(
        query_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<Self> {
        let list = RankedList {
            query_id: query_id.into(),
            candidates: pairs
                .into_iter()
                .enumerate()
                .map(|(i, (doc_id, raw_distance))| RankedCandidate {
                    doc_id,
                    raw_distance,
                    rank: i + 1,
                })
                .collect(),
        };
        list.validate()?;
        Ok(list)
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Checks every `RankedList` invariant: non-empty, finite distances sorted
    /// non-decreasing, ranks exactly 1..=N, unique doc ids.
    pub fn validate(&self) -> Result<()> {
        if self.candidates.is_empty() {
            return Err(Error::EmptyList);
        }
        let mut seen = BTreeSet::new();
        for (i, c) in self.candidates.iter().enumerate() {
            if !c.raw_distance.is_finite() {
                return Err(Error::NonFiniteDistance { rank: i + 1 });
            }
            if c.rank != i + 1 {
                return Err(Error::InvalidRank {
                    position: i + 1,
                    found: c.rank,
                });
            }
            if i > 0 && c.raw_distance < self.candidates[i - 1].raw_distance {
                return Err(Error::UnsortedDistances { rank: i + 1 });
            }
            if !seen.insert(c.doc_id.as_str()) {
                return Err(Error::DuplicateDocId {
                    doc_id: c.doc_id.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Returns the list unchanged iff all `RankedList` invariants hold.
pub fn validate_ranked_list(list: RankedList) -> Result<RankedList> {
    list.validate()?;
    Ok(list)
}

/// Min-max rescaled distances, parallel to a `RankedList`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedList {
    pub query_id: String,
    pub values: Vec<f64>,
}

impl NormalizedList {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::EmptyList);
        }
        for (i, &v) in self.values.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::NonFiniteDistance { rank: i + 1 });
            }
            if i > 0 && v < self.values[i - 1] {
                return Err(Error::UnsortedDistances { rank: i + 1 });
            }
        }
        Ok(())
    }
}

/// Per-rank cluster labels; noise points carry [`NOISE`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub labels: Vec<i32>,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<i32>) -> Self {
        ClusterAssignment { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Distinct labels excluding noise.
    pub fn distinct_clusters(&self) -> BTreeSet<i32> {
        self.labels
            .iter()
            .copied()
            .filter(|&l| l != NOISE)
            .collect()
    }
}

/// One point of the 2-D profile handed to the clustering backbones:
/// `x` is the (scaled) rank, `y` the normalized distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterPoint {
    pub x: f64,
    pub y: f64,
}

impl ClusterPoint {
    pub fn new(x: f64, y: f64) -> Self {
        ClusterPoint { x, y }
    }

    pub fn distance(&self, other: &ClusterPoint) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &ClusterPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Linkage criterion for agglomerative clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Ward,
    Average,
    Complete,
}

impl std::fmt::Display for Linkage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Linkage::Ward => write!(f, "ward"),
            Linkage::Average => write!(f, "average"),
            Linkage::Complete => write!(f, "complete"),
        }
    }
}

impl std::str::FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ward" => Ok(Linkage::Ward),
            "average" => Ok(Linkage::Average),
            "complete" => Ok(Linkage::Complete),
            other => Err(Error::InvalidConfig(format!("unknown linkage {other:?}"))),
        }
    }
}

/// One hyperparameter setting for a clustering backbone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum ClusteringConfig {
    Kmeans { n_clusters: usize },
    BisectingKmeans { n_clusters: usize },
    Dbscan { eps: f64, min_samples: usize },
    Agglomerative { n_clusters: usize, linkage: Linkage },
    Birch { n_clusters: usize, threshold: f64 },
}

impl ClusteringConfig {
    pub fn algorithm(&self) -> AlgorithmKind {
        match self {
            ClusteringConfig::Kmeans { .. } => AlgorithmKind::Kmeans,
            ClusteringConfig::BisectingKmeans { .. } => AlgorithmKind::BisectingKmeans,
            ClusteringConfig::Dbscan { .. } => AlgorithmKind::Dbscan,
            ClusteringConfig::Agglomerative { .. } => AlgorithmKind::Agglomerative,
            ClusteringConfig::Birch { .. } => AlgorithmKind::Birch,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClusteringConfig::Kmeans { n_clusters }
            | ClusteringConfig::BisectingKmeans { n_clusters } => {
                if n_clusters < 2 {
                    return Err(Error::InvalidConfig("n_clusters must be >= 2".into()));
                }
            }
            ClusteringConfig::Dbscan { eps, min_samples } => {
                if eps <= 0.0 || eps.is_nan() {
                    return Err(Error::InvalidConfig("eps must be > 0".into()));
                }
                if min_samples < 2 {
                    return Err(Error::InvalidConfig("min_samples must be >= 2".into()));
                }
            }
            ClusteringConfig::Agglomerative { n_clusters, .. } => {
                if n_clusters < 2 {
                    return Err(Error::InvalidConfig("n_clusters must be >= 2".into()));
                }
            }
            ClusteringConfig::Birch {
                n_clusters,
                threshold,
            } => {
                if n_clusters < 2 {
                    return Err(Error::InvalidConfig("n_clusters must be >= 2".into()));
                }
                if threshold <= 0.0 || threshold.is_nan() {
                    return Err(Error::InvalidConfig("threshold must be > 0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Clustering backbone identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Kmeans,
    BisectingKmeans,
    Dbscan,
    Agglomerative,
    Birch,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::Kmeans,
        AlgorithmKind::BisectingKmeans,
        AlgorithmKind::Dbscan,
        AlgorithmKind::Agglomerative,
        AlgorithmKind::Birch,
    ];
}

impl std::fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AlgorithmKind::Kmeans => "kmeans",
            AlgorithmKind::BisectingKmeans => "bisecting_kmeans",
            AlgorithmKind::Dbscan => "dbscan",
            AlgorithmKind::Agglomerative => "agglomerative",
            AlgorithmKind::Birch => "birch",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" => Ok(AlgorithmKind::Kmeans),
            "bisecting_kmeans" => Ok(AlgorithmKind::BisectingKmeans),
            "dbscan" => Ok(AlgorithmKind::Dbscan),
            "agglomerative" => Ok(AlgorithmKind::Agglomerative),
            "birch" => Ok(AlgorithmKind::Birch),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// Ordered enumeration of the hyperparameter search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub configs: Vec<ClusteringConfig>,
}

impl GridSpec {
    pub fn new(configs: Vec<ClusteringConfig>) -> Result<Self> {
        let grid = GridSpec { configs };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.configs.is_empty() {
            return Err(Error::InvalidGrid("grid has no configs".into()));
        }
        for config in &self.configs {
            config.validate()?;
        }
        Ok(())
    }
}

/// Full audit record of one cutoff selection: the boundary set, gaps, composite
/// scores, the winning boundary and config, and the final cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffDecision {
    /// Ranks in `{2..=N}` where the cluster label changes, ascending.
    pub boundaries: Vec<usize>,
    /// Gap `g_i` per boundary rank.
    pub gaps: BTreeMap<usize, f64>,
    /// Composite score per boundary rank.
    pub scores: BTreeMap<usize, f64>,
    /// Winning boundary `i*`, absent when the boundary set is empty.
    pub chosen_boundary: Option<usize>,
    /// Number of documents retained, in `[1, N]`.
    pub cutoff: usize,
    /// Winning hyperparameter setting, absent when grid search degenerated.
    pub best_config: Option<ClusteringConfig>,
    /// Silhouette of the winning setting.
    pub best_silhouette: Option<f64>,
}

impl CutoffDecision {
    /// Decision for the "no natural cutoff" branch: keep all N documents.
    pub fn keep_all(n: usize) -> Self {
        CutoffDecision {
            boundaries: Vec::new(),
            gaps: BTreeMap::new(),
            scores: BTreeMap::new(),
            chosen_boundary: None,
            cutoff: n,
            best_config: None,
            best_silhouette: None,
        }
    }
}

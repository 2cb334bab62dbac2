//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ranked list is empty")]
    EmptyList,
    #[error("distances not sorted: candidate at rank {rank} is closer than its predecessor")]
    UnsortedDistances { rank: usize },
    #[error("duplicate doc_id {doc_id:?} in ranked list")]
    DuplicateDocId { doc_id: String },
    #[error("non-finite distance at rank {rank}")]
    NonFiniteDistance { rank: usize },
    #[error("ranks must be exactly 1..=N; found {found} at position {position}")]
    InvalidRank { position: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("embedding store is empty")]
    EmptyStore,
    #[error("cosine distance undefined for a zero vector")]
    ZeroVector,
    #[error("non-finite vector component in record {id:?}")]
    NonFiniteVector { id: String },

    #[error("n_clusters = {n_clusters} exceeds point count {n_points}")]
    TooFewPoints { n_clusters: usize, n_points: usize },
    #[error("invalid clustering config: {0}")]
    InvalidConfig(String),
    #[error("degenerate partition: fewer than two non-noise clusters")]
    DegeneratePartition,
    #[error("every grid config produced a degenerate partition")]
    AllConfigsDegenerate,
    #[error("unknown clustering algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("labels length {labels} does not match list length {list}")]
    LengthMismatch { labels: usize, list: usize },

    #[error("average candidate count must be positive, got {0}")]
    NonPositiveCandidates(f64),
    #[error(
        "query {query_id:?} has neither a vector (with a store) nor a precomputed ranked list"
    )]
    UnresolvableQuery { query_id: String },
    #[error("coverage {coverage} unreachable: a gold document is absent from the corpus")]
    UnreachableCoverage { coverage: f64 },

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

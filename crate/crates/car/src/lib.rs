//! Cluster-based adaptive retrieval.
//!
//! Fixed top-k retrieval returns the same number of documents for every
//! query. This crate instead inspects the *shape* of a query's ranked
//! distance profile: it min-max normalizes the distances, clusters the
//! scaled (rank, distance) points with a silhouette-maximizing grid search,
//! and cuts the list at the inter-cluster boundary with the best combined
//! gap-size and position score. Simple queries keep a handful of documents;
//! open-ended ones keep more.
//!
//! The crate ships the full pipeline plus a benchmark harness that compares
//! adaptive cutoffs against fixed top-k using the trade-off efficiency score
//! `TES = accuracy / ln(1 + average candidates returned)`.
//!
//! # Quick start
//!
//! ```
//! use car::pipeline::run_car_on_distances;
//! use car::silhouette::build_default_grid;
//! use car::types::{AlgorithmKind, RankedList};
//!
//! // Three close matches, then a sharp jump to weak candidates.
//! let distances = [0.10, 0.12, 0.14, 0.75, 0.78, 0.80, 0.83, 0.86];
//! let list = RankedList::from_sorted_pairs(
//!     "q",
//!     distances.iter().enumerate().map(|(i, &d)| (format!("doc{i}"), d)),
//! )?;
//!
//! let grid = build_default_grid(AlgorithmKind::Kmeans, list.len())?;
//! let outcome = run_car_on_distances(&list, &grid, 42)?;
//!
//! assert_eq!(outcome.decision.cutoff, 3);
//! assert_eq!(outcome.retained.len(), 3);
//! # Ok::<(), car::error::Error>(())
//! ```
//!
//! # Scoring a cutoff by hand
//!
//! ```
//! use car::cutoff::select_cutoff;
//! use car::types::{ClusterAssignment, NormalizedList};
//!
//! let normalized = NormalizedList {
//!     query_id: "q".into(),
//!     values: vec![0.0, 0.05, 0.1, 0.6, 0.65, 1.0],
//! };
//! let labels = ClusterAssignment::new(vec![0, 0, 0, 1, 1, 2]);
//! let decision = select_cutoff(&normalized, &labels)?;
//!
//! // Boundary 4 has the bigger gap, but the position penalty favors 6.
//! assert_eq!(decision.boundaries, vec![4, 6]);
//! assert_eq!(decision.chosen_boundary, Some(6));
//! assert_eq!(decision.cutoff, 5);
//! # Ok::<(), car::error::Error>(())
//! ```
//!
//! # Benchmarking against fixed top-k
//!
//! ```
//! use car::eval::tes;
//!
//! let fixed = tes(0.97, 3.0)?;
//! let adaptive = tes(0.98, 2.1)?;
//! assert!(adaptive > fixed);
//! # Ok::<(), car::error::Error>(())
//! ```

pub mod cluster;
pub mod cutoff;
pub mod error;
pub mod eval;
pub mod io;
pub mod knn;
pub mod pipeline;
pub mod silhouette;
pub mod synth;
pub mod types;

pub use error::{Error, Result};

// The guide's chapters double as doc-tests, so the book's code snippets can
// never drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub struct Pipeline;
    #[doc = include_str!("../../../book/src/clustering.md")]
    pub struct Clustering;
    #[doc = include_str!("../../../book/src/grid-search.md")]
    pub struct GridSearch;
    #[doc = include_str!("../../../book/src/cutoff.md")]
    pub struct Cutoff;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub struct Evaluation;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}

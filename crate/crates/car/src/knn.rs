//! Exact top-N retrieval over an in-memory embedding store.
//!
//! Brute-force only: candidate pools here are on the order of tens of
//! documents, so approximate indexes are not worth the nondeterminism.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{EmbeddingRecord, RankedList};

/// Default candidate pool size.
pub const DEFAULT_POOL_SIZE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    CosineDistance,
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" | "cosine_distance" => Ok(Metric::CosineDistance),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

/// Read-only collection of embeddings with a fixed metric.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    records: Vec<EmbeddingRecord>,
    metric: Metric,
    dim: usize,
}

impl EmbeddingStore {
    pub fn new(records: Vec<EmbeddingRecord>, metric: Metric) -> Result<Self> {
        let dim = match records.first() {
            Some(r) => r.vector.len(),
            None => return Err(Error::EmptyStore),
        };
        let mut ids: Vec<&str> = Vec::with_capacity(records.len());
        for r in &records {
            if r.vector.len() != dim || dim == 0 {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.vector.len(),
                });
            }
            if r.vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteVector { id: r.id.clone() });
            }
            ids.push(&r.id);
        }
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            let dup = ids
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| w[0].to_string())
                .unwrap_or_default();
            return Err(Error::DuplicateDocId { doc_id: dup });
        }
        Ok(EmbeddingStore {
            records,
            metric,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn records(&self) -> &[EmbeddingRecord] {
        &self.records
    }

    pub fn contains(&self, id: &str) -> bool {
        self.records.iter().any(|r| r.id == id)
    }

    /// Returns the `min(n, |store|)` candidates closest to the query, sorted by
    /// ascending distance; ties broken by lexicographic doc id.
    pub fn retrieve_top_n(
        &self,
        query_id: impl Into<String>,
        query_vector: &[f64],
        n: usize,
    ) -> Result<RankedList> {
        if query_vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: query_vector.len(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        let mut scored: Vec<(f64, &str)> = Vec::with_capacity(self.records.len());
        for r in &self.records {
            let d = match self.metric {
                Metric::CosineDistance => cosine_distance(query_vector, &r.vector)?,
                Metric::Euclidean => euclidean_distance(query_vector, &r.vector)?,
            };
            scored.push((d, &r.id));
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        scored.truncate(n);
        RankedList::from_sorted_pairs(
            query_id,
            scored.into_iter().map(|(d, id)| (id.to_string(), d)),
        )
    }
}

/// `1 - cos(u, v)`, in `[0, 2]`. Zero vectors are rejected.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((1.0 - dot / (nu.sqrt() * nv.sqrt())).clamp(0.0, 2.0))
}

pub fn euclidean_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

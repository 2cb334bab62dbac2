//! Benchmark harness: adaptive retrieval versus fixed top-k, scored by
//! accuracy, average candidates returned, and the trade-off efficiency score
//! `TES = accuracy / ln(1 + avg_candidates)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knn::EmbeddingStore;
use crate::pipeline::{run_car_on_distances_with, CarOptions};
use crate::types::{ClusteringConfig, GridSpec, RankedList};

/// A query with ground truth: either an embedding (resolved against a store)
/// or a precomputed ranked list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledQuery {
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranked: Option<RankedList>,
    pub gold_ids: BTreeSet<String>,
}

/// A retrieval policy under evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Fixed cutoff: always return the top `k` of the pool.
    TopK(usize),
    /// Adaptive cutoff over the shared pool.
    Car {
        grid: GridSpec,
        seed: u64,
        options: CarOptions,
    },
}

impl Method {
    pub fn name(&self) -> String {
        match self {
            Method::TopK(k) => format!("top{k}"),
            Method::Car { .. } => "car".to_string(),
        }
    }
}

/// Per-query outcome under one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerQueryRecord {
    pub query_id: String,
    pub hit: bool,
    pub any_hit: bool,
    pub retained_count: usize,
    pub cutoff: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_config: Option<ClusteringConfig>,
}

/// Aggregate metrics for one method over a query set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    /// Fraction of queries with every gold document retained.
    pub accuracy: f64,
    /// Fraction of queries with at least one gold document retained.
    pub any_hit_rate: f64,
    pub avg_candidates: f64,
    pub tes: f64,
    pub per_query: Vec<PerQueryRecord>,
}

/// True iff every gold id appears among the retained candidates.
pub fn accuracy_hit(retained: &RankedList, gold_ids: &BTreeSet<String>) -> bool {
    gold_ids
        .iter()
        .all(|g| retained.candidates.iter().any(|c| &c.doc_id == g))
}

/// True iff at least one gold id appears among the retained candidates.
pub fn any_hit(retained: &RankedList, gold_ids: &BTreeSet<String>) -> bool {
    gold_ids
        .iter()
        .any(|g| retained.candidates.iter().any(|c| &c.doc_id == g))
}

/// `accuracy / ln(1 + avg_candidates)`.
pub fn tes(accuracy: f64, avg_candidates: f64) -> Result<f64> {
    if avg_candidates <= 0.0 || avg_candidates.is_nan() {
        return Err(Error::NonPositiveCandidates(avg_candidates));
    }
    Ok(accuracy / (1.0 + avg_candidates).ln())
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn resolve_pool(
    query: &LabeledQuery,
    store: Option<&EmbeddingStore>,
    pool_size: usize,
) -> Result<RankedList> {
    if let Some(ranked) = &query.ranked {
        ranked.validate()?;
        return Ok(ranked.clone());
    }
    match (&query.vector, store) {
        (Some(v), Some(store)) => store.retrieve_top_n(query.query_id.clone(), v, pool_size),
        _ => Err(Error::UnresolvableQuery {
            query_id: query.query_id.clone(),
        }),
    }
}

/// Runs every method over the query set. All methods for a given query share
/// one candidate pool, so only the cutoff policy differs. Reports come back
/// sorted by method name.
pub fn evaluate(
    queries: &[LabeledQuery],
    store: Option<&EmbeddingStore>,
    pool_size: usize,
    methods: &[Method],
) -> Result<Vec<EvalReport>> {
    let pools: Vec<RankedList> = queries
        .iter()
        .map(|q| resolve_pool(q, store, pool_size))
        .collect::<Result<_>>()?;

    let mut reports = Vec::with_capacity(methods.len());
    for method in methods {
        let per_query: Vec<PerQueryRecord> = queries
            .par_iter()
            .zip(pools.par_iter())
            .enumerate()
            .map(|(idx, (query, pool))| -> Result<PerQueryRecord> {
                let (retained, cutoff, best_config) = match method {
                    Method::TopK(k) => {
                        let count = (*k).min(pool.len());
                        let retained = RankedList {
                            query_id: pool.query_id.clone(),
                            candidates: pool.candidates[..count].to_vec(),
                        };
                        (retained, count, None)
                    }
                    Method::Car {
                        grid,
                        seed,
                        options,
                    } => {
                        let out = run_car_on_distances_with(
                            pool,
                            grid,
                            mix_seed(*seed, idx as u64),
                            *options,
                        )?;
                        (out.retained, out.decision.cutoff, out.decision.best_config)
                    }
                };
                Ok(PerQueryRecord {
                    query_id: query.query_id.clone(),
                    hit: accuracy_hit(&retained, &query.gold_ids),
                    any_hit: any_hit(&retained, &query.gold_ids),
                    retained_count: retained.len(),
                    cutoff,
                    best_config,
                })
            })
            .collect::<Result<_>>()?;

        let q = per_query.len() as f64;
        let accuracy = per_query.iter().filter(|r| r.hit).count() as f64 / q;
        let any_hit_rate = per_query.iter().filter(|r| r.any_hit).count() as f64 / q;
        let avg_candidates = per_query
            .iter()
            .map(|r| r.retained_count as f64)
            .sum::<f64>()
            / q;
        reports.push(EvalReport {
            method: method.name(),
            accuracy,
            any_hit_rate,
            avg_candidates,
            tes: tes(accuracy, avg_candidates)?,
            per_query,
        });
    }
    reports.sort_by(|a, b| a.method.cmp(&b.method));
    Ok(reports)
}

/// Smallest pool size N whose top-N contains all gold documents for at least
/// `coverage` of the queries.
pub fn calibrate_n(
    queries: &[LabeledQuery],
    store: &EmbeddingStore,
    coverage: f64,
) -> Result<usize> {
    assert!(
        coverage > 0.0 && coverage <= 1.0,
        "coverage must be in (0, 1]"
    );
    let mut worst_ranks: Vec<Option<usize>> = Vec::with_capacity(queries.len());
    for query in queries {
        let full = resolve_pool(query, Some(store), store.len())?;
        let mut worst = Some(0usize);
        for gold in &query.gold_ids {
            match full.candidates.iter().find(|c| &c.doc_id == gold) {
                Some(c) => worst = worst.map(|w| w.max(c.rank)),
                None => worst = None,
            }
        }
        worst_ranks.push(worst);
    }
    let needed = (coverage * queries.len() as f64).ceil() as usize;
    let mut reachable: Vec<usize> = worst_ranks.iter().filter_map(|w| *w).collect();
    reachable.sort_unstable();
    if reachable.len() < needed {
        return Err(Error::UnreachableCoverage { coverage });
    }
    Ok(reachable[needed - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knn::Metric;
    use crate::silhouette::build_default_grid;
    use crate::types::{AlgorithmKind, EmbeddingRecord};

    fn retained(ids: &[&str]) -> RankedList {
        RankedList::from_sorted_pairs(
            "q",
            ids.iter()
                .enumerate()
                .map(|(i, id)| (id.to_string(), i as f64 * 0.1)),
        )
        .unwrap()
    }

    fn gold(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn accuracy_hit_examples() {
        assert!(accuracy_hit(&retained(&["A", "B"]), &gold(&["A"])));
        assert!(!accuracy_hit(&retained(&["A", "B"]), &gold(&["A", "C"])));
        assert!(accuracy_hit(
            &retained(&["C", "A", "B"]),
            &gold(&["A", "C"])
        ));
        assert!(any_hit(&retained(&["A", "B"]), &gold(&["A", "C"])));
    }

    #[test]
    fn tes_table_values() {
        assert!((tes(0.97, 3.0).unwrap() - 0.700).abs() < 1e-3);
        assert!((tes(0.98, 2.1).unwrap() - 0.866).abs() < 1e-3);
        assert!((tes(1.00, 10.0).unwrap() - 0.417).abs() < 1e-3);
        assert_eq!(tes(0.0, 7.0).unwrap(), 0.0);
        assert!(matches!(
            tes(0.5, 0.0),
            Err(Error::NonPositiveCandidates(_))
        ));
    }

    #[test]
    fn top_k_avg_candidates_is_exact() {
        let queries: Vec<LabeledQuery> = (0..4)
            .map(|i| LabeledQuery {
                query_id: format!("q{i}"),
                vector: None,
                ranked: Some(retained(&["A", "B", "C", "D", "E"])),
                gold_ids: gold(&["A"]),
            })
            .collect();
        let reports = evaluate(&queries, None, 5, &[Method::TopK(3)]).unwrap();
        assert_eq!(reports[0].avg_candidates, 3.0);
        assert_eq!(reports[0].accuracy, 1.0);
    }

    #[test]
    fn single_query_cutoff_one() {
        // gold at rank 1, CAR returning C = 1 -> TES = 1/ln 2
        let mut distances = vec![0.0];
        distances.extend((0..9).map(|i| 0.9 + 0.01 * i as f64));
        let ranked = RankedList::from_sorted_pairs(
            "q",
            distances
                .iter()
                .enumerate()
                .map(|(i, &d)| (if i == 0 { "G".into() } else { format!("d{i}") }, d)),
        )
        .unwrap();
        let queries = vec![LabeledQuery {
            query_id: "q".into(),
            vector: None,
            ranked: Some(ranked),
            gold_ids: gold(&["G"]),
        }];
        let grid = build_default_grid(AlgorithmKind::Kmeans, 10).unwrap();
        let reports = evaluate(
            &queries,
            None,
            10,
            &[Method::Car {
                grid,
                seed: 0,
                options: CarOptions::default(),
            }],
        )
        .unwrap();
        assert_eq!(reports[0].accuracy, 1.0);
        assert_eq!(reports[0].avg_candidates, 1.0);
        assert!((reports[0].tes - 1.0 / 2f64.ln()).abs() < 1e-12);
    }

    fn line_store(n: usize) -> EmbeddingStore {
        let records = (0..n)
            .map(|i| EmbeddingRecord {
                id: format!("d{i:03}"),
                vector: vec![i as f64, 1.0],
            })
            .collect();
        EmbeddingStore::new(records, Metric::Euclidean).unwrap()
    }

    #[test]
    fn calibrate_n_from_gold_ranks() {
        // gold ranks {1,1,2,3,7,12,40,55,60,80} at coverage 0.9 -> N = 60
        let store = line_store(100);
        let ranks = [1usize, 1, 2, 3, 7, 12, 40, 55, 60, 80];
        let queries: Vec<LabeledQuery> = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| LabeledQuery {
                query_id: format!("q{i}"),
                vector: Some(vec![0.0, 1.0]),
                ranked: None,
                gold_ids: gold(&[&format!("d{:03}", r - 1)]),
            })
            .collect();
        assert_eq!(calibrate_n(&queries, &store, 0.9).unwrap(), 60);
    }

    #[test]
    fn calibrate_n_trivial_and_unreachable() {
        let store = line_store(10);
        let easy = vec![LabeledQuery {
            query_id: "q".into(),
            vector: Some(vec![0.0, 1.0]),
            ranked: None,
            gold_ids: gold(&["d000"]),
        }];
        assert_eq!(calibrate_n(&easy, &store, 0.9).unwrap(), 1);

        let missing = vec![LabeledQuery {
            query_id: "q".into(),
            vector: Some(vec![0.0, 1.0]),
            ranked: None,
            gold_ids: gold(&["absent"]),
        }];
        assert!(matches!(
            calibrate_n(&missing, &store, 1.0),
            Err(Error::UnreachableCoverage { .. })
        ));
    }

    #[test]
    fn top_k_accuracy_monotone_in_k() {
        let queries: Vec<LabeledQuery> = (0..6)
            .map(|i| {
                let golds = ["A", "B", "C", "D", "E"][..(i % 5) + 1].to_vec();
                LabeledQuery {
                    query_id: format!("q{i}"),
                    vector: None,
                    ranked: Some(retained(&["A", "B", "C", "D", "E"])),
                    gold_ids: gold(&golds),
                }
            })
            .collect();
        let methods: Vec<Method> = (1..=5).map(Method::TopK).collect();
        let reports = evaluate(&queries, None, 5, &methods).unwrap();
        let mut by_k: Vec<(usize, f64)> = reports
            .iter()
            .map(|r| (r.method[3..].parse::<usize>().unwrap(), r.accuracy))
            .collect();
        by_k.sort_unstable_by_key(|&(k, _)| k);
        for w in by_k.windows(2) {
            assert!(w[1].1 >= w[0].1);
        }
    }
}

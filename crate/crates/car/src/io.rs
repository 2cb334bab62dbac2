//! File formats: JSONL corpora, queries, ranked lists, and decision records,
//! plus the report JSON, per-query CSV, grid files, and flag-default config
//! files. Parse errors always name the offending line.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalReport, LabeledQuery};
use crate::types::{
    ClusteringConfig, CutoffDecision, EmbeddingRecord, GridSpec, Linkage, RankedList,
};

fn parse_line<T: serde::de::DeserializeOwned>(line: &str, number: usize) -> Result<T> {
    serde_json::from_str(line).map_err(|e| Error::Parse {
        line: number,
        message: e.to_string(),
    })
}

fn read_jsonl<T: serde::de::DeserializeOwned>(reader: impl Read) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(&line, i + 1)?);
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<Vec<EmbeddingRecord>> {
    read_jsonl(std::fs::File::open(path)?)
}

pub fn read_queries(path: &Path) -> Result<Vec<LabeledQuery>> {
    #[derive(Deserialize)]
    struct Wire {
        query_id: String,
        #[serde(default)]
        vector: Option<Vec<f64>>,
        #[serde(default)]
        gold_ids: Option<Vec<String>>,
    }
    let wires: Vec<Wire> = read_jsonl(std::fs::File::open(path)?)?;
    Ok(wires
        .into_iter()
        .map(|w| LabeledQuery {
            query_id: w.query_id,
            vector: w.vector,
            ranked: None,
            gold_ids: w.gold_ids.unwrap_or_default().into_iter().collect(),
        })
        .collect())
}

/// One line of a ranked-lists file; `labels` is only honored by the
/// label-pinning debug path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankedLine {
    #[serde(flatten)]
    pub list: RankedList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i32>>,
}

pub fn read_ranked(path: &Path) -> Result<Vec<RankedLine>> {
    let lines: Vec<RankedLine> = read_jsonl(std::fs::File::open(path)?)?;
    for (i, l) in lines.iter().enumerate() {
        l.list.validate().map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
    }
    Ok(lines)
}

pub fn write_ranked(writer: &mut impl Write, lists: &[RankedList]) -> Result<()> {
    for list in lists {
        serde_json::to_writer(&mut *writer, list).map_err(std::io::Error::from)?;
        writeln!(writer)?;
    }
    Ok(())
}

/// Audit record emitted per query by the cutoff command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub query_id: String,
    pub cutoff: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen_boundary: Option<usize>,
    pub boundaries: Vec<usize>,
    pub gaps: BTreeMap<usize, f64>,
    pub scores: BTreeMap<usize, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ClusteringConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub silhouette: Option<f64>,
    pub retained: Vec<String>,
}

impl DecisionRecord {
    pub fn new(query_id: String, decision: CutoffDecision, retained: &RankedList) -> Self {
        DecisionRecord {
            query_id,
            cutoff: decision.cutoff,
            chosen_boundary: decision.chosen_boundary,
            boundaries: decision.boundaries,
            gaps: decision.gaps,
            scores: decision.scores,
            config: decision.best_config,
            silhouette: decision.best_silhouette,
            retained: retained
                .candidates
                .iter()
                .map(|c| c.doc_id.clone())
                .collect(),
        }
    }
}

pub fn write_decisions(writer: &mut impl Write, records: &[DecisionRecord]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut *writer, record).map_err(std::io::Error::from)?;
        writeln!(writer)?;
    }
    Ok(())
}

/// Report JSON: an array of `{method, accuracy, avg_candidates, tes}`.
pub fn write_report(writer: &mut impl Write, reports: &[EvalReport]) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        method: &'a str,
        accuracy: f64,
        avg_candidates: f64,
        tes: f64,
    }
    let rows: Vec<Row> = reports
        .iter()
        .map(|r| Row {
            method: &r.method,
            accuracy: r.accuracy,
            avg_candidates: r.avg_candidates,
            tes: r.tes,
        })
        .collect();
    serde_json::to_writer_pretty(&mut *writer, &rows).map_err(std::io::Error::from)?;
    writeln!(writer)?;
    Ok(())
}

/// Per-query CSV with columns `query_id,method,retained_count,hit`.
pub fn write_per_query_csv(writer: &mut impl Write, reports: &[EvalReport]) -> Result<()> {
    writeln!(writer, "query_id,method,retained_count,hit")?;
    for report in reports {
        for row in &report.per_query {
            writeln!(
                writer,
                "{},{},{},{}",
                row.query_id, report.method, row.retained_count, row.hit
            )?;
        }
    }
    Ok(())
}

/// Parses a grid file: `key = v1, v2, ...` lines, `#` comments. The
/// `algorithm` key is required; list-valued parameter keys are expanded as a
/// cartesian product in a fixed per-algorithm nesting order.
///
/// ```text
/// algorithm = dbscan
/// eps = 0.1, 0.325, 0.55
/// min_samples = 2, 3
/// ```
pub fn parse_grid_file(content: &str) -> Result<GridSpec> {
    let mut keys: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, values) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = values`".into(),
        })?;
        keys.insert(
            key.trim().to_string(),
            values.split(',').map(|v| v.trim().to_string()).collect(),
        );
    }
    let algorithm = keys
        .remove("algorithm")
        .and_then(|v| v.into_iter().next())
        .ok_or_else(|| Error::InvalidGrid("grid file must set `algorithm`".into()))?;

    let usizes = |keys: &BTreeMap<String, Vec<String>>, key: &str| -> Result<Vec<usize>> {
        keys.get(key)
            .ok_or_else(|| Error::InvalidGrid(format!("missing key {key:?}")))?
            .iter()
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidGrid(format!("bad value {v:?} for {key}")))
            })
            .collect()
    };
    let floats = |keys: &BTreeMap<String, Vec<String>>, key: &str| -> Result<Vec<f64>> {
        keys.get(key)
            .ok_or_else(|| Error::InvalidGrid(format!("missing key {key:?}")))?
            .iter()
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidGrid(format!("bad value {v:?} for {key}")))
            })
            .collect()
    };

    let configs: Vec<ClusteringConfig> = match algorithm.as_str() {
        "kmeans" => usizes(&keys, "n_clusters")?
            .into_iter()
            .map(|n_clusters| ClusteringConfig::Kmeans { n_clusters })
            .collect(),
        "bisecting_kmeans" => usizes(&keys, "n_clusters")?
            .into_iter()
            .map(|n_clusters| ClusteringConfig::BisectingKmeans { n_clusters })
            .collect(),
        "dbscan" => {
            let eps = floats(&keys, "eps")?;
            let min_samples = usizes(&keys, "min_samples")?;
            eps.into_iter()
                .flat_map(|eps| {
                    min_samples
                        .iter()
                        .map(move |&min_samples| ClusteringConfig::Dbscan { eps, min_samples })
                })
                .collect()
        }
        "agglomerative" => {
            let n_clusters = usizes(&keys, "n_clusters")?;
            let linkages: Vec<Linkage> = keys
                .get("linkage")
                .ok_or_else(|| Error::InvalidGrid("missing key \"linkage\"".into()))?
                .iter()
                .map(|v| v.parse())
                .collect::<Result<_>>()?;
            n_clusters
                .into_iter()
                .flat_map(|n_clusters| {
                    linkages
                        .iter()
                        .map(move |&linkage| ClusteringConfig::Agglomerative {
                            n_clusters,
                            linkage,
                        })
                })
                .collect()
        }
        "birch" => {
            let n_clusters = usizes(&keys, "n_clusters")?;
            let thresholds = floats(&keys, "threshold")?;
            n_clusters
                .into_iter()
                .flat_map(|n_clusters| {
                    thresholds
                        .iter()
                        .map(move |&threshold| ClusteringConfig::Birch {
                            n_clusters,
                            threshold,
                        })
                })
                .collect()
        }
        other => return Err(Error::UnknownAlgorithm(other.to_string())),
    };
    GridSpec::new(configs)
}

/// Loads a `key = value` config file used as defaults for CLI flags.
pub fn parse_config_file(content: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

//! Command-line surface around the adaptive-retrieval library.
//!
//! Subcommands mirror the pipeline stages: `retrieve` produces ranked-list
//! JSONL from a corpus and queries, `cutoff` turns ranked lists into cutoff
//! decision records, `evaluate` benchmarks cutoff policies, and `gen` writes
//! synthetic query sets. Output ordering is deterministic regardless of
//! `--jobs`; data files never contain timestamps.
//!
//! Exit codes: 2 parse error, 3 dimension mismatch, 4 invalid grid or unknown
//! algorithm, 5 unresolvable query, 1 anything else.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use car::error::Error;
use car::eval::{evaluate, Method};
use car::io::{
    parse_config_file, parse_grid_file, read_corpus, read_queries, read_ranked, write_decisions,
    write_per_query_csv, write_ranked, write_report, DecisionRecord, RankedLine,
};
use car::knn::{EmbeddingStore, Metric, DEFAULT_POOL_SIZE};
use car::pipeline::{run_car_on_distances_with, run_car_with_labels, CarOptions};
use car::silhouette::build_default_grid;
use car::synth::{generate, SyntheticSpec};
use car::types::{AlgorithmKind, ClusterAssignment, GridSpec, RankedList};

#[derive(Parser)]
#[command(name = "car", about = "Cluster-based adaptive retrieval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Retrieve top-N candidates for each query against a corpus
    Retrieve(RetrieveArgs),
    /// Select adaptive cutoffs for precomputed ranked lists
    Cutoff(CutoffArgs),
    /// Benchmark cutoff policies over a labeled query set
    Evaluate(EvaluateArgs),
    /// Generate a synthetic labeled query set
    Gen(GenArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file with `key = value` defaults mirroring flag names
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for per-query parallelism
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RetrieveArgs {
    /// Corpus JSONL: {"id": str, "vector": [float, ...]}
    #[arg(long)]
    corpus: PathBuf,
    /// Queries JSONL: {"query_id": str, "vector": [float, ...]}
    #[arg(long)]
    queries: PathBuf,
    /// Candidate pool size per query
    #[arg(long)]
    n: Option<usize>,
    /// cosine | euclidean
    #[arg(long)]
    metric: Option<String>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CutoffArgs {
    /// Ranked-lists JSONL (the output of `car retrieve`)
    #[arg(long)]
    ranked: PathBuf,
    /// Clustering backbone for the default grid
    #[arg(long)]
    algorithm: Option<String>,
    /// Grid file overriding the default search space
    #[arg(long)]
    grid_file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scale the rank axis to i/N before clustering
    #[arg(long)]
    scale_index: Option<bool>,
    /// Use the `labels` field of each ranked line instead of clustering
    #[arg(long)]
    pin_labels: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Precomputed ranked-lists JSONL (shared pools)
    #[arg(long)]
    ranked: Option<PathBuf>,
    /// Corpus JSONL, for pools retrieved from query vectors
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Queries JSONL with gold_ids
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Comma-separated list, e.g. "top3,top5,top10,car"
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    grid_file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scale_index: Option<bool>,
    /// Report JSON path; stdout when omitted
    #[arg(long)]
    report: Option<PathBuf>,
    /// Per-query CSV path
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Compute a single TES from an external (accuracy, avg-candidates) pair
    #[arg(long, num_args = 2, value_names = ["ACCURACY", "AVG_CANDIDATES"])]
    tes_only: Option<Vec<f64>>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GenArgs {
    /// SyntheticSpec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// Queries JSONL output (query_id + gold_ids)
    #[arg(long)]
    out: PathBuf,
    /// Ranked-lists JSONL output; defaults to `<out>.ranked.jsonl`
    #[arg(long)]
    ranked_out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => 2,
        Error::DimensionMismatch { .. } => 3,
        Error::InvalidGrid(_) | Error::UnknownAlgorithm(_) => 4,
        Error::UnresolvableQuery { .. } => 5,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Retrieve(args) => cmd_retrieve(args),
        Command::Cutoff(args) => cmd_cutoff(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Gen(args) => cmd_gen(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}

/// Layered settings: flag > config file > environment > built-in default.
struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let config = match path {
            Some(p) => parse_config_file(&std::fs::read_to_string(p)?)?,
            None => BTreeMap::new(),
        };
        Ok(Settings { config })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Option<T> {
        flag.or_else(|| self.config.get(key).and_then(|v| v.parse().ok()))
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        self.get(flag, "seed")
            .or_else(|| std::env::var("CAR_SEED").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(0)
    }
}

fn init_jobs(jobs: Option<usize>) {
    if let Some(jobs) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn load_grid(
    grid_file: Option<&Path>,
    algorithm: Option<&str>,
    n_points: usize,
) -> Result<GridSpec, Error> {
    match grid_file {
        Some(p) => parse_grid_file(&std::fs::read_to_string(p)?),
        None => {
            let kind: AlgorithmKind = algorithm.unwrap_or("kmeans").parse()?;
            build_default_grid(kind, n_points.max(2))
        }
    }
}

fn cmd_retrieve(args: RetrieveArgs) -> Result<(), Error> {
    let settings = Settings::load(args.common.config.as_deref())?;
    init_jobs(args.common.jobs);
    let n = settings.get(args.n, "n").unwrap_or(DEFAULT_POOL_SIZE);
    let metric: Metric = settings
        .get(args.metric, "metric")
        .unwrap_or_else(|| "cosine".into())
        .parse()?;

    let store = EmbeddingStore::new(read_corpus(&args.corpus)?, metric)?;
    let queries = read_queries(&args.queries)?;
    let mut lists = Vec::with_capacity(queries.len());
    for q in &queries {
        let vector = q.vector.as_ref().ok_or_else(|| Error::UnresolvableQuery {
            query_id: q.query_id.clone(),
        })?;
        lists.push(store.retrieve_top_n(q.query_id.clone(), vector, n)?);
    }
    let mut out = open_out(args.out.as_deref())?;
    write_ranked(&mut out, &lists)
}

fn cmd_cutoff(args: CutoffArgs) -> Result<(), Error> {
    let settings = Settings::load(args.common.config.as_deref())?;
    init_jobs(args.common.jobs);
    let seed = settings.seed(args.seed);
    let scale_index = settings
        .get(args.scale_index, "scale_index")
        .unwrap_or(true);
    let algorithm = settings.get(args.algorithm, "algorithm");
    let grid_file = args
        .grid_file
        .or_else(|| settings.config.get("grid_file").map(PathBuf::from));
    let options = CarOptions { scale_index };

    let lines: Vec<RankedLine> = read_ranked(&args.ranked)?;
    let mut records = Vec::with_capacity(lines.len());
    for line in &lines {
        let outcome = if args.pin_labels {
            let labels = line.labels.clone().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!(
                    "--pin-labels set but query {:?} has no labels field",
                    line.list.query_id
                ),
            })?;
            run_car_with_labels(&line.list, &ClusterAssignment::new(labels))?
        } else {
            let grid = load_grid(grid_file.as_deref(), algorithm.as_deref(), line.list.len())?;
            run_car_on_distances_with(&line.list, &grid, seed, options)?
        };
        records.push(DecisionRecord::new(
            line.list.query_id.clone(),
            outcome.decision,
            &outcome.retained,
        ));
    }
    let mut out = open_out(args.out.as_deref())?;
    write_decisions(&mut out, &records)
}

fn parse_methods(
    spec: &str,
    grid: GridSpec,
    seed: u64,
    options: CarOptions,
) -> Result<Vec<Method>, Error> {
    let mut methods = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if token == "car" {
            methods.push(Method::Car {
                grid: grid.clone(),
                seed,
                options,
            });
        } else if let Some(k) = token.strip_prefix("top") {
            let k: usize = k.parse().map_err(|_| {
                Error::InvalidConfig(format!("bad method {token:?}; expected topK or car"))
            })?;
            methods.push(Method::TopK(k));
        } else {
            return Err(Error::InvalidConfig(format!(
                "bad method {token:?}; expected topK or car"
            )));
        }
    }
    if methods.is_empty() {
        return Err(Error::InvalidConfig("no methods given".into()));
    }
    Ok(methods)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), Error> {
    let settings = Settings::load(args.common.config.as_deref())?;
    init_jobs(args.common.jobs);

    if let Some(pair) = &args.tes_only {
        let value = car::eval::tes(pair[0], pair[1])?;
        println!("{value:.3}");
        return Ok(());
    }

    let seed = settings.seed(args.seed);
    let n = settings.get(args.n, "n").unwrap_or(DEFAULT_POOL_SIZE);
    let scale_index = settings
        .get(args.scale_index, "scale_index")
        .unwrap_or(true);
    let options = CarOptions { scale_index };
    let queries_path = args
        .queries
        .or_else(|| settings.config.get("queries").map(PathBuf::from))
        .ok_or_else(|| Error::InvalidConfig("--queries is required".into()))?;
    let mut queries = read_queries(&queries_path)?;

    let store = match &args.corpus {
        Some(path) => {
            let metric: Metric = settings
                .get(args.metric, "metric")
                .unwrap_or_else(|| "cosine".into())
                .parse()?;
            Some(EmbeddingStore::new(read_corpus(path)?, metric)?)
        }
        None => None,
    };
    if let Some(path) = &args.ranked {
        let pools: BTreeMap<String, RankedList> = read_ranked(path)?
            .into_iter()
            .map(|l| (l.list.query_id.clone(), l.list))
            .collect();
        for q in &mut queries {
            q.ranked = pools.get(&q.query_id).cloned();
        }
    }

    let max_pool = queries
        .iter()
        .map(|q| q.ranked.as_ref().map_or(n, RankedList::len))
        .max()
        .unwrap_or(n);
    let grid_file = args
        .grid_file
        .or_else(|| settings.config.get("grid_file").map(PathBuf::from));
    let algorithm = settings.get(args.algorithm, "algorithm");
    let grid = load_grid(grid_file.as_deref(), algorithm.as_deref(), max_pool)?;

    let methods_spec = settings
        .get(args.methods, "methods")
        .unwrap_or_else(|| "top3,top5,top10,car".into());
    let methods = parse_methods(&methods_spec, grid, seed, options)?;

    let reports = evaluate(&queries, store.as_ref(), n, &methods)?;
    for report in &reports {
        eprintln!(
            "{}: accuracy {:.4}, any-hit {:.4}, avg candidates {:.4}, TES {:.4}",
            report.method, report.accuracy, report.any_hit_rate, report.avg_candidates, report.tes
        );
    }
    if let Some(path) = &args.csv {
        let mut csv = std::fs::File::create(path)?;
        write_per_query_csv(&mut csv, &reports)?;
    }
    let mut out = open_out(args.report.as_deref())?;
    write_report(&mut out, &reports)
}

fn cmd_gen(args: GenArgs) -> Result<(), Error> {
    let _ = Settings::load(args.common.config.as_deref())?;
    let spec: SyntheticSpec =
        serde_json::from_str(&std::fs::read_to_string(&args.spec)?).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    let queries = generate(&spec)?;

    let mut out = std::fs::File::create(&args.out)?;
    for q in &queries {
        let gold: Vec<&String> = q.gold_ids.iter().collect();
        serde_json::to_writer(
            &mut out,
            &serde_json::json!({ "query_id": q.query_id, "gold_ids": gold }),
        )
        .map_err(std::io::Error::from)?;
        writeln!(out)?;
    }

    let ranked_path = args.ranked_out.unwrap_or_else(|| {
        let mut p = args.out.as_os_str().to_owned();
        p.push(".ranked.jsonl");
        PathBuf::from(p)
    });
    let lists: Vec<RankedList> = queries.into_iter().filter_map(|q| q.ranked).collect();
    let mut ranked_out = std::fs::File::create(&ranked_path)?;
    write_ranked(&mut ranked_out, &lists)
}

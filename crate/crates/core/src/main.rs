use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use hyperlap::classify::{DEFAULT_KNN_K, DEFAULT_RIDGE};
use hyperlap::construction::{Bandwidth, EdgeWeighting, DEFAULT_KNN_HYPEREDGE};
use hyperlap::harness::{
    build_hypergraph, load_csv, run_experiment, stratified_split, ClassifierSpec,
    ConstructionParams, Grid, Normalize, DEFAULT_SEED,
};
use hyperlap::spectral::{DimensionRule, LaplacianSpectrum};
use hyperlap::{Error, Hypergraph, Variant};

/// Hypergraph Laplacian eigenmaps and embed-then-classify experiments.
#[derive(Debug, Parser)]
#[command(name = "hyperlap", version)]
struct Cli {
    /// TOML file supplying defaults for any flag (keys use the flag names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Embed every sample of a label-first CSV and write the coordinates.
    Embed(EmbedArgs),
    /// Run the train/test accuracy grid and write a report.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct ConstructionArgs {
    /// Neighbors per hyperedge (each hyperedge holds a sample and its k nearest).
    #[arg(long)]
    knn_hyperedge: Option<usize>,
    /// unit | gaussian
    #[arg(long)]
    edge_weight: Option<String>,
    /// Gaussian hyperedge-weight bandwidth, or auto.
    #[arg(long)]
    sigma: Option<String>,
    /// none | unit | zscore
    #[arg(long)]
    normalize: Option<String>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// comb | rw | sym
    #[arg(long)]
    laplacian: Option<String>,
    #[arg(long, conflicts_with = "auto")]
    dim: Option<usize>,
    /// components | gap-diff | gap-ratio
    #[arg(long)]
    auto: Option<String>,
    #[command(flatten)]
    construction: ConstructionArgs,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the constructed hypergraph as JSON.
    #[arg(long)]
    hypergraph_out: Option<PathBuf>,
    /// Embed this JSON hypergraph instead of building one from --input.
    #[arg(long)]
    hypergraph_in: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    train_per_class: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated embedding dimensions.
    #[arg(long, value_delimiter = ',')]
    grid_dims: Option<Vec<usize>>,
    /// Comma-separated Laplacian variants.
    #[arg(long, value_delimiter = ',')]
    laplacians: Option<Vec<String>>,
    /// knn | krr (comma-separate to run both)
    #[arg(long, value_delimiter = ',')]
    classifier: Option<Vec<String>>,
    #[arg(long)]
    knn_k: Option<usize>,
    #[arg(long)]
    ridge: Option<f64>,
    /// KRR kernel bandwidth, or auto.
    #[arg(long)]
    bandwidth: Option<String>,
    #[command(flatten)]
    construction: ConstructionArgs,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    markdown: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Float(f64),
    Str(String),
}

impl Scalar {
    fn into_string(self) -> String {
        match self {
            Scalar::Int(i) => i.to_string(),
            Scalar::Float(x) => x.to_string(),
            Scalar::Str(s) => s,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum List {
    Many(Vec<String>),
    One(String),
}

impl List {
    fn into_vec(self) -> Vec<String> {
        match self {
            List::Many(v) => v,
            List::One(s) => s.split(',').map(|x| x.trim().to_owned()).collect(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    laplacian: Option<String>,
    dim: Option<usize>,
    auto: Option<String>,
    knn_hyperedge: Option<usize>,
    edge_weight: Option<String>,
    sigma: Option<Scalar>,
    normalize: Option<String>,
    output: Option<PathBuf>,
    hypergraph_out: Option<PathBuf>,
    hypergraph_in: Option<PathBuf>,
    train_per_class: Option<usize>,
    seed: Option<u64>,
    grid_dims: Option<Vec<usize>>,
    laplacians: Option<List>,
    classifier: Option<List>,
    knn_k: Option<usize>,
    ridge: Option<f64>,
    bandwidth: Option<Scalar>,
    report: Option<PathBuf>,
    markdown: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, Error> {
    s.parse()
}

fn construction_params(
    args: ConstructionArgs,
    cfg: &mut FileConfig,
) -> Result<ConstructionParams, Error> {
    let weighting = match args.edge_weight.or(cfg.edge_weight.take()) {
        Some(s) => parse::<EdgeWeighting>(&s)?,
        None => EdgeWeighting::Unit,
    };
    let sigma = match args.sigma.or(cfg.sigma.take().map(Scalar::into_string)) {
        Some(s) => parse::<Bandwidth>(&s)?,
        None => Bandwidth::Auto,
    };
    let normalize = match args.normalize.or(cfg.normalize.take()) {
        Some(s) => parse::<Normalize>(&s)?,
        None => Normalize::None,
    };
    Ok(ConstructionParams {
        knn_hyperedge: args
            .knn_hyperedge
            .or(cfg.knn_hyperedge)
            .unwrap_or(DEFAULT_KNN_HYPEREDGE),
        weighting,
        sigma,
        normalize,
    })
}

fn missing(flag: &str) -> Error {
    Error::InvalidParameter(format!("--{flag} is required"))
}

fn embed(args: EmbedArgs, mut cfg: FileConfig) -> Result<(), Error> {
    let variant = match args.laplacian.or(cfg.laplacian.take()) {
        Some(s) => parse::<Variant>(&s)?,
        None => return Err(missing("laplacian")),
    };
    let rule = match (args.dim, args.auto) {
        (Some(d), _) => DimensionRule::Fixed(d),
        (None, Some(a)) => parse::<DimensionRule>(&a)?,
        (None, None) => match (cfg.dim, cfg.auto.take()) {
            (Some(d), _) => DimensionRule::Fixed(d),
            (None, Some(a)) => parse::<DimensionRule>(&a)?,
            (None, None) => return Err(missing("dim or --auto")),
        },
    };
    let output = args
        .output
        .or(cfg.output.take())
        .ok_or_else(|| missing("output"))?;
    let params = construction_params(args.construction, &mut cfg)?;

    let graph = match args.hypergraph_in.or(cfg.hypergraph_in.take()) {
        Some(path) => Hypergraph::read_json(path)?,
        None => {
            let input = args
                .input
                .or(cfg.input.take())
                .ok_or_else(|| missing("input"))?;
            let ds = load_csv(input)?;
            build_hypergraph(ds.samples.view(), &params)?
        }
    };
    if let Some(path) = args.hypergraph_out.or(cfg.hypergraph_out.take()) {
        graph.write_json(path)?;
    }
    let embedding = LaplacianSpectrum::compute(&graph, variant)?.embed(rule)?;
    embedding.save_csv(&output)?;
    eprintln!(
        "embedded {} vertices into {} dimensions with the {} Laplacian",
        embedding.n(),
        embedding.k,
        variant
    );
    Ok(())
}

fn eval(args: EvalArgs, mut cfg: FileConfig) -> Result<(), Error> {
    let input = args
        .input
        .or(cfg.input.take())
        .ok_or_else(|| missing("input"))?;
    let report_path = args
        .report
        .or(cfg.report.take())
        .ok_or_else(|| missing("report"))?;
    let train_per_class = args.train_per_class.or(cfg.train_per_class).unwrap_or(8);
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let dims = args
        .grid_dims
        .or(cfg.grid_dims.take())
        .unwrap_or_else(|| vec![20, 30, 40]);
    let variants = match args
        .laplacians
        .or(cfg.laplacians.take().map(List::into_vec))
    {
        Some(v) => v
            .iter()
            .map(|s| parse::<Variant>(s))
            .collect::<Result<_, _>>()?,
        None => Variant::ALL.to_vec(),
    };
    let knn_k = args.knn_k.or(cfg.knn_k).unwrap_or(DEFAULT_KNN_K);
    let ridge = args.ridge.or(cfg.ridge).unwrap_or(DEFAULT_RIDGE);
    let bandwidth = match args
        .bandwidth
        .or(cfg.bandwidth.take().map(Scalar::into_string))
    {
        Some(s) => parse::<Bandwidth>(&s)?,
        None => Bandwidth::Auto,
    };
    let classifiers = args
        .classifier
        .or(cfg.classifier.take().map(List::into_vec))
        .unwrap_or_else(|| vec!["knn".into()])
        .iter()
        .map(|c| match c.as_str() {
            "knn" => Ok(ClassifierSpec::Knn { k: knn_k }),
            "krr" => Ok(ClassifierSpec::Krr { ridge, bandwidth }),
            other => Err(Error::InvalidParameter(format!(
                "unknown classifier {other:?} (expected knn or krr)"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let markdown = args.markdown.or(cfg.markdown.take());
    let params = construction_params(args.construction, &mut cfg)?;

    let ds = stratified_split(load_csv(input)?, train_per_class, seed)?;
    let grid = Grid {
        variants,
        dims,
        classifiers,
    };
    let report = run_experiment(&ds, &grid, &params)?;
    std::fs::write(&report_path, report.to_json()?)?;
    let table = report.to_markdown();
    if let Some(path) = markdown {
        std::fs::write(path, &table)?;
    }
    eprint!("{table}");
    for row in report.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: {}: {}",
            row.method,
            row.error.as_deref().unwrap_or_default()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Embed(args) => embed(args, cfg),
        Command::Eval(args) => eval(args, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

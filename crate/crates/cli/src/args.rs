use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Two-terminal reliability of directed acyclic networks.
#[derive(Debug, Parser)]
#[command(name = "dagrel", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance to a graph file.
    Generate(GenerateArgs),
    /// Estimate the reliability of a graph file; prints one JSON object.
    Estimate(EstimateArgs),
    /// Print the a-priori bound report of a graph file as JSON.
    Bounds(BoundsArgs),
    /// Exact values by enumeration, for tiny graphs.
    Exact(ExactArgs),
    /// Run both estimators over instances and seeds; prints CSV.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Oriented Delaunay triangulation of random points.
    Del {
        #[arg(long)]
        n: usize,
        /// Uniform edge intactness probability.
        #[arg(long = "q")]
        q: f64,
        #[arg(long, env = "DAGREL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Random DAG on a Hamiltonian chain with long-range edges.
    Tc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        /// Target average total degree.
        #[arg(long, default_value_t = 10.0)]
        degree: f64,
        #[arg(long, env = "DAGREL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Pathmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InfluenceArg {
    Psi,
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Fixed,
    Aa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MuArg {
    Simple,
    Exact,
}

/// Where the fixed-N scheme takes its sample count from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundSource {
    Karp,
    Improved,
    /// A user-supplied upper bound on `w(Ω)/w(A)`.
    Given(f64),
    /// A user-supplied lower bound on the reliability.
    RelLb(f64),
}

impl FromStr for BoundSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value = |v: &str| v.parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}"));
        match s.split_once(':') {
            None if s == "karp" => Ok(BoundSource::Karp),
            None if s == "improved" => Ok(BoundSource::Improved),
            Some(("given", v)) => Ok(BoundSource::Given(value(v)?)),
            Some(("rel-lb", v)) => Ok(BoundSource::RelLb(value(v)?)),
            _ => Err(format!(
                "expected karp, improved, given:VALUE or rel-lb:VALUE, got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct Accuracy {
    /// Target relative error.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Failure probability.
    #[arg(long, default_value_t = 0.001)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Pathmc)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = InfluenceArg::Psi)]
    pub influence: InfluenceArg,
    #[command(flatten)]
    pub accuracy: Accuracy,
    #[arg(long, value_enum, default_value_t = SchemeArg::Aa)]
    pub scheme: SchemeArg,
    /// Required with `--scheme fixed`: karp, improved, given:RATIO or rel-lb:REL.
    #[arg(long)]
    pub bound: Option<BoundSource>,
    #[arg(long, env = "DAGREL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Abort (exit 4) once this many samples have been drawn.
    #[arg(long)]
    pub max_samples: Option<u64>,
    /// Report wall-clock time; otherwise `elapsed` is 0 so output is reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub accuracy: Accuracy,
    #[arg(long = "mu", value_enum, default_value_t = MuArg::Exact)]
    pub mu: MuArg,
    /// Lower bound on the reliability, enables the direct sample count.
    #[arg(long)]
    pub rel_lb: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Graph files to compare.
    pub graphs: Vec<PathBuf>,
    /// Generated instances, e.g. `tc:n=1000:alpha=0.1,0.5:degree=10:gen-seed=1`
    /// or `del:n=500:q=0.2,0.4`. Repeatable.
    #[arg(long)]
    pub sweep: Vec<String>,
    #[command(flatten)]
    pub accuracy: Accuracy,
    /// Estimator seeds; one row per instance, seed and method.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long, value_enum, default_value_t = InfluenceArg::Psi)]
    pub influence: InfluenceArg,
    /// Per-run sample budget; runs over it get status budget_exceeded.
    #[arg(long)]
    pub max_samples: Option<u64>,
    #[arg(long)]
    pub timing: bool,
}

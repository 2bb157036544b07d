use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Load thresholds and simulations for k-ary cuckoo hashing.
///
/// Every run is fully determined by its flags; reals are printed with `.`
/// as the decimal separator regardless of locale.
#[derive(Debug, Parser)]
#[command(name = "kcuckoo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the core appearance point c*, its minimizer β*, and the load
    /// threshold c at which the ℓ-core reaches edge density ℓ−1.
    Threshold(ThresholdArgs),
    /// Sample a random hypergraph, peel its ℓ-core, and compare with the
    /// predicted core size.
    Core(CoreArgs),
    /// Orient a random hypergraph so no node receives more than ℓ edges.
    Orient(OrientArgs),
    /// Build the random XORSAT system of a hypergraph and solve it.
    Xorsat(XorsatArgs),
    /// Sweep loads around a threshold and tabulate failure rates as CSV.
    Sweep(SweepArgs),
    /// Fit a sigmoid to the failure rates in a sweep CSV.
    Fit(FitArgs),
}

/// Number of choices per key: a fixed k or a distribution.
#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct DegreeArgs {
    /// Every key has exactly K choices.
    #[arg(long, value_name = "K")]
    pub k: Option<u32>,
    /// Choice distribution as JSON, e.g. '{"3":0.5,"4":0.5}'.
    #[arg(long, value_name = "JSON")]
    pub spec: Option<String>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub degrees: DegreeArgs,
    /// Core order ℓ (bucket capacity ℓ−1).
    #[arg(long, value_name = "L")]
    pub ell: u32,
}

/// Where the hypergraph comes from: sampled from flags or read from a file.
#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[command(flatten)]
    pub degrees: DegreeArgs,
    /// Number of nodes (buckets).
    #[arg(long, value_name = "M", default_value_t = 10_000)]
    pub m: usize,
    /// Load c = n/m; the edge count is round(c·m).
    #[arg(long, value_name = "C", conflicts_with = "n")]
    pub c: Option<f64>,
    /// Number of edges (keys).
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// Seed for the instance (and for randomized tie-breaking).
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub seed: u64,
    /// Read the hypergraph from a text file instead of sampling one.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["k", "spec", "c", "n"])]
    pub input: Option<PathBuf>,
    /// Write the instance to a text file.
    #[arg(long, value_name = "PATH")]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoreArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Core order ℓ: every surviving node has degree at least ℓ.
    #[arg(long, value_name = "L", default_value_t = 2)]
    pub ell: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OrientMethod {
    Selfless,
    Matching,
}

#[derive(Debug, Args)]
pub struct OrientArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Bucket capacity ℓ.
    #[arg(long, value_name = "L", default_value_t = 1)]
    pub ell: u32,
    /// Orientation algorithm.
    #[arg(long, value_enum, default_value_t = OrientMethod::Selfless)]
    pub method: OrientMethod,
    /// Write the target node of each edge, one per line ("-" if unplaced).
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct XorsatArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Write a satisfying assignment, one bit per line.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub degrees: DegreeArgs,
    /// JSON file with a full sweep configuration; flags given alongside it
    /// override its fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of nodes (buckets) [default: 10000].
    #[arg(long, value_name = "M")]
    pub m: Option<usize>,
    /// Bucket capacity ℓ [default: 1].
    #[arg(long, value_name = "L")]
    pub ell: Option<u32>,
    /// Grid center [default: the analytic threshold].
    #[arg(long, value_name = "C")]
    pub center: Option<f64>,
    /// Grid half-width [default: 0.004].
    #[arg(long, value_name = "W")]
    pub half_width: Option<f64>,
    /// Grid step [default: 0.0001].
    #[arg(long, value_name = "S")]
    pub step: Option<f64>,
    /// Trials per grid point [default: 100].
    #[arg(long, value_name = "T")]
    pub trials: Option<usize>,
    /// Comma-separated methods: selfless, matching, xorsat, peel
    /// [default: selfless].
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    /// Master seed [default: 0].
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Worker threads; the output does not depend on it [default: 1].
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Record wall-clock milliseconds per method (output is then no longer
    /// reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Fit a sigmoid to the first method's failure rates and print it as
    /// JSON after the CSV.
    #[arg(long)]
    pub fit: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV to read ("-" for standard input).
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Method whose failure rates are fitted.
    #[arg(long, value_name = "METHOD", default_value = "selfless")]
    pub method: String,
}

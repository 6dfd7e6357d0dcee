use std::path::PathBuf;

use cdut::Metric;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cdut", version, about = "Chamfer distance under translation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimise CD(A + t, B) over translations t.
    Compute(ComputeArgs),
    /// Decide CDuT(A, B) <= R against > R(1 + epsilon) for well-separated B.
    Decide(DecideArgs),
    /// Write an instance (a.txt, b.txt, meta.txt) into a directory.
    Gen(GenArgs),
    /// Time algorithms on generated families.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmChoice {
    #[value(name = "exact1d")]
    Exact1d,
    #[value(name = "exact-l1linf")]
    ExactL1Linf,
    #[value(name = "approx-v1")]
    ApproxV1,
    #[value(name = "approx-v2")]
    ApproxV2,
    #[value(name = "localnet")]
    LocalNet,
    #[value(name = "oracle-1d")]
    Oracle1d,
    #[value(name = "oracle-grid")]
    OracleGrid,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// Instance file for A.
    pub a: PathBuf,
    /// Instance file for B.
    pub b: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmChoice,
    /// Overrides any metric tag in the files; l2 when neither is given.
    #[arg(long)]
    pub metric: Option<Metric>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Sampling failure probability (algorithm default when omitted).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate overlapping local nets once (localnet only).
    #[arg(long)]
    pub union_net: bool,
    /// Grid step for oracle-grid; chosen from the box size when omitted.
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Emit one JSON record instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DecideArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub anchors: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Uniform,
    Clustered,
    TranslatedCopy,
    OvGadget,
    CombinedGadget,
    SeparatedPlanted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Yes,
    No,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub generator: Generator,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Size of B (and of A unless --m is given).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Metric tag written into both files.
    #[arg(long)]
    pub metric: Option<Metric>,
    /// Half-width of the sampling box.
    #[arg(long, default_value_t = 50.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 4)]
    pub clusters: usize,
    /// Per-coordinate noise added to translated copies.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Bit vectors for A gadgets, e.g. `--x 1010`; repeat for combined gadgets.
    #[arg(long)]
    pub x: Vec<String>,
    #[arg(long)]
    pub y: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = Expectation::Yes)]
    pub answer: Expectation,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgorithmChoice::Exact1d])]
    pub algorithms: Vec<AlgorithmChoice>,
    #[arg(long, value_enum, default_value_t = Generator::Uniform)]
    pub family: Generator,
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 200, 400])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long)]
    pub metric: Option<Metric>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One JSON object per row.
    #[arg(long)]
    pub json: bool,
}

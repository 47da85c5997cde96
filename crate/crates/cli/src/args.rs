use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use htl_core::quadrature::{
    DEFAULT_LEVELS, DEFAULT_LINE_ORDER, DEFAULT_N_THETA, DEFAULT_RADIAL_ORDER,
};

#[derive(Debug, Parser)]
#[command(
    name = "htl",
    version,
    about = "Hilbert tensor operators on spaces of analytic functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Cap on worker threads.
    #[arg(long, env = "HTL_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of H(f), and optionally its value at a point by each path.
    Apply(ApplyArgs),
    /// Bergman or Hardy norm of a series.
    Norm(NormArgs),
    /// Bound constants.
    Constants(ConstantsArgs),
    /// Check the operator bound for one series or a directory of series.
    Verify(VerifyArgs),
    /// Check the per-slice bound at one or more t.
    Slice(SliceArgs),
    /// Search for inputs with a large operator ratio.
    Search(SearchArgs),
    /// Compare the three evaluation paths on a polar grid.
    Equivalence(EquivalenceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LineArgs {
    /// Gauss order per panel of the line rule.
    #[arg(long, default_value_t = DEFAULT_LINE_ORDER)]
    pub order: usize,
    /// Number of geometric panels toward s = 1.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Gauss nodes in u = r^2.
    #[arg(long, default_value_t = DEFAULT_RADIAL_ORDER)]
    pub radial_order: usize,
    /// Trapezoid nodes in the angle.
    #[arg(long, default_value_t = DEFAULT_N_THETA)]
    pub n_theta: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Paths {
    Series,
    Integral,
    Mobius,
    All,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Coefficients as a JSON array, or a path to a file holding one.
    #[arg(long)]
    pub coeffs: String,
    /// Tensor order m >= 2.
    #[arg(long)]
    pub m: u32,
    /// Number of output coefficients.
    #[arg(long = "K", short = 'K', default_value_t = 16)]
    pub k: usize,
    /// Evaluation point, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Paths used to evaluate at `--z`.
    #[arg(long, value_enum, default_value_t = Paths::All)]
    pub paths: Paths,
    /// Truncation error target for the series path at `--z`.
    #[arg(long, default_value_t = 1e-13)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub line: LineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Bergman,
    Hardy,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub coeffs: String,
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    /// Exponent, p >= 1.
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Hardy radius ladder.
    #[arg(long, value_delimiter = ',', default_values_t = htl_core::spaces::DEFAULT_HARDY_RADII)]
    pub radii: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Regime name; every regime whose domain contains (p, m) if omitted.
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    /// Tensor operator bound.
    Th,
    /// Root operator bound (even m).
    Fh,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Single input; conflicts with `--batch`.
    #[arg(long, conflicts_with = "batch", required_unless_present = "batch")]
    pub coeffs: Option<String>,
    /// Directory of `*.json` series files, processed in name order.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OperatorArg::Th)]
    pub operator: OperatorArg,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub m: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub line: LineArgs,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long)]
    pub coeffs: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub m: u32,
    /// Slice parameters in (0, 1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub m: u32,
    /// Number of real coefficients.
    #[arg(long)]
    pub n: usize,
    /// Total objective evaluations.
    #[arg(long)]
    pub budget: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = htl_core::experiments::DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Starting coefficients for the first restart (JSON array or file).
    #[arg(long)]
    pub warm_start: Option<String>,
    /// Also write the trajectory as CSV here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    /// Single input; a seeded random corpus is used if omitted.
    #[arg(long)]
    pub coeffs: Option<String>,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    /// Number of radii, evenly spaced up to `--max-radius`.
    #[arg(long, default_value_t = 5)]
    pub radii: usize,
    #[arg(long, default_value_t = 8)]
    pub angles: usize,
    #[arg(long, default_value_t = 0.9)]
    pub max_radius: f64,
    #[arg(long, default_value_t = 1e-13)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub line: LineArgs,
}

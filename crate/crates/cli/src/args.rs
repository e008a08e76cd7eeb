use std::path::PathBuf;

use borncount_core::refinement::{RefinementOrdering, DEFAULT_TAU};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "borncount",
    version,
    about = "Branch-counting convergence studies and identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a scenario state, refine it, and report counting vs Born probabilities.
    Converge(ConvergeArgs),
    /// Two-packet Stern-Gerlach endpoint: region masses and counting at depth n.
    SternGerlach(SternGerlachArgs),
    /// Equal-amplitude finite case: probability of each label.
    Finite(FiniteArgs),
    /// Label probabilities before and after absorbing the phase into a gauge record.
    Gauge(GaugeArgs),
    /// Pushforward density of a named monotone map against a finite-difference Jacobian.
    Dirac(DiracArgs),
    /// Density/phase map of a seeded wavefunctional on a field configuration space.
    Wavefunctional(WavefunctionalArgs),
    /// Member boundaries of every refinement level.
    Partition(PartitionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Macro,
    Coordinate,
}

impl From<OrderingArg> for RefinementOrdering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Macro => RefinementOrdering::MacrostateMajor,
            OrderingArg::Coordinate => RefinementOrdering::CoordinateMajor,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Directory for report files; without it the report goes to stdout.
    /// BORNCOUNT_OUT takes precedence.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct RefineArgs {
    /// Deepest level; defaults to the largest depth the grid allows.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Cell count replacing a uniform scenario grid's (power of two).
    #[arg(long, value_parser = parse_pow2)]
    pub resolution: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TAU, value_parser = parse_tau)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = OrderingArg::Macro)]
    pub ordering: OrderingArg,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SternGerlachArgs {
    /// A stern_gerlach scenario file. Without it, the spin amplitudes are drawn
    /// from `--seed` on a [-8, 8] screen with packets at +-3.5 and sigma 1.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FiniteArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated label of each component, e.g. `A,B,B,B`.
    #[arg(long, conflicts_with = "scenario")]
    pub labels: Option<String>,
    /// A finite_uniform scenario file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GaugeArgs {
    /// Scenario file; defaults to a seeded random state on [-1, 1] split into quarters.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, value_parser = parse_pow2)]
    pub resolution: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DiracArgs {
    /// identity, scale:<a>, cubic, or exp.
    #[arg(long)]
    pub map: String,
    #[arg(long, value_parser = parse_pow2, default_value = "1024")]
    pub resolution: usize,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionalArgs {
    #[arg(long, default_value_t = 2)]
    pub sites: u32,
    #[arg(long, default_value_t = 16)]
    pub levels: u32,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Moving-average window applied to the random amplitudes.
    #[arg(long, default_value_t = 0)]
    pub smoothness: usize,
    /// Absorb the phase into the gauge record before export.
    #[arg(long)]
    pub gauge: bool,
    /// Also run a convergence study with labels by the sign of phi_1.
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_TAU, value_parser = parse_tau)]
    pub tau: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[command(flatten)]
    pub refine: RefineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_pow2(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_power_of_two() {
        Ok(v)
    } else {
        Err(format!("{v} is not a power of two"))
    }
}

fn parse_tau(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("tau must be >= 0, got {s}"))
    }
}

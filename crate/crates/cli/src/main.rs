//! `qwalk`: dispersion scans, special-point searches, bound certificates,
//! wavepacket evolution and QCA runs.
//!
//! Exit codes: 0 success, 1 output file error, 2 invalid configuration,
//! 3 resource limit. Errors are printed to stderr as a JSON document.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{List, Settings};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "qwalk",
    version,
    about = "Dirac quantum walks and quantum cellular automata"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasi-energies over a momentum grid.
    Dispersion(DispersionArgs),
    /// Search a scan for doublers and pseudo-doublers.
    Doublers(DoublersArgs),
    /// Check the quasi-energy bound over a grid.
    BoundCheck(BoundArgs),
    /// Evolve a state on a periodic lattice.
    Evolve(EvolveArgs),
    /// Free second-quantized QCA on a ring.
    QcaFree(QcaFreeArgs),
    /// Gauge-invariant interacting QCA with truncated links.
    QcaSchwinger(SchwingerArgs),
    /// Random test of the eigenphase bound for products of unitaries.
    PhaseBoundTest(PhaseArgs),
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl std::str::FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WalkKind {
    Dirac,
    WeylPlus,
    WeylMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OffsetArg {
    Aligned,
    Midpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Cube,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Position,
    Momentum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EdgeArg {
    Clipped,
    Cyclic,
}

value_enum_from_str!(WalkKind, Format, OffsetArg, ShapeArg, Method, EdgeArg);

#[derive(Args, Debug, Default)]
pub struct WalkOpts {
    /// Lattice dimension: 1 or 3 [default: 1]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Family angle θ [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Dimensionless mass term mc²δt [default: 0]
    #[arg(long = "mass-dt", allow_hyphen_values = true)]
    pub mass_dt: Option<f64>,
    /// Allow θ in (−π, π) instead of (−π/2, π/2) [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub extended: Option<bool>,
    /// Three-dimensional walk [default: dirac]
    #[arg(long, value_enum)]
    pub walk: Option<WalkKind>,
}

#[derive(Args, Debug, Default)]
pub struct OutOpts {
    /// Output file; without it only the JSON summary on stdout is produced.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the output file.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub walk: WalkOpts,
    /// Grid points per axis [default: 512 in 1-D, 32 in 3-D]
    #[arg(long)]
    pub n: Option<usize>,
    /// 3-D sampling [default: cube]
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Grid offset for the 3-D cube [default: aligned]
    #[arg(long, value_enum)]
    pub offset: Option<OffsetArg>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct DoublersArgs {
    #[command(flatten)]
    pub walk: WalkOpts,
    /// Grid points per axis [default: 4096 in 1-D, 32 in 3-D]
    #[arg(long)]
    pub n: Option<usize>,
    /// 3-D sampling [default: cube]
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Grid offset for the 3-D cube [default: midpoint]
    #[arg(long, value_enum)]
    pub offset: Option<OffsetArg>,
    /// Acceptance threshold on the refined quasi-energy [default: 1e-3]
    #[arg(long = "eps-e")]
    pub eps_e: Option<f64>,
    /// Doublers closer than this to p = 0 are dropped [default: 0.2]
    #[arg(long = "exclude-radius")]
    pub exclude_radius: Option<f64>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub walk: WalkOpts,
    /// Grid points per axis [default: 512 in 1-D, 64 in 3-D]
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid offset in 3-D [default: aligned]
    #[arg(long, value_enum)]
    pub offset: Option<OffsetArg>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub walk: WalkOpts,
    /// Sites per axis [default: 256 in 1-D, 8 in 3-D]
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of steps [default: 100]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Packet momentum p₀δx, 1-D only [default: 0.3]
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<f64>,
    /// Packet width in sites, 1-D only [default: 8]
    #[arg(long)]
    pub width: Option<f64>,
    /// Packet centre in sites [default: n/4 in 1-D, n/2 in 3-D]
    #[arg(long)]
    pub center: Option<f64>,
    /// Stepping method [default: position]
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Long-format density time series CSV.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Final-state amplitudes CSV.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct QcaFreeArgs {
    /// Family angle θ of the underlying 1-D walk [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Dimensionless mass term mc²δt [default: 0]
    #[arg(long = "mass-dt", allow_hyphen_values = true)]
    pub mass_dt: Option<f64>,
    /// Sites on the ring, 2..=8 [default: 4]
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of steps [default: 10]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Initially occupied modes `2·site + component`, comma separated [default: 0]
    #[arg(long)]
    pub occupied: Option<List<usize>>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct SchwingerArgs {
    /// Family angle θ of the underlying 1-D walk [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Dimensionless mass term mc²δt [default: 0]
    #[arg(long = "mass-dt", allow_hyphen_values = true)]
    pub mass_dt: Option<f64>,
    /// Sites on the open chain, 2..=5 [default: 4]
    #[arg(long)]
    pub n: Option<usize>,
    /// Link truncation L, 1..=2 [default: 1]
    #[arg(long)]
    pub truncation: Option<i32>,
    /// Electric coupling g²c²δt³/(2ε₀δx) [default: 0.1]
    #[arg(long = "coupling-dt", allow_hyphen_values = true)]
    pub coupling_dt: Option<f64>,
    /// Number of steps [default: 20]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Initially occupied modes; links follow from the Gauss law [default: the upper mode of site n/2]
    #[arg(long)]
    pub occupied: Option<List<usize>>,
    /// Action of V on the lowest link state [default: clipped]
    #[arg(long = "link-edge", value_enum)]
    pub link_edge: Option<EdgeArg>,
    /// Random gauge transformations tested [default: 20]
    #[arg(long = "alpha-draws")]
    pub alpha_draws: Option<usize>,
    /// Seed for the gauge angles [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest state space [default: 2097152]
    #[arg(long = "max-states")]
    pub max_states: Option<usize>,
    /// Largest dense block [default: 1024]
    #[arg(long = "max-block")]
    pub max_block: Option<usize>,
    #[command(flatten)]
    pub out: OutOpts,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    /// Matrix dimension: 2 or 4 [default: 2]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number of random pairs [default: 10000]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Random seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutOpts,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = Settings::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Dispersion(a) => commands::scan::dispersion(&settings, a),
        Command::Doublers(a) => commands::scan::doublers(&settings, a),
        Command::BoundCheck(a) => commands::scan::bound_check(&settings, a),
        Command::Evolve(a) => commands::evolve::evolve(&settings, a),
        Command::QcaFree(a) => commands::qca::qca_free(&settings, a),
        Command::QcaSchwinger(a) => commands::qca::qca_schwinger(&settings, a),
        Command::PhaseBoundTest(a) => commands::phase::phase_bound_test(&settings, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::Config(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

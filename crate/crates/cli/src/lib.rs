//! `skinwave` command line. [`run`] parses arguments, executes one
//! subcommand and returns the process exit status.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

pub use output::Manifest;

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "HAPTIC_CATALOG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "skinwave", version, about = "Skin vibration propagation from encapsulated haptic units")]
pub struct Cli {
    /// Upper bound on worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surface amplitude profile of a skin stack, optionally seen through a unit design.
    Simulate(SimulateArgs),
    /// Compare a two-layer design with a single-layer control.
    DesignEval(DesignEvalArgs),
    /// Material inequality report for a layer pair and control.
    Check(CheckArgs),
    /// Exhaustive design search over a catalog.
    Optimize(OptimizeArgs),
    /// Elastic modulus from stress-strain curves.
    FitModulus(FitModulusArgs),
    /// Vibrometer traces to a normalized amplitude profile.
    ProcessLdv(ProcessLdvArgs),
    /// Join a simulated and a measured profile into one table.
    Overlay(OverlayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Material catalog (TOML). Falls back to $HAPTIC_CATALOG, then the built-in silicones.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OuterMediumArg {
    Skin,
    Air,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Leave out the skin-to-Layer-1 coefficient.
    #[arg(long)]
    pub paper_faithful: bool,
    /// Medium the wave exits into after Layer 2.
    #[arg(long, value_enum, default_value_t = OuterMediumArg::Skin)]
    pub outer_medium: OuterMediumArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Embedded,
    Encapsulating,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    /// Design file (TOML); overrides the layer flags.
    #[arg(long)]
    pub design: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Encapsulating)]
    pub family: FamilyArg,
    #[arg(long)]
    pub layer1: Option<String>,
    #[arg(long)]
    pub layer2: Option<String>,
    #[arg(long, default_value_t = 1.25)]
    pub d1_mm: f64,
    #[arg(long, default_value_t = 1.25)]
    pub d2_mm: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Skin stack (TOML); default is the built-in forearm.
    #[arg(long)]
    pub stack: Option<PathBuf>,
    #[arg(long, default_value_t = 125.0)]
    pub frequency: f64,
    /// Normal pressure on the contact disk, Pa; positive pushes into the skin.
    #[arg(long, default_value_t = 1000.0)]
    pub pressure: f64,
    /// Radial traction at the disk rim, Pa.
    #[arg(long, default_value_t = 0.0)]
    pub tangential: f64,
    /// Contact disk radius, m.
    #[arg(long, default_value_t = skinwave_core::unit::MOTOR_RADIUS)]
    pub disk_radius: f64,
    /// First radius, m; defaults to the unit edge with --design, else 0.
    #[arg(long)]
    pub r_start: Option<f64>,
    /// Span of the profile beyond the first radius, m.
    #[arg(long, default_value_t = 0.01)]
    pub span: f64,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    /// Divide by the value at the first radius (always on with --design).
    #[arg(long)]
    pub normalize: bool,
    /// Unit design whose edge profile is wanted.
    #[arg(long)]
    pub design: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DesignEvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub design: DesignArgs,
    /// Control material; defaults to Layer 2's.
    #[arg(long)]
    pub control: Option<String>,
    #[arg(long)]
    pub stack: Option<PathBuf>,
    #[arg(long, default_value_t = 125.0)]
    pub frequency: f64,
    /// Evaluation radius, m; defaults to the unit edge.
    #[arg(long)]
    pub r_edge: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub layer1: String,
    #[arg(long)]
    pub layer2: String,
    #[arg(long)]
    pub control: String,
    #[arg(long, default_value_t = 1.25)]
    pub d1_mm: f64,
    #[arg(long, default_value_t = 1.25)]
    pub d2_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Layer2,
    Layer1,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub stack: Option<PathBuf>,
    #[arg(long, default_value_t = 125.0)]
    pub frequency: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FamilyArg::Encapsulating, FamilyArg::Embedded])]
    pub families: Vec<FamilyArg>,
    /// Equal layer thicknesses to try, mm; default 1.0, 1.25, 1.5.
    #[arg(long, value_delimiter = ',')]
    pub grid_mm: Vec<f64>,
    #[arg(long, default_value_t = 3.0)]
    pub max_total_mm: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Minimize)]
    pub direction: DirectionArg,
    /// Score the vertical (shear-path) ratio alone.
    #[arg(long)]
    pub uz_only: bool,
    #[arg(long, value_enum, default_value_t = PairingArg::Layer2)]
    pub pairing: PairingArg,
    /// Evaluation radius, m; the unit edge when smaller.
    #[arg(long, default_value_t = 0.0)]
    pub r_eval: f64,
    /// Refine the thicknesses of the best design within [min, max] mm per layer.
    #[arg(long, num_args = 2, value_names = ["MIN_MM", "MAX_MM"])]
    pub refine: Option<Vec<f64>>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitModulusArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `strain,stress_pa` CSV; repeatable.
    #[arg(long = "curve", required = true)]
    pub curves: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub strain_min: f64,
    #[arg(long, default_value_t = 0.3)]
    pub strain_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Edge,
    Motor,
}

#[derive(Debug, Clone, Args)]
pub struct ProcessLdvArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Trace CSV; repeatable.
    #[arg(long = "trace")]
    pub traces: Vec<PathBuf>,
    /// Directory whose `*.csv` files are all traces.
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"], default_values_t = [40.0, 200.0])]
    pub band: Vec<f64>,
    #[arg(long, default_value_t = 50.0)]
    pub comb: f64,
    #[arg(long)]
    pub no_comb: bool,
    #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"], default_values_t = [100.0, 150.0])]
    pub peak_band: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ReferenceArg::Edge)]
    pub reference: ReferenceArg,
    /// Motor amplitude, m, for `--reference motor`.
    #[arg(long)]
    pub motor_amp: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OverlayArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub simulated: PathBuf,
    #[arg(long)]
    pub measured: PathBuf,
    /// Radius of distance 0 in the simulated profile, m; read from the file when absent.
    #[arg(long)]
    pub edge: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

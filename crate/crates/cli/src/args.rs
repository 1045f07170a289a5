use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::numbers::parse_number;
use crate::presets::Preset;

#[derive(Debug, Parser)]
#[command(
    name = "anisotachy",
    version,
    about = "Two emitters in a waveguide with direction-dependent field velocity",
    after_help = "Angles accept multiples of pi such as `pi/2` or `-3pi/4`.\n\
                  Set ANISOTACHY_THREADS to limit the worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Atomic amplitudes, populations and decay rates over time.
    Decay(DecayArgs),
    /// Radiated intensity on a spacetime grid.
    Intensity(IntensityArgs),
    /// Steady-state emission statistics over the (theta, delta_phi) plane.
    Sweep(SweepArgs),
    /// Optimal state for directional emission at a given coupling.
    Optimize(OptimizeArgs),
    /// Fisher information with and without direction-resolved detection.
    Fisher(FisherArgs),
    /// List the built-in parameter presets.
    Presets,
}

/// Where the system comes from: a preset, a config file or inline flags.
#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// `key = value` file; see the README for the keys.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, value_parser = parse_number)]
    pub gamma: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub beta: Option<f64>,

    /// Resonance frequency in units of gamma (velocity-built systems).
    #[arg(long, value_parser = parse_number)]
    pub omega0: Option<f64>,
    /// Emitter separation.
    #[arg(long = "d", value_name = "D", value_parser = parse_number)]
    pub separation: Option<f64>,
    /// Field velocity outside the circulators.
    #[arg(long, value_parser = parse_number)]
    pub v: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub v_left: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub v_right: Option<f64>,

    /// Left delay in units of 1/gamma (phase-built systems).
    #[arg(long, value_parser = parse_number)]
    pub delay_left: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub delay_right: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub phase_left: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub phase_right: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedState {
    Symmetric,
    Antisymmetric,
    First,
    Second,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StateArgs {
    #[arg(long, value_enum, conflicts_with_all = ["theta", "phase_a1", "phase_a2"])]
    pub state: Option<NamedState>,
    /// Population angle: c1 = cos(theta) e^{i phase_a1}, c2 = sin(theta) e^{i phase_a2}.
    #[arg(long, value_parser = parse_number)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub phase_a1: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    pub phase_a2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Series,
    Dde,
    PoleSum,
    Nonretarded,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "series")]
    pub solver: SolverArg,
    /// Branch count for the pole sum.
    #[arg(long, default_value_t = anisotachy::dynamics::DEFAULT_BRANCHES)]
    pub poles: usize,
    /// Internal step of the delay integrator (default: shortest delay / 64).
    #[arg(long, value_parser = parse_number)]
    pub dde_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_parser = parse_number, default_value = "6")]
    pub t_max: f64,
    #[arg(long, value_parser = parse_number, default_value = "0.001")]
    pub dt: f64,
    /// CSV destination (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IntensityArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_parser = parse_number, default_value = "-3", allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, value_parser = parse_number, default_value = "3", allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 121)]
    pub nx: usize,
    #[arg(long, value_parser = parse_number, default_value = "0")]
    pub t_min: f64,
    #[arg(long, value_parser = parse_number, default_value = "6")]
    pub t_max: f64,
    #[arg(long, default_value_t = 121)]
    pub nt: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_number, default_value = "1")]
    pub beta: f64,
    #[arg(long, value_parser = parse_number, default_value = "pi/2", allow_hyphen_values = true)]
    pub phi: f64,
    /// Points along theta in [0, pi/2].
    #[arg(long, default_value_t = 401)]
    pub n_theta: usize,
    /// Points along delta_phi in [-pi, pi].
    #[arg(long, default_value_t = 401)]
    pub n_delta_phi: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = parse_number, default_value = "1")]
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParameterArg {
    Phi,
    DeltaPhi,
    PhiL,
    PhiR,
    PhiA1,
    PhiA2,
}

#[derive(Debug, Clone, Args)]
pub struct FisherArgs {
    #[arg(long, value_parser = parse_number, default_value = "pi/4", allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, value_parser = parse_number, default_value = "0", allow_hyphen_values = true)]
    pub delta_phi: f64,
    #[arg(long, value_parser = parse_number, default_value = "0.5")]
    pub beta: f64,
    #[arg(long, value_parser = parse_number, default_value = "pi/3", allow_hyphen_values = true)]
    pub phi: f64,
    /// Phase the information refers to; the scan shifts it by `varphi`.
    #[arg(long, value_enum, default_value = "phi")]
    pub param: ParameterArg,
    #[arg(long, value_parser = parse_number, default_value = "-pi", allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, value_parser = parse_number, default_value = "pi", allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 361)]
    pub n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

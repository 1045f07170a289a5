//! Validated run descriptions built from parsed arguments.

use std::fs;
use std::path::PathBuf;

use anisotachy::directionality::PhaseParameter;
use anisotachy::{InitialState, Solver, SystemConfig};

use crate::args::{
    Cli, Command, DecayArgs, FisherArgs, IntensityArgs, NamedState, OptimizeArgs, ParameterArg, SolverArg, SolverArgs,
    StateArgs, SweepArgs, SystemArgs,
};
use crate::config_file::ConfigFile;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySpec {
    pub config: SystemConfig,
    pub state: InitialState,
    pub solver: Solver,
    pub t_max: f64,
    pub dt: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensitySpec {
    pub config: SystemConfig,
    pub state: InitialState,
    pub solver: Solver,
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
    pub nx: usize,
    pub nt: usize,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub beta: f64,
    pub phi: f64,
    pub n_theta: usize,
    pub n_delta_phi: usize,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FisherSpec {
    pub theta: f64,
    pub delta_phi: f64,
    pub beta: f64,
    pub phi: f64,
    pub parameter: PhaseParameter,
    pub range: (f64, f64),
    pub n: usize,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunSpec {
    Decay(DecaySpec),
    Intensity(IntensitySpec),
    Sweep(SweepSpec),
    Optimize { beta: f64 },
    Fisher(FisherSpec),
    Presets,
}

impl RunSpec {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        Ok(match cli.command {
            Command::Decay(a) => RunSpec::Decay(decay(a)?),
            Command::Intensity(a) => RunSpec::Intensity(intensity(a)?),
            Command::Sweep(a) => RunSpec::Sweep(sweep(a)?),
            Command::Optimize(OptimizeArgs { beta }) => {
                if !(beta > 0.0 && beta <= 1.0) {
                    return Err(usage("--beta must lie in (0, 1]"));
                }
                RunSpec::Optimize { beta }
            }
            Command::Fisher(a) => RunSpec::Fisher(fisher(a)?),
            Command::Presets => RunSpec::Presets,
        })
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_beta(beta: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(usage(format!("--beta {beta} is outside [0, 1]")))
    }
}

fn decay(a: DecayArgs) -> Result<DecaySpec, CliError> {
    let (config, default_state) = resolve_system(&a.system)?;
    let state = resolve_state(&a.state, default_state)?;
    let solver = resolve_solver(&a.solver, &config)?;
    if a.t_max <= 0.0 {
        return Err(usage("--t-max must be positive"));
    }
    if !(a.dt > 0.0 && a.dt <= a.t_max) {
        return Err(usage("--dt must lie in (0, t-max]"));
    }
    Ok(DecaySpec {
        config,
        state,
        solver,
        t_max: a.t_max,
        dt: a.dt,
        output: a.output,
    })
}

fn intensity(a: IntensityArgs) -> Result<IntensitySpec, CliError> {
    let (config, default_state) = resolve_system(&a.system)?;
    let state = resolve_state(&a.state, default_state)?;
    let solver = resolve_solver(&a.solver, &config)?;
    if config.field_geometry().is_none() {
        return Err(usage("intensity needs nonzero delays"));
    }
    if a.nx < 2 || a.nt < 2 {
        return Err(usage("--nx and --nt must be at least 2"));
    }
    if a.x_max <= a.x_min {
        return Err(usage("--x-max must exceed --x-min"));
    }
    if !(a.t_min >= 0.0 && a.t_max > a.t_min) {
        return Err(usage("need 0 <= --t-min < --t-max"));
    }
    Ok(IntensitySpec {
        config,
        state,
        solver,
        x_range: (a.x_min, a.x_max),
        t_range: (a.t_min, a.t_max),
        nx: a.nx,
        nt: a.nt,
        output: a.output,
    })
}

fn sweep(a: SweepArgs) -> Result<SweepSpec, CliError> {
    check_beta(a.beta)?;
    if a.n_theta < 2 || a.n_delta_phi < 2 {
        return Err(usage("grid sizes must be at least 2"));
    }
    Ok(SweepSpec {
        beta: a.beta,
        phi: a.phi,
        n_theta: a.n_theta,
        n_delta_phi: a.n_delta_phi,
        output: a.output,
    })
}

fn fisher(a: FisherArgs) -> Result<FisherSpec, CliError> {
    check_beta(a.beta)?;
    if a.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    if a.to <= a.from {
        return Err(usage("--to must exceed --from"));
    }
    let parameter = match a.param {
        ParameterArg::Phi => PhaseParameter::Phi,
        ParameterArg::DeltaPhi => PhaseParameter::DeltaPhi,
        ParameterArg::PhiL => PhaseParameter::PhaseLeft,
        ParameterArg::PhiR => PhaseParameter::PhaseRight,
        ParameterArg::PhiA1 => PhaseParameter::PhaseA1,
        ParameterArg::PhiA2 => PhaseParameter::PhaseA2,
    };
    Ok(FisherSpec {
        theta: a.theta,
        delta_phi: a.delta_phi,
        beta: a.beta,
        phi: a.phi,
        parameter,
        range: (a.from, a.to),
        n: a.n,
        output: a.output,
    })
}

impl SystemArgs {
    fn inline_velocity(&self) -> bool {
        self.omega0.is_some()
            || self.separation.is_some()
            || self.v.is_some()
            || self.v_left.is_some()
            || self.v_right.is_some()
    }

    fn inline_phase(&self) -> bool {
        self.delay_left.is_some()
            || self.delay_right.is_some()
            || self.phase_left.is_some()
            || self.phase_right.is_some()
    }

    fn inline_any(&self) -> bool {
        self.gamma.is_some() || self.beta.is_some() || self.inline_velocity() || self.inline_phase()
    }
}

/// Values from either inline flags or a config file, looked up by key.
fn build_config(get: &dyn Fn(&str) -> Option<f64>, source: &str) -> Result<SystemConfig, CliError> {
    let velocity_keys = ["omega0", "d", "v", "v_L", "v_R"];
    let phase_keys = ["T_L", "T_R", "phi_L", "phi_R"];
    let has_velocity = velocity_keys.iter().any(|k| get(k).is_some());
    let has_phase = phase_keys.iter().any(|k| get(k).is_some());
    let gamma = get("gamma").unwrap_or(1.0);
    let beta = get("beta").unwrap_or(1.0);
    check_beta(beta)?;
    let config = match (has_velocity, has_phase) {
        (true, true) => {
            return Err(usage(format!(
                "{source}: give either velocities or delays and phases, not both"
            )))
        }
        (false, false) => {
            return Err(usage(format!(
                "{source}: no system given; use --preset, --config or inline parameters"
            )))
        }
        (true, false) => {
            let need = |k: &str| get(k).ok_or_else(|| usage(format!("{source}: missing `{k}`")));
            SystemConfig::from_velocities(
                gamma,
                beta,
                need("omega0")?,
                need("d")?,
                need("v")?,
                need("v_L")?,
                need("v_R")?,
            )?
        }
        (false, true) => {
            let need = |k: &str| get(k).ok_or_else(|| usage(format!("{source}: missing `{k}`")));
            SystemConfig::from_phases(
                gamma,
                beta,
                need("T_L")?,
                need("T_R")?,
                get("phi_L").unwrap_or(0.0),
                get("phi_R").unwrap_or(0.0),
            )?
        }
    };
    Ok(config)
}

/// Returns the configuration and, for presets and files, a default state.
pub fn resolve_system(args: &SystemArgs) -> Result<(SystemConfig, Option<InitialState>), CliError> {
    let sources = [args.preset.is_some(), args.config.is_some(), args.inline_any()];
    if sources.iter().filter(|&&s| s).count() > 1 {
        return Err(usage(
            "conflicting system sources: use exactly one of --preset, --config or inline parameters",
        ));
    }
    if let Some(preset) = args.preset {
        return Ok((preset.config(), Some(preset.state())));
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let file = ConfigFile::parse(&text)?;
        let config = build_config(&|k| file.get(k), &path.display().to_string())?;
        let state = if ["theta", "phi_A1", "phi_A2"].iter().any(|k| file.get(k).is_some()) {
            Some(InitialState::new(
                file.get("theta").unwrap_or(0.0),
                file.get("phi_A1").unwrap_or(0.0),
                file.get("phi_A2").unwrap_or(0.0),
            ))
        } else {
            None
        };
        return Ok((config, state));
    }
    let lookup = |k: &str| match k {
        "gamma" => args.gamma,
        "beta" => args.beta,
        "omega0" => args.omega0,
        "d" => args.separation,
        "v" => args.v,
        "v_L" => args.v_left,
        "v_R" => args.v_right,
        "T_L" => args.delay_left,
        "T_R" => args.delay_right,
        "phi_L" => args.phase_left,
        "phi_R" => args.phase_right,
        _ => None,
    };
    Ok((build_config(&lookup, "inline parameters")?, None))
}

/// Explicit flags win over a preset or file state; the fallback is symmetric.
pub fn resolve_state(args: &StateArgs, default: Option<InitialState>) -> Result<InitialState, CliError> {
    if let Some(named) = args.state {
        return Ok(match named {
            NamedState::Symmetric => InitialState::symmetric(),
            NamedState::Antisymmetric => InitialState::antisymmetric(),
            NamedState::First => InitialState::first_atom(),
            NamedState::Second => InitialState::second_atom(),
        });
    }
    if args.theta.is_some() || args.phase_a1.is_some() || args.phase_a2.is_some() {
        let base = default.unwrap_or_else(InitialState::symmetric);
        return Ok(InitialState::new(
            args.theta.unwrap_or(base.theta()),
            args.phase_a1.unwrap_or(base.phase_a1()),
            args.phase_a2.unwrap_or(base.phase_a2()),
        ));
    }
    Ok(default.unwrap_or_else(InitialState::symmetric))
}

pub fn resolve_solver(args: &SolverArgs, config: &SystemConfig) -> Result<Solver, CliError> {
    let solver = match args.solver {
        SolverArg::Series => Solver::Series,
        SolverArg::Dde => Solver::Dde { dt: args.dde_step },
        SolverArg::PoleSum => {
            if args.poles == 0 {
                return Err(usage("--poles must be at least 1"));
            }
            if config.beta() == 0.0 {
                return Err(usage("the pole sum needs beta > 0"));
            }
            Solver::PoleSum { branches: args.poles }
        }
        SolverArg::Nonretarded => Solver::NonRetarded,
    };
    if !matches!(solver, Solver::NonRetarded) && !config.is_retarded() {
        return Err(usage(format!(
            "solver `{}` needs nonzero delays; use --solver nonretarded",
            solver.method()
        )));
    }
    if matches!(solver, Solver::Dde { .. }) && (config.delay_left() == 0.0 || config.delay_right() == 0.0) {
        return Err(usage("the delay integrator needs both delays nonzero"));
    }
    if let Solver::Dde { dt: Some(h) } = solver {
        let limit = config.min_delay() / 8.0;
        if !(h > 0.0 && h <= limit) {
            return Err(usage(format!("--dde-step must lie in (0, {limit}]")));
        }
    }
    Ok(solver)
}

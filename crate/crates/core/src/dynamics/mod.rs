//! Amplitude solvers for the two-emitter delay equations
//!
//! ```text
//! c1'(t) = -gamma/2 [c1(t) + beta e^{i phi_L} c2(t - T_L) Θ(t - T_L)]
//! c2'(t) = -gamma/2 [c2(t) + beta e^{i phi_R} c1(t - T_R) Θ(t - T_R)]
//! ```
//!
//! Four interchangeable backends implement [`AmplitudeSource`]:
//! the exact finite series ([`series`]), method-of-steps RK4 ([`dde`]), the
//! Lambert-W pole expansion ([`poles`]) and the zero-delay closed form
//! ([`nonretarded`]). [`rates`] and [`classify`] turn amplitudes into
//! instantaneous decay rates and super/subradiance labels.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::config::{InitialState, SystemConfig};
use crate::error::{Error, Result};

pub mod classify;
pub mod dde;
pub mod nonretarded;
pub mod poles;
pub mod rates;
pub mod series;

pub use classify::{classify_collective, AtomLabel, DecayClassification};
pub use dde::{dde_integrate, DdeSolution};
pub use nonretarded::{nonretarded_amplitudes, NonRetarded};
pub use poles::{
    characteristic_residual, compute_poles, pole_sum_amplitudes, Pole, PoleSet, PoleSum, POLE_RESIDUAL_TOL,
};
pub use rates::{decay_rate_trace, instantaneous_rates, RateTrace};
pub use series::{series_amplitudes, SeriesSolution};

/// Anything that can evaluate `(c1(t), c2(t))` for `t >= 0`.
pub trait AmplitudeSource {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)>;
}

impl<S: AmplitudeSource + ?Sized> AmplitudeSource for &S {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        (**self).amplitudes(t)
    }
}

impl<S: AmplitudeSource + ?Sized> AmplitudeSource for Box<S> {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        (**self).amplitudes(t)
    }
}

/// Tag recorded on every trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverMethod {
    Series,
    Dde,
    PoleSum,
    NonRetarded,
}

impl SolverMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolverMethod::Series => "series",
            SolverMethod::Dde => "dde",
            SolverMethod::PoleSum => "pole_sum",
            SolverMethod::NonRetarded => "nonretarded",
        }
    }
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(SolverMethod::Series),
            "dde" => Ok(SolverMethod::Dde),
            "pole_sum" | "poles" => Ok(SolverMethod::PoleSum),
            "nonretarded" => Ok(SolverMethod::NonRetarded),
            _ => Err(Error::InvalidParameter {
                field: "solver",
                reason: "expected series, dde, pole_sum or nonretarded",
            }),
        }
    }
}

/// A solver choice together with its numerical options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    Series,
    /// Integration step; `None` uses `min(T_L, T_R) / 64`.
    Dde {
        dt: Option<f64>,
    },
    PoleSum {
        branches: usize,
    },
    NonRetarded,
}

/// Default pole truncation `|n| <= 50`.
pub const DEFAULT_BRANCHES: usize = 50;

impl Solver {
    pub fn from_method(method: SolverMethod) -> Self {
        match method {
            SolverMethod::Series => Solver::Series,
            SolverMethod::Dde => Solver::Dde { dt: None },
            SolverMethod::PoleSum => Solver::PoleSum {
                branches: DEFAULT_BRANCHES,
            },
            SolverMethod::NonRetarded => Solver::NonRetarded,
        }
    }

    pub fn method(&self) -> SolverMethod {
        match self {
            Solver::Series => SolverMethod::Series,
            Solver::Dde { .. } => SolverMethod::Dde,
            Solver::PoleSum { .. } => SolverMethod::PoleSum,
            Solver::NonRetarded => SolverMethod::NonRetarded,
        }
    }

    /// Prepares an evaluator valid on `[0, t_max]`.
    pub fn source(
        &self,
        config: &SystemConfig,
        state: &InitialState,
        t_max: f64,
    ) -> Result<Box<dyn AmplitudeSource + Send + Sync>> {
        Ok(match *self {
            Solver::Series => Box::new(SeriesSolution::new(config, state)?),
            Solver::Dde { dt } => {
                let dt = dt.unwrap_or(config.min_delay() / 64.0);
                Box::new(DdeSolution::integrate(config, state, t_max, dt)?)
            }
            Solver::PoleSum { branches } => Box::new(compute_poles(config, branches)?.with_state(state)),
            Solver::NonRetarded => Box::new(NonRetarded::new(config, state)),
        })
    }

    /// Samples the amplitudes at `k * dt` for `k * dt <= t_max`.
    pub fn trace(&self, config: &SystemConfig, state: &InitialState, t_max: f64, dt: f64) -> Result<AmplitudeTrace> {
        check_grid(t_max, dt)?;
        let source = self.source(config, state, t_max)?;
        AmplitudeTrace::sample(&source, config, state, self.method(), t_max, dt)
    }
}

fn check_grid(t_max: f64, dt: f64) -> Result<()> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Domain("t_max must be positive"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            field: "dt",
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Uniformly sampled amplitudes with the inputs that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    dt: f64,
    times: Vec<f64>,
    c1: Vec<Complex64>,
    c2: Vec<Complex64>,
    config: SystemConfig,
    state: InitialState,
    method: SolverMethod,
}

impl AmplitudeTrace {
    /// Evaluates `source` at `k * dt`; the first sample is the initial state
    /// verbatim.
    pub fn sample<S: AmplitudeSource + ?Sized>(
        source: &S,
        config: &SystemConfig,
        state: &InitialState,
        method: SolverMethod,
        t_max: f64,
        dt: f64,
    ) -> Result<Self> {
        check_grid(t_max, dt)?;
        let steps = (t_max / dt * (1.0 + 1e-12)).floor() as usize;
        let mut times = Vec::with_capacity(steps + 1);
        let mut c1 = Vec::with_capacity(steps + 1);
        let mut c2 = Vec::with_capacity(steps + 1);
        times.push(0.0);
        c1.push(state.c1());
        c2.push(state.c2());
        for k in 1..=steps {
            let t = k as f64 * dt;
            let (a, b) = source.amplitudes(t)?;
            times.push(t);
            c1.push(a);
            c2.push(b);
        }
        Ok(Self {
            dt,
            times,
            c1,
            c2,
            config: *config,
            state: *state,
            method,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn c1(&self) -> &[Complex64] {
        &self.c1
    }

    pub fn c2(&self) -> &[Complex64] {
        &self.c2
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn state(&self) -> &InitialState {
        &self.state
    }

    pub fn method(&self) -> SolverMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `|c1|^2` and `|c2|^2` per sample.
    pub fn populations(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.c1.iter().zip(&self.c2).map(|(a, b)| (a.norm_sqr(), b.norm_sqr()))
    }

    /// Largest `|c_i - other c_i|` over both atoms and all shared samples.
    pub fn max_abs_difference(&self, other: &AmplitudeTrace) -> f64 {
        let a = self.c1.iter().zip(&other.c1).map(|(x, y)| (x - y).norm());
        let b = self.c2.iter().zip(&other.c2).map(|(x, y)| (x - y).norm());
        a.chain(b).fold(0.0, f64::max)
    }
}

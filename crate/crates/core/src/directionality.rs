//! Steady-state emission statistics in the zero-delay limit.
//!
//! After the atoms have fully decayed, a fraction `P_R` of the excitation
//! has left to the right in the guide, `P_L` to the left and
//! `P_out = 1 - P_R - P_L` into unguided modes. All quantities depend on the
//! coupling `beta`, the mean propagation phase `phi`, the population angle
//! `theta` and the phase offset `Δφ` (see [`InitialState::delta_phi`]).
//!
//! The closed forms neglect retardation and are accurate only for
//! `gamma T << 1`. They are singular at `beta = 1, cos phi = ±1`, where a dark
//! state never decays; that point is reported as [`Error::DarkState`].

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{cis, InitialState, SystemConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_real_line, Tolerance};

/// Note attached to every report.
pub const VALIDITY_NOTE: &str = "closed forms neglect retardation; valid for gamma*T << 1";

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "beta",
            reason: "must lie in [0, 1]",
        })
    }
}

/// `(1 - (beta cos phi)^2)` and `(1 + (beta sin phi)^2)`.
fn denominators(beta: f64, phi: f64) -> Result<(f64, f64)> {
    let (s, c) = phi.sin_cos();
    let dark = 1.0 - (beta * c) * (beta * c);
    if dark <= 1e-14 {
        return Err(Error::DarkState { beta, phi });
    }
    Ok((dark, 1.0 + (beta * s) * (beta * s)))
}

/// Detuning integrals of `{1, Δ, Δ²} / |(gamma/2 - iΔ)² - (beta gamma/2 e^{i phi})²|²`
/// over the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIntegrals {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

pub fn spectral_integrals(beta: f64, phi: f64, gamma: f64) -> Result<SpectralIntegrals> {
    check_beta(beta)?;
    let (dark, bright) = denominators(beta, phi)?;
    let den = dark * bright;
    let h = 0.5 * gamma;
    Ok(SpectralIntegrals {
        i1: 0.5 * PI / (h * h * h) / den,
        i2: -0.25 * PI / (h * h) * beta * beta * (2.0 * phi).sin() / den,
        i3: 0.5 * PI / h * (1.0 - beta * beta * (2.0 * phi).cos()) / den,
    })
}

/// Spectral peak positions and half-widths, used as quadrature breakpoints.
fn peak_breakpoints(beta: f64, phi: f64, gamma: f64) -> [f64; 6] {
    let h = 0.5 * gamma;
    let (s, c) = phi.sin_cos();
    let centre = h * beta * s;
    let w_plus = h * (1.0 - beta * c).max(1e-6);
    let w_minus = h * (1.0 + beta * c).max(1e-6);
    [
        centre,
        centre - w_plus,
        centre + w_plus,
        -centre,
        -centre - w_minus,
        -centre + w_minus,
    ]
}

fn spectral_denominator(beta: f64, phi: f64, gamma: f64) -> impl Fn(f64) -> Complex64 {
    let h = 0.5 * gamma;
    let coupling = cis(phi) * (beta * h);
    let c2 = coupling * coupling;
    move |delta: f64| {
        let u = Complex64::new(h, -delta);
        u * u - c2
    }
}

/// The same three integrals by adaptive quadrature.
pub fn spectral_integrals_by_quadrature(beta: f64, phi: f64, gamma: f64) -> Result<SpectralIntegrals> {
    check_beta(beta)?;
    denominators(beta, phi)?;
    let q = spectral_denominator(beta, phi, gamma);
    let cuts = peak_breakpoints(beta, phi, gamma);
    let tol = Tolerance {
        abs: 1e-12,
        rel: 1e-12,
        ..Tolerance::default()
    };
    let scale = 0.5 * gamma;
    let integral =
        |power: i32| integrate_real_line(|d| d.powi(power) / q(d).norm_sqr(), &cuts, scale, tol).map(|e| e.value);
    Ok(SpectralIntegrals {
        i1: integral(0)?,
        i2: integral(1)?,
        i3: integral(2)?,
    })
}

/// Steady-state emission record for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalityReport {
    pub theta: f64,
    pub delta_phi: f64,
    pub beta: f64,
    pub phi: f64,
    pub p_right: f64,
    pub p_left: f64,
    pub p_tot: f64,
    pub p_out: f64,
    /// `(P_R - P_L) / P_tot`; `None` when nothing enters the guide.
    pub chi: Option<f64>,
    pub note: &'static str,
}

/// Closed-form `P_R`, `P_L` and derived quantities.
pub fn emission_probabilities(theta: f64, delta_phi: f64, beta: f64, phi: f64) -> Result<DirectionalityReport> {
    check_beta(beta)?;
    let (dark, bright) = denominators(beta, phi)?;
    let (s, _) = phi.sin_cos();
    let s2t = (2.0 * theta).sin();
    let common = (1.0 - beta + (beta * s) * (beta * s)) * (1.0 - beta * delta_phi.cos() * phi.cos() * s2t) / dark;
    let pre = 0.5 * beta / bright;
    let (st, ct) = theta.sin_cos();
    let p_right = pre * (common + (delta_phi + phi).cos() * s2t + 2.0 * beta * st * st * s * s);
    let p_left = pre * (common + (delta_phi - phi).cos() * s2t + 2.0 * beta * ct * ct * s * s);
    let p_tot = p_right + p_left;
    Ok(DirectionalityReport {
        theta,
        delta_phi,
        beta,
        phi,
        p_right,
        p_left,
        p_tot,
        p_out: 1.0 - p_tot,
        chi: (p_tot > 0.0).then(|| (p_right - p_left) / p_tot),
        note: VALIDITY_NOTE,
    })
}

/// Report for a configuration and initial state.
pub fn report_for(config: &SystemConfig, state: &InitialState) -> Result<DirectionalityReport> {
    emission_probabilities(
        state.theta(),
        state.delta_phi(config),
        config.beta(),
        config.mean_phase(),
    )
}

/// Total guided probability in its compact form.
pub fn total_probability(theta: f64, delta_phi: f64, beta: f64, phi: f64) -> Result<f64> {
    check_beta(beta)?;
    let (dark, _) = denominators(beta, phi)?;
    let c = phi.cos();
    Ok(beta * (1.0 - beta * c * c - (beta - 1.0) * delta_phi.cos() * c * (2.0 * theta).sin()) / dark)
}

/// Directionality in its compact form; `None` when `P_tot = 0`.
pub fn chi_formula(theta: f64, delta_phi: f64, beta: f64, phi: f64) -> Result<Option<f64>> {
    let p_tot = total_probability(theta, delta_phi, beta, phi)?;
    if p_tot <= 0.0 {
        return Ok(None);
    }
    let s = phi.sin();
    let num = delta_phi.sin() * (2.0 * theta).sin() + beta * (2.0 * theta).cos() * s;
    Ok(Some(-(beta * s / p_tot) * num / (1.0 + (beta * s) * (beta * s))))
}

/// `P_R` and `P_L` by quadrature of the steady-state spectral densities.
pub fn probabilities_by_quadrature(theta: f64, delta_phi: f64, beta: f64, phi: f64) -> Result<(f64, f64)> {
    check_beta(beta)?;
    denominators(beta, phi)?;
    if beta == 0.0 {
        return Ok((0.0, 0.0));
    }
    let gamma = 1.0;
    let h = 0.5 * gamma;
    let a = beta * h;
    let q = spectral_denominator(beta, phi, gamma);
    let (st, ct) = theta.sin_cos();
    let rel = cis(delta_phi) * ct;
    let (ep, em) = (cis(phi), cis(-phi));
    let e2 = cis(2.0 * phi);

    // Numerators of the right- and left-going spectral amplitudes.
    let right_direct = rel * ep + st;
    let right_cross = (rel * em + st) * e2 * a;
    let left_direct = rel * em + st;
    let left_cross = (rel * ep + st) * a;

    let cuts = peak_breakpoints(beta, phi, gamma);
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        ..Tolerance::default()
    };
    let prefactor = beta * gamma / (4.0 * PI);
    let q = &q;
    let density = |direct: Complex64, cross: Complex64| {
        move |d: f64| {
            let u = Complex64::new(h, -d);
            ((direct * u - cross) / q(d)).norm_sqr()
        }
    };
    let right = integrate_real_line(density(right_direct, right_cross), &cuts, h, tol)?;
    let left = integrate_real_line(density(left_direct, left_cross), &cuts, h, tol)?;
    Ok((prefactor * right.value, prefactor * left.value))
}

/// Small-`beta` limit `-C sin(phi) sin(Δφ)` with concurrence `C = sin 2θ`.
pub fn chi_weak_coupling(theta: f64, delta_phi: f64, phi: f64) -> f64 {
    -(2.0 * theta).sin() * phi.sin() * delta_phi.sin()
}

/// Directionality of `(|eg> + e^{i varphi}|ge>)/√2` at `phi = (n + 1/2) pi`,
/// in the form `sin(phi_R - phi_L - varphi) / (1 + beta²)`.
pub fn bell_state_chi(varphi: f64, beta: f64, phi_right: f64, phi_left: f64) -> f64 {
    (phi_right - phi_left - varphi).sin() / (1.0 + beta * beta)
}

/// Grid used to confirm the optimum.
pub const OPTIMUM_GRID: usize = 401;

/// Location of the largest `|chi|` on a uniform `(theta, Δφ)` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMaximum {
    pub theta: f64,
    pub delta_phi: f64,
    pub abs_chi: f64,
    pub theta_step: f64,
    pub delta_phi_step: f64,
}

/// Scans `theta ∈ [0, π/2]`, `Δφ ∈ [-π, π]` with `n` points per axis.
pub fn grid_argmax_abs_chi(beta: f64, phi: f64, n: usize) -> Result<GridMaximum> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            field: "grid size",
            reason: "needs at least two points",
        });
    }
    let dt = FRAC_PI_2 / (n - 1) as f64;
    let dp = 2.0 * PI / (n - 1) as f64;
    let mut best = GridMaximum {
        theta: 0.0,
        delta_phi: -PI,
        abs_chi: f64::NEG_INFINITY,
        theta_step: dt,
        delta_phi_step: dp,
    };
    for i in 0..n {
        let theta = i as f64 * dt;
        for j in 0..n {
            let delta_phi = -PI + j as f64 * dp;
            let r = emission_probabilities(theta, delta_phi, beta, phi)?;
            if let Some(chi) = r.chi {
                if chi.abs() > best.abs_chi {
                    best.abs_chi = chi.abs();
                    best.theta = theta;
                    best.delta_phi = delta_phi;
                }
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub theta: f64,
    pub delta_phi: f64,
    pub phi: f64,
    /// Directionality at the optimum (the negative extreme).
    pub chi: f64,
    pub grid: GridMaximum,
    /// Whether the grid argmax lies within one cell of the optimum or of its
    /// mirror `(π/2 - θ*, -Δφ*)`, which attains `+|chi*|`.
    pub confirmed: bool,
}

/// Analytic optimum at `phi = π/2`: `theta = ½ arctan(1/beta)`,
/// `Δφ = π/2`, `chi = -1/√(1 + beta²)`, confirmed on a 401 x 401 grid.
pub fn optimal_parameters(beta: f64) -> Result<Optimum> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter {
            field: "beta",
            reason: "must lie in (0, 1]",
        });
    }
    let theta = 0.5 * (1.0 / beta).atan();
    let delta_phi = FRAC_PI_2;
    let phi = FRAC_PI_2;
    let chi = emission_probabilities(theta, delta_phi, beta, phi)?
        .chi
        .ok_or(Error::Domain("no guided emission at the optimum"))?;
    let grid = grid_argmax_abs_chi(beta, phi, OPTIMUM_GRID)?;
    let near = |t: f64, d: f64| {
        (grid.theta - t).abs() <= grid.theta_step * (1.0 + 1e-9)
            && (grid.delta_phi - d).abs() <= grid.delta_phi_step * (1.0 + 1e-9)
    };
    let confirmed =
        (near(theta, delta_phi) || near(FRAC_PI_2 - theta, -delta_phi)) && grid.abs_chi <= chi.abs() + 1e-12;
    Ok(Optimum {
        theta,
        delta_phi,
        phi,
        chi,
        grid,
        confirmed,
    })
}

/// Phase-like parameter a Fisher information is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseParameter {
    Phi,
    DeltaPhi,
    PhaseLeft,
    PhaseRight,
    PhaseA1,
    PhaseA2,
}

impl PhaseParameter {
    pub const ALL: [PhaseParameter; 6] = [
        PhaseParameter::Phi,
        PhaseParameter::DeltaPhi,
        PhaseParameter::PhaseLeft,
        PhaseParameter::PhaseRight,
        PhaseParameter::PhaseA1,
        PhaseParameter::PhaseA2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PhaseParameter::Phi => "phi",
            PhaseParameter::DeltaPhi => "delta_phi",
            PhaseParameter::PhaseLeft => "phi_L",
            PhaseParameter::PhaseRight => "phi_R",
            PhaseParameter::PhaseA1 => "phi_A1",
            PhaseParameter::PhaseA2 => "phi_A2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s))
    }

    /// Rate of change of `(Δφ, phi)` per unit change of the parameter.
    pub fn direction(self) -> (f64, f64) {
        match self {
            PhaseParameter::Phi => (0.0, 1.0),
            PhaseParameter::DeltaPhi => (1.0, 0.0),
            PhaseParameter::PhaseLeft => (-0.5, 0.5),
            PhaseParameter::PhaseRight => (0.5, 0.5),
            PhaseParameter::PhaseA1 => (1.0, 0.0),
            PhaseParameter::PhaseA2 => (-1.0, 0.0),
        }
    }
}

/// Finite-difference step for Fisher derivatives, in radians.
pub const FISHER_STEP: f64 = 1e-6;
/// Smallest channel probability with a defined log-derivative.
pub const CHANNEL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    pub parameter: PhaseParameter,
    /// Over the channels left, right and out of the guide.
    pub directional: f64,
    /// Over the channels into and out of the guide.
    pub non_directional: f64,
    pub difference: f64,
    /// `(∂P_R, ∂P_L)` used for both.
    pub d_right: f64,
    pub d_left: f64,
    pub report: DirectionalityReport,
}

pub fn fisher_information(
    theta: f64,
    delta_phi: f64,
    beta: f64,
    phi: f64,
    parameter: PhaseParameter,
) -> Result<FisherReport> {
    let report = emission_probabilities(theta, delta_phi, beta, phi)?;
    for (channel, value) in [
        ("right", report.p_right),
        ("left", report.p_left),
        ("out", report.p_out),
    ] {
        if value < CHANNEL_FLOOR {
            return Err(Error::EvaluationPoint { channel, value });
        }
    }
    let (ddp, dphi) = parameter.direction();
    let h = FISHER_STEP;
    let plus = emission_probabilities(theta, delta_phi + h * ddp, beta, phi + h * dphi)?;
    let minus = emission_probabilities(theta, delta_phi - h * ddp, beta, phi - h * dphi)?;
    let d_right = (plus.p_right - minus.p_right) / (2.0 * h);
    let d_left = (plus.p_left - minus.p_left) / (2.0 * h);
    let d_tot = d_right + d_left;
    let d_out = -d_tot;

    let directional =
        d_right * d_right / report.p_right + d_left * d_left / report.p_left + d_out * d_out / report.p_out;
    let non_directional = d_tot * d_tot / report.p_tot + d_out * d_out / report.p_out;
    Ok(FisherReport {
        parameter,
        directional,
        non_directional,
        difference: directional - non_directional,
        d_right,
        d_left,
        report,
    })
}

impl FisherReport {
    /// The gap written as a single square,
    /// `[√(P_R/P_L) ∂P_L - √(P_L/P_R) ∂P_R]² / P_tot`.
    pub fn difference_as_square(&self) -> f64 {
        let r = &self.report;
        let term = (r.p_right / r.p_left).sqrt() * self.d_left - (r.p_left / r.p_right).sqrt() * self.d_right;
        term * term / r.p_tot
    }
}

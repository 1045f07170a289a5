//! Laplace-plane pole expansion.
//!
//! The transformed amplitudes share the denominator
//! `D(s) = (s + gamma/2)^2 - (beta gamma/2)^2 e^{2 i phi} e^{-2 s T}`, whose
//! zeros are `s = -gamma/2 + W_n(∓ (beta gamma T/2) e^{gamma T/2} e^{i phi}) / T`.
//! Summing the residues over branches `|n| <= N` gives
//! `c_m(t) = Σ α_{n,m} e^{s_n t}`, which converges slowly near the onset
//! times (each onset is a jump in a derivative) and to `c_m(0)/2` at `t = 0`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::AmplitudeSource;
use crate::config::{cis, InitialState, SystemConfig};
use crate::error::{Error, Result};
use crate::lambert::lambert_w;

/// One zero of `D(s)` with the data needed for its residues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub branch: i32,
    /// `'+'` for `W(-...)`, `'-'` for `W(+...)`.
    pub sign: char,
    pub s: Complex64,
    /// `1 + W_n`, the residue denominator.
    pub one_plus_w: Complex64,
}

impl Pole {
    /// Decay exponent `gamma_n = -s_n`.
    pub fn decay_exponent(&self) -> Complex64 {
        -self.s
    }
}

/// Poles of one configuration; independent of the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    config: SystemConfig,
    branches: usize,
    poles: Vec<Pole>,
}

/// Relative residual of the characteristic equation accepted for a pole.
pub const POLE_RESIDUAL_TOL: f64 = 1e-9;

/// Locates the `2 (2N + 1)` poles with `|n| <= N`.
pub fn compute_poles(config: &SystemConfig, branches: usize) -> Result<PoleSet> {
    if !config.is_retarded() {
        return Err(Error::Domain("pole expansion needs a positive mean delay"));
    }
    if config.beta() <= 0.0 {
        return Err(Error::Domain("pole expansion needs beta > 0"));
    }
    if branches == 0 {
        return Err(Error::InvalidParameter {
            field: "branches",
            reason: "must be at least 1",
        });
    }
    let gamma = config.gamma();
    let t = config.mean_delay();
    let phi = config.mean_phase();
    let base = cis(phi) * (0.5 * config.beta() * gamma * t * (0.5 * gamma * t).exp());

    let n = branches as i32;
    let mut poles = Vec::with_capacity(2 * (2 * branches + 1));
    for branch in -n..=n {
        for (sign, arg) in [('+', -base), ('-', base)] {
            let w = lambert_w(branch, arg)?;
            let one_plus_w = w + 1.0;
            if one_plus_w.norm() < 1e-12 {
                return Err(Error::DegenerateResidue { branch, sign });
            }
            let s = w / t - 0.5 * gamma;
            let residual = characteristic_residual(config, s);
            if residual.is_nan() || residual > POLE_RESIDUAL_TOL {
                return Err(Error::NonConvergence {
                    what: "pole condition",
                    achieved: residual,
                });
            }
            poles.push(Pole {
                branch,
                sign,
                s,
                one_plus_w,
            });
        }
    }
    Ok(PoleSet {
        config: *config,
        branches,
        poles,
    })
}

/// `|D(s)|` scaled by the size of its two terms.
pub fn characteristic_residual(config: &SystemConfig, s: Complex64) -> f64 {
    let gamma = config.gamma();
    let u = s + 0.5 * gamma;
    let a = 0.5 * config.beta() * gamma;
    let second = cis(2.0 * config.mean_phase()) * (-s * (2.0 * config.mean_delay())).exp() * (a * a);
    let d = u * u - second;
    d.norm() / (u.norm_sqr().max(second.norm()).max(1.0))
}

impl PoleSet {
    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    /// Binds residues for a given initial state.
    pub fn with_state(&self, state: &InitialState) -> PoleSum {
        let cfg = &self.config;
        let skew = cis(0.5 * (cfg.phase_left() - cfg.phase_right()));
        let delay_gap = 0.5 * (cfg.delay_left() - cfg.delay_right());
        let (c1, c2) = (state.c1(), state.c2());
        let terms = self
            .poles
            .iter()
            .map(|p| {
                let sigma = if p.sign == '+' { 1.0 } else { -1.0 };
                let shift = (p.decay_exponent() * delay_gap).exp();
                let half = p.one_plus_w * 2.0;
                let a1 = (c1 + c2 * skew * shift * sigma) / half;
                let a2 = (c2 + c1 * skew.conj() / shift * sigma) / half;
                (p.s, a1, a2)
            })
            .collect();
        PoleSum { terms }
    }
}

/// Pole expansion bound to an initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSum {
    /// `(s_n, α_{n,1}, α_{n,2})`.
    terms: Vec<(Complex64, Complex64, Complex64)>,
}

impl PoleSum {
    pub fn residues(&self) -> &[(Complex64, Complex64, Complex64)] {
        &self.terms
    }

    /// Largest single contribution from the outermost branches at time `t`,
    /// a rough bound on the truncation error.
    pub fn tail_estimate(&self, t: f64) -> f64 {
        let k = self.terms.len();
        self.terms[k.saturating_sub(4)..]
            .iter()
            .chain(&self.terms[..4.min(k)])
            .map(|(s, a1, a2)| {
                let e = (s * t).exp().norm();
                a1.norm().max(a2.norm()) * e
            })
            .fold(0.0, f64::max)
    }
}

impl AmplitudeSource for PoleSum {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain("time must be finite and non-negative"));
        }
        let mut c1 = Complex64::new(0.0, 0.0);
        let mut c2 = Complex64::new(0.0, 0.0);
        for (s, a1, a2) in &self.terms {
            let e = (s * t).exp();
            c1 += a1 * e;
            c2 += a2 * e;
        }
        Ok((c1, c2))
    }
}

/// `(c1(t), c2(t))` from a pole set.
pub fn pole_sum_amplitudes(poles: &PoleSet, state: &InitialState, t: f64) -> Result<(Complex64, Complex64)> {
    poles.with_state(state).amplitudes(t)
}

//! Exact finite-sum solution.
//!
//! Each round trip between the atoms contributes a term
//! `(beta gamma/2)^k tau^k / k! e^{-gamma tau/2}` with `tau` the time since
//! the term switched on. Causality truncates the sum at `n <= t/(2T)`, so the
//! result is exact. Terms are built in log-magnitude form because the
//! powers and factorials overflow individually for `gamma t` of a few hundred.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::AmplitudeSource;
use crate::config::{cis, InitialState, SystemConfig};
use crate::error::{Error, Result};

/// Terms below `max_term * e^{-46}` (about 1e-20) are dropped once the
/// sequence is past its peak.
const LOG_CUTOFF: f64 = 46.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSolution {
    config: SystemConfig,
    c1: Complex64,
    c2: Complex64,
}

impl SeriesSolution {
    pub fn new(config: &SystemConfig, state: &InitialState) -> Result<Self> {
        if !config.is_retarded() {
            return Err(Error::Domain("mean delay is zero; use the non-retarded closed form"));
        }
        Ok(Self {
            config: *config,
            c1: state.c1(),
            c2: state.c2(),
        })
    }

    fn evaluate(&self, t: f64) -> (Complex64, Complex64) {
        let cfg = &self.config;
        let gamma = cfg.gamma();
        let log_coupling = (0.5 * cfg.beta() * gamma).ln();
        let two_t = 2.0 * cfg.mean_delay();
        let round_trip_phase = cfg.phase_left() + cfg.phase_right();

        // Even (same atom) and odd (other atom) contributions.
        let mut even = Complex64::new(0.0, 0.0);
        let mut odd1 = Complex64::new(0.0, 0.0);
        let mut odd2 = Complex64::new(0.0, 0.0);

        // ln((2n)!) and ln((2n+1)!) accumulated as n grows.
        let mut ln_fact_even = 0.0;
        let mut ln_fact_odd = 0.0;
        let mut peak = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);

        let mut n = 0usize;
        loop {
            let start = n as f64 * two_t;
            if t < start {
                break;
            }
            let k_even = 2 * n;
            if n > 0 {
                ln_fact_even = ln_fact_odd + (k_even as f64).ln();
            }
            let k_odd = k_even + 1;
            ln_fact_odd = ln_fact_even + (k_odd as f64).ln();
            let phase = cis(n as f64 * round_trip_phase);

            let tau = t - start;
            let log_e = log_term(k_even, tau, log_coupling, ln_fact_even, gamma);
            even += phase * log_e.exp();
            peak.0 = peak.0.max(log_e);

            let mut done = past_peak(k_even, tau, cfg.beta(), gamma) && log_e < peak.0 - LOG_CUTOFF;

            for (delay, extra_phase, acc, pk) in [
                (cfg.delay_left(), cfg.phase_left(), &mut odd1, &mut peak.1),
                (cfg.delay_right(), cfg.phase_right(), &mut odd2, &mut peak.2),
            ] {
                let tau = t - start - delay;
                if tau >= 0.0 {
                    let log_o = log_term(k_odd, tau, log_coupling, ln_fact_odd, gamma);
                    *acc += phase * cis(extra_phase) * log_o.exp();
                    *pk = pk.max(log_o);
                    done &= past_peak(k_odd, tau, cfg.beta(), gamma) && log_o < *pk - LOG_CUTOFF;
                }
            }
            if done {
                break;
            }
            n += 1;
        }

        (self.c1 * even - self.c2 * odd1, self.c2 * even - self.c1 * odd2)
    }
}

#[inline]
fn log_term(k: usize, tau: f64, log_coupling: f64, ln_fact: f64, gamma: f64) -> f64 {
    if k == 0 {
        -0.5 * gamma * tau
    } else {
        k as f64 * (log_coupling + tau.ln()) - ln_fact - 0.5 * gamma * tau
    }
}

#[inline]
fn past_peak(k: usize, tau: f64, beta: f64, gamma: f64) -> bool {
    k as f64 > 0.5 * beta * gamma * tau
}

impl AmplitudeSource for SeriesSolution {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain("time must be finite and non-negative"));
        }
        Ok(self.evaluate(t))
    }
}

/// `(c1(t), c2(t))` from the exact series.
pub fn series_amplitudes(config: &SystemConfig, state: &InitialState, t: f64) -> Result<(Complex64, Complex64)> {
    SeriesSolution::new(config, state)?.amplitudes(t)
}

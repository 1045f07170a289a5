//! Instantaneous decay rates `Γ_i(t) = -d ln|c_i(t)|^2 / dt`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{AmplitudeSource, AmplitudeTrace};
use crate::error::{Error, Result};

/// Populations below this are too small for a meaningful logarithm.
pub const POPULATION_FLOOR: f64 = 1e-12;

/// Maximum `gamma * dt` accepted for finite-difference rates.
pub const MAX_RESOLUTION: f64 = 0.01;

/// Per-sample rates aligned with a trace; `None` where undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTrace {
    pub rate1: Vec<Option<f64>>,
    pub rate2: Vec<Option<f64>>,
}

/// Central differences in the interior, one-sided at the ends.
pub fn decay_rate_trace(trace: &AmplitudeTrace) -> Result<RateTrace> {
    let resolution = trace.dt() * trace.config().gamma();
    if resolution > MAX_RESOLUTION {
        return Err(Error::Resolution(resolution));
    }
    let pops: Vec<(f64, f64)> = trace.populations().collect();
    let rate = |select: fn(&(f64, f64)) -> f64| -> Vec<Option<f64>> {
        let p: Vec<f64> = pops.iter().map(select).collect();
        let n = p.len();
        (0..n)
            .map(|i| {
                if n < 2 {
                    return None;
                }
                let (lo, hi) = match i {
                    0 => (0, 1),
                    _ if i == n - 1 => (n - 2, n - 1),
                    _ => (i - 1, i + 1),
                };
                if p[lo] < POPULATION_FLOOR || p[hi] < POPULATION_FLOOR || p[i] < POPULATION_FLOOR {
                    return None;
                }
                let span = (hi - lo) as f64 * trace.dt();
                Some(-(p[hi].ln() - p[lo].ln()) / span)
            })
            .collect()
    };
    Ok(RateTrace {
        rate1: rate(|p| p.0),
        rate2: rate(|p| p.1),
    })
}

/// Rates of both atoms at time `t` by a central difference of width `2h`
/// (one-sided forward difference when `t < h`).
pub fn instantaneous_rates<S: AmplitudeSource + ?Sized>(
    source: &S,
    t: f64,
    h: f64,
) -> Result<(Option<f64>, Option<f64>)> {
    let (lo, hi) = if t >= h { (t - h, t + h) } else { (t, t + h) };
    let (a1, a2) = source.amplitudes(lo)?;
    let (b1, b2) = source.amplitudes(hi)?;
    let one = |p: f64, q: f64| (p >= POPULATION_FLOOR && q >= POPULATION_FLOOR).then(|| -(q.ln() - p.ln()) / (hi - lo));
    Ok((one(a1.norm_sqr(), b1.norm_sqr()), one(a2.norm_sqr(), b2.norm_sqr())))
}

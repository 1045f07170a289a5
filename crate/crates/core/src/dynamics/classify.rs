//! Super/subradiance labels from instantaneous rates just after each atom's
//! onset.
//!
//! Atom 1 first feels atom 2 at `T_L`, atom 2 first feels atom 1 at `T_R`.
//! Rates are sampled at `onset + 0.1/gamma` (rates jump at the onset itself)
//! and compared with `gamma` using a band of `±0.05 gamma`.

use core::fmt;

use super::rates::instantaneous_rates;
use super::SeriesSolution;
use crate::config::{InitialState, SystemConfig};
use crate::error::{Error, Result};

/// Half-width of the "independent" band, in units of gamma.
pub const BAND: f64 = 0.05;
/// Offset after the onset at which the rate is read, in units of 1/gamma.
pub const ONSET_OFFSET: f64 = 0.1;
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLabel {
    Independent,
    Superradiant,
    Subradiant,
}

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomLabel::Independent => "independent",
            AtomLabel::Superradiant => "superradiant",
            AtomLabel::Subradiant => "subradiant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayClassification {
    pub labels: [AtomLabel; 2],
    pub onsets: [f64; 2],
    pub sample_times: [f64; 2],
    /// Rates at the sample times, in units of gamma.
    pub rates: [f64; 2],
    /// Set when a rate fell inside the band and the label defaulted to
    /// independent.
    pub ambiguous: [bool; 2],
}

pub fn label_for(rate_over_gamma: f64) -> (AtomLabel, bool) {
    if rate_over_gamma > 1.0 + BAND {
        (AtomLabel::Superradiant, false)
    } else if rate_over_gamma < 1.0 - BAND {
        (AtomLabel::Subradiant, false)
    } else {
        (AtomLabel::Independent, true)
    }
}

pub fn classify_collective(config: &SystemConfig, state: &InitialState) -> Result<DecayClassification> {
    let series = SeriesSolution::new(config, state)?;
    let gamma = config.gamma();
    let onsets = [config.delay_left(), config.delay_right()];
    let sample_times = onsets.map(|t| t + ONSET_OFFSET / gamma);
    let mut out = DecayClassification {
        labels: [AtomLabel::Independent; 2],
        onsets,
        sample_times,
        rates: [0.0; 2],
        ambiguous: [false; 2],
    };
    for (atom, &at) in sample_times.iter().enumerate() {
        let (r1, r2) = instantaneous_rates(&series, at, FD_STEP / gamma)?;
        let rate = if atom == 0 { r1 } else { r2 }.ok_or(Error::EvaluationPoint {
            channel: if atom == 0 { "atom 1" } else { "atom 2" },
            value: 0.0,
        })?;
        let (label, ambiguous) = label_for(rate / gamma);
        out.labels[atom] = label;
        out.rates[atom] = rate / gamma;
        out.ambiguous[atom] = ambiguous;
    }
    Ok(out)
}

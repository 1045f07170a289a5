//! Zero-delay limit: the delay equations become a constant 2x2 linear system
//! with eigenvalues `-gamma/2 ± (beta gamma/2) e^{i phi}`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::AmplitudeSource;
use crate::config::{cis, InitialState, SystemConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonRetarded {
    gamma: f64,
    rate: Complex64,
    c1: Complex64,
    c2: Complex64,
    /// `e^{i(phi_L - phi)}` and `e^{i(phi_R - phi)}`.
    skew_left: Complex64,
    skew_right: Complex64,
}

impl NonRetarded {
    /// Uses the configuration's phases and ignores its delays.
    pub fn new(config: &SystemConfig, state: &InitialState) -> Self {
        let phi = config.mean_phase();
        let half_diff = 0.5 * (config.phase_left() - config.phase_right());
        Self {
            gamma: config.gamma(),
            rate: cis(phi) * (0.5 * config.beta() * config.gamma()),
            c1: state.c1(),
            c2: state.c2(),
            skew_left: cis(half_diff),
            skew_right: cis(-half_diff),
        }
    }

    fn evaluate(&self, t: f64) -> (Complex64, Complex64) {
        let x = self.rate * t;
        let damp = -0.5 * self.gamma * t;
        // cosh and sinh folded with the damping so neither factor overflows.
        let up = (x + damp).exp() * 0.5;
        let down = (-x + damp).exp() * 0.5;
        let cosh = up + down;
        let sinh = up - down;
        (
            self.c1 * cosh - self.c2 * self.skew_left * sinh,
            self.c2 * cosh - self.c1 * self.skew_right * sinh,
        )
    }
}

impl AmplitudeSource for NonRetarded {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain("time must be finite and non-negative"));
        }
        Ok(self.evaluate(t))
    }
}

/// `(c1(t), c2(t))` in the zero-delay limit.
pub fn nonretarded_amplitudes(config: &SystemConfig, state: &InitialState, t: f64) -> Result<(Complex64, Complex64)> {
    NonRetarded::new(config, state).amplitudes(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::series_amplitudes;
    use core::f64::consts::PI;

    #[test]
    fn symmetric_state_rates() {
        // In phase the symmetric state decays at (1 + beta) gamma, out of
        // phase at (1 - beta) gamma.
        let s = InitialState::symmetric();
        for (phase, rate) in [(0.0, 1.6), (PI, 0.4)] {
            let cfg = SystemConfig::from_phases(1.0, 0.6, 0.0, 0.0, phase, phase).unwrap();
            let (c1, c2) = nonretarded_amplitudes(&cfg, &s, 2.0).unwrap();
            let expected = s.c1() * (-0.5 * rate * 2.0f64).exp();
            assert!((c1 - expected).norm() < 1e-14, "{c1} {expected}");
            assert!((c2 - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn solves_the_ode() {
        let cfg = SystemConfig::from_phases(1.0, 0.8, 0.0, 0.0, 0.9, 2.5).unwrap();
        let s = InitialState::new(1.1, 0.4, -0.3);
        let sol = NonRetarded::new(&cfg, &s);
        let h = 1e-5;
        for &t in &[0.1, 0.7, 2.0, 4.5] {
            let (p1, p2) = sol.amplitudes(t + h).unwrap();
            let (m1, m2) = sol.amplitudes(t - h).unwrap();
            let (c1, c2) = sol.amplitudes(t).unwrap();
            let r1 = -c1 * 0.5 - Complex64::from_polar(0.4, 0.9) * c2;
            let r2 = -c2 * 0.5 - Complex64::from_polar(0.4, 2.5) * c1;
            assert!(((p1 - m1) / (2.0 * h) - r1).norm() < 1e-9);
            assert!(((p2 - m2) / (2.0 * h) - r2).norm() < 1e-9);
        }
    }

    #[test]
    fn no_overflow_at_long_times() {
        let cfg = SystemConfig::from_phases(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let (c1, _) = nonretarded_amplitudes(&cfg, &InitialState::antisymmetric(), 5000.0).unwrap();
        // Dark state: the antisymmetric combination does not decay at phi = 0.
        assert!((c1.norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn series_approaches_it_linearly_in_the_delay() {
        let s = InitialState::new(0.6, 0.2, 1.0);
        let diff = |delay: f64| {
            let cfg = SystemConfig::from_phases(1.0, 1.0, delay, 1.3 * delay, 0.7, 1.9).unwrap();
            (0..=40)
                .map(|i| {
                    let t = i as f64 * 0.1;
                    let (a1, a2) = series_amplitudes(&cfg, &s, t).unwrap();
                    let (b1, b2) = nonretarded_amplitudes(&cfg, &s, t).unwrap();
                    (a1 - b1).norm().max((a2 - b2).norm())
                })
                .fold(0.0, f64::max)
        };
        let d1 = diff(1e-4);
        let d2 = diff(5e-5);
        assert!(d1 < 1e-3, "{d1}");
        let ratio = d1 / d2;
        assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
    }
}

//! Named parameter sets.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anisotachy::{InitialState, SystemConfig};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Superconducting-circuit values in SI units.
pub mod circuit {
    /// Qubit frequency `omega0 / 2pi` in Hz.
    pub const QUBIT_FREQUENCY: f64 = 5e9;
    /// Decay rate `gamma / 2pi` in Hz.
    pub const DECAY_RATE: f64 = 10e6;
    pub const BETA: f64 = 0.95;
    /// Phase velocities of the two junction arrays as fractions of c.
    pub const FAST_ARRAY: f64 = 0.0033;
    pub const SLOW_ARRAY: f64 = 0.0026;
    /// Emitter separation in metres.
    pub const SEPARATION: f64 = 0.016;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Anisotropic pair with propagation phases pi and 2pi, symmetric state.
    Fig2,
    /// Transmons joined by two Josephson junction arrays.
    Cqed,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Fig2, Preset::Cqed];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Cqed => "cqed",
        }
    }

    pub fn config(self) -> SystemConfig {
        match self {
            Preset::Fig2 => SystemConfig::from_phases(1.0, 1.0, 1.0 / 0.988, 1.0 / 0.788, PI, 2.0 * PI)
                .expect("preset parameters are valid"),
            Preset::Cqed => {
                let (v_left, v_right) = cqed_velocities();
                SystemConfig::from_velocities(
                    1.0,
                    circuit::BETA,
                    circuit::QUBIT_FREQUENCY / circuit::DECAY_RATE,
                    1.0,
                    1.0,
                    v_left,
                    v_right,
                )
                .expect("preset parameters are valid")
            }
        }
    }

    pub fn state(self) -> InitialState {
        InitialState::symmetric()
    }

    /// Human-readable parameter table.
    pub fn describe(self) -> String {
        let cfg = self.config();
        let mut out = String::new();
        match self {
            Preset::Fig2 => {
                let _ = writeln!(
                    out,
                    "fig2: anisotropic pair with exact propagation phases, symmetric state"
                );
                let _ = writeln!(out, "  gamma d / v      = 1");
                let _ = writeln!(out, "  v_L / v          = 0.988");
                let _ = writeln!(out, "  v_R / v          = 0.788");
                let _ = writeln!(out, "  omega0 / gamma   = 500 (phases pinned to pi and 2pi)");
                let _ = writeln!(out, "  beta             = 1");
            }
            Preset::Cqed => {
                let _ = writeln!(out, "cqed: transmons coupled through two Josephson junction arrays");
                let _ = writeln!(out, "  omega0 / 2pi     = {} GHz", circuit::QUBIT_FREQUENCY / 1e9);
                let _ = writeln!(out, "  gamma / 2pi      = {} MHz", circuit::DECAY_RATE / 1e6);
                let _ = writeln!(out, "  beta             = {}", circuit::BETA);
                let _ = writeln!(out, "  v1 / c           = {}", circuit::FAST_ARRAY);
                let _ = writeln!(out, "  v2 / c           = {}", circuit::SLOW_ARRAY);
                let _ = writeln!(out, "  d                = {} cm", circuit::SEPARATION * 100.0);
            }
        }
        let _ = writeln!(out, "  derived, in units of 1/gamma:");
        let _ = writeln!(out, "    T_L   = {:.6}", cfg.delay_left());
        let _ = writeln!(out, "    T_R   = {:.6}", cfg.delay_right());
        let _ = writeln!(
            out,
            "    phi_L = {:.6} (mod 2pi: {:.4} pi)",
            cfg.phase_left(),
            reduced(cfg.phase_left())
        );
        let _ = writeln!(
            out,
            "    phi_R = {:.6} (mod 2pi: {:.4} pi)",
            cfg.phase_right(),
            reduced(cfg.phase_right())
        );
        out
    }
}

fn reduced(phase: f64) -> f64 {
    phase.rem_euclid(2.0 * PI) / PI
}

/// Left and right velocities in units of `gamma d`, taking the faster array
/// on the left. The outside velocity is set so that `gamma d / v = 1`.
pub fn cqed_velocities() -> (f64, f64) {
    let unit = 2.0 * PI * circuit::DECAY_RATE * circuit::SEPARATION;
    (
        circuit::FAST_ARRAY * SPEED_OF_LIGHT / unit,
        circuit::SLOW_ARRAY * SPEED_OF_LIGHT / unit,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_pins_phases() {
        let c = Preset::Fig2.config();
        assert_eq!(c.phase_left(), PI);
        assert_eq!(c.phase_right(), 2.0 * PI);
        assert!((c.delay_left() - 1.012_145_748_987_854_3).abs() < 1e-15);
    }

    #[test]
    fn cqed_velocities_are_near_unit_delay() {
        let (vl, vr) = cqed_velocities();
        assert!((vl - 0.984).abs() < 1e-3, "{vl}");
        assert!((vr - 0.775).abs() < 1e-3, "{vr}");
        let c = Preset::Cqed.config();
        assert_eq!(c.omega0(), Some(500.0));
        assert_eq!(c.beta(), 0.95);
    }

    #[test]
    fn description_lists_table_values() {
        let d = Preset::Cqed.describe();
        assert!(d.contains("5 GHz") && d.contains("10 MHz") && d.contains("0.95"));
    }
}

//! System parameters and initial states.
//!
//! Atom 1 sits at `x = -d/2`, atom 2 at `x = +d/2`. A photon travelling
//! left from atom 2 reaches atom 1 after `delay_left = d / v_left` and picks up
//! the propagation phase `phase_left = omega0 * delay_left`; likewise to the
//! right. Phases are stored unreduced and only wrapped inside exponentials.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).floor();
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Reduces an angle into `[0, 2pi)`; used before feeding large phases to
/// `sin`/`cos`.
pub(crate) fn reduce_angle(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).floor();
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub(crate) fn cis(angle: f64) -> Complex64 {
    let a = reduce_angle(angle);
    Complex64::new(a.cos(), a.sin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Origin {
    Velocities {
        omega0: f64,
        separation: f64,
        v: f64,
        v_left: f64,
        v_right: f64,
    },
    Phases,
}

/// Emitter pair plus waveguide geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    gamma: f64,
    beta: f64,
    delay_left: f64,
    delay_right: f64,
    phase_left: f64,
    phase_right: f64,
    origin: Origin,
}

/// Positions and wavenumbers needed to place the radiated field in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGeometry {
    pub separation: f64,
    pub v_left: f64,
    pub v_right: f64,
    /// Propagation phase per unit length for left-going light.
    pub k_left: f64,
    pub k_right: f64,
}

fn check_rates(gamma: f64, beta: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter {
            field: "gamma",
            reason: "must be positive and finite",
        });
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter {
            field: "beta",
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

fn check_positive(value: f64, field: &'static str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: "must be positive and finite",
        })
    }
}

impl SystemConfig {
    /// Builds a configuration from the emitter frequency, separation and the
    /// three field velocities.
    pub fn from_velocities(
        gamma: f64,
        beta: f64,
        omega0: f64,
        separation: f64,
        v: f64,
        v_left: f64,
        v_right: f64,
    ) -> Result<Self> {
        check_rates(gamma, beta)?;
        if !omega0.is_finite() {
            return Err(Error::InvalidParameter {
                field: "omega0",
                reason: "must be finite",
            });
        }
        if !(separation.is_finite() && separation >= 0.0) {
            return Err(Error::InvalidParameter {
                field: "d",
                reason: "must be non-negative and finite",
            });
        }
        check_positive(v, "v")?;
        check_positive(v_left, "v_left")?;
        check_positive(v_right, "v_right")?;
        let delay_left = separation / v_left;
        let delay_right = separation / v_right;
        Ok(Self {
            gamma,
            beta,
            delay_left,
            delay_right,
            phase_left: omega0 * delay_left,
            phase_right: omega0 * delay_right,
            origin: Origin::Velocities {
                omega0,
                separation,
                v,
                v_left,
                v_right,
            },
        })
    }

    /// Builds a configuration with explicit delays and propagation phases.
    /// Velocities and `omega0` are left unset.
    pub fn from_phases(
        gamma: f64,
        beta: f64,
        delay_left: f64,
        delay_right: f64,
        phase_left: f64,
        phase_right: f64,
    ) -> Result<Self> {
        check_rates(gamma, beta)?;
        for (value, field) in [(delay_left, "delay_left"), (delay_right, "delay_right")] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: "must be non-negative and finite",
                });
            }
        }
        for (value, field) in [(phase_left, "phase_left"), (phase_right, "phase_right")] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self {
            gamma,
            beta,
            delay_left,
            delay_right,
            phase_left,
            phase_right,
            origin: Origin::Phases,
        })
    }

    /// Same configuration with a different waveguide coupling efficiency.
    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        check_rates(self.gamma, beta)?;
        self.beta = beta;
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delay_left(&self) -> f64 {
        self.delay_left
    }

    pub fn delay_right(&self) -> f64 {
        self.delay_right
    }

    /// `T = (T_L + T_R) / 2`.
    pub fn mean_delay(&self) -> f64 {
        0.5 * (self.delay_left + self.delay_right)
    }

    pub fn min_delay(&self) -> f64 {
        self.delay_left.min(self.delay_right)
    }

    pub fn phase_left(&self) -> f64 {
        self.phase_left
    }

    pub fn phase_right(&self) -> f64 {
        self.phase_right
    }

    /// `phi = (phi_L + phi_R) / 2`.
    pub fn mean_phase(&self) -> f64 {
        0.5 * (self.phase_left + self.phase_right)
    }

    pub fn omega0(&self) -> Option<f64> {
        match self.origin {
            Origin::Velocities { omega0, .. } => Some(omega0),
            Origin::Phases => None,
        }
    }

    pub fn separation(&self) -> Option<f64> {
        match self.origin {
            Origin::Velocities { separation, .. } => Some(separation),
            Origin::Phases => None,
        }
    }

    /// `(v, v_left, v_right)` when the configuration was built from velocities.
    pub fn velocities(&self) -> Option<(f64, f64, f64)> {
        match self.origin {
            Origin::Velocities { v, v_left, v_right, .. } => Some((v, v_left, v_right)),
            Origin::Phases => None,
        }
    }

    /// Whether the atoms see each other's field with a finite delay.
    pub fn is_retarded(&self) -> bool {
        self.mean_delay() > 0.0
    }

    /// Geometry used to place the field in space.
    ///
    /// Phase-built configurations use a unit separation with
    /// `v_{L,R} = 1 / T_{L,R}` and wavenumbers `phi_{L,R}` per unit length,
    /// which reproduces the velocity-built geometry whenever the two agree.
    /// Returns `None` for a phase-built configuration with a zero delay.
    pub fn field_geometry(&self) -> Option<FieldGeometry> {
        match self.origin {
            Origin::Velocities {
                omega0,
                separation,
                v_left,
                v_right,
                ..
            } => Some(FieldGeometry {
                separation,
                v_left,
                v_right,
                k_left: omega0 / v_left,
                k_right: omega0 / v_right,
            }),
            Origin::Phases => {
                if self.delay_left > 0.0 && self.delay_right > 0.0 {
                    Some(FieldGeometry {
                        separation: 1.0,
                        v_left: 1.0 / self.delay_left,
                        v_right: 1.0 / self.delay_right,
                        k_left: self.phase_left,
                        k_right: self.phase_right,
                    })
                } else {
                    None
                }
            }
        }
    }
}

/// Single-excitation initial state `c1 = cos(theta) e^{i phi_A1}`,
/// `c2 = sin(theta) e^{i phi_A2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    theta: f64,
    phase_a1: f64,
    phase_a2: f64,
    c1: Complex64,
    c2: Complex64,
}

impl InitialState {
    pub fn new(theta: f64, phase_a1: f64, phase_a2: f64) -> Self {
        Self {
            theta,
            phase_a1,
            phase_a2,
            c1: cis(phase_a1) * theta.cos(),
            c2: cis(phase_a2) * theta.sin(),
        }
    }

    /// `(|eg> + |ge>) / sqrt(2)`.
    pub fn symmetric() -> Self {
        Self::new(PI / 4.0, 0.0, 0.0)
    }

    /// `(|eg> - |ge>) / sqrt(2)`.
    pub fn antisymmetric() -> Self {
        Self::new(PI / 4.0, 0.0, PI)
    }

    /// Only atom 1 excited.
    pub fn first_atom() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Only atom 2 excited.
    pub fn second_atom() -> Self {
        Self::new(PI / 2.0, 0.0, 0.0)
    }

    /// Builds a state from raw amplitudes; they must be normalized to 1e-12.
    pub fn from_amplitudes(c1: Complex64, c2: Complex64) -> Result<Self> {
        let norm = c1.norm_sqr() + c2.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                field: "amplitudes",
                reason: "|c1|^2 + |c2|^2 must equal 1",
            });
        }
        Ok(Self {
            theta: c2.norm().atan2(c1.norm()),
            phase_a1: c1.arg(),
            phase_a2: c2.arg(),
            c1,
            c2,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phase_a1(&self) -> f64 {
        self.phase_a1
    }

    pub fn phase_a2(&self) -> f64 {
        self.phase_a2
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// Concurrence `|sin 2 theta|` of the pure two-atom state.
    pub fn concurrence(&self) -> f64 {
        2.0 * self.c1.norm() * self.c2.norm()
    }

    /// `(phi_A1 - phi_A2) + (phi_R - phi_L) / 2`, wrapped into `(-pi, pi]`.
    pub fn delta_phi(&self, config: &SystemConfig) -> f64 {
        wrap_angle((self.phase_a1 - self.phase_a2) + 0.5 * (config.phase_right - config.phase_left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn symmetric_velocities_give_equal_delays_and_phases() {
        let c = SystemConfig::from_velocities(1.0, 0.5, 30.0, 1.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(c.delay_left(), c.delay_right());
        assert_eq!(c.delay_left(), c.mean_delay());
        assert_eq!(c.phase_left(), c.mean_phase());
        assert_eq!(c.phase_left(), 15.0);
    }

    #[test]
    fn caption_velocities_reduce_near_pi_and_two_pi() {
        let c = SystemConfig::from_velocities(1.0, 1.0, 500.0, 1.0, 1.0, 0.988, 0.788).unwrap();
        // 500 / 0.988 = 506.0729 rad and 500 / 0.788 = 634.5178 rad.
        let left = reduce_angle(c.phase_left()) / PI;
        let right = reduce_angle(c.phase_right()) / PI;
        assert!(close(left, 1.08, 0.01), "{left}");
        assert!(close(right, 1.98, 0.01), "{right}");
        assert!(close(c.delay_left(), 1.0 / 0.988, 1e-15));
        assert!(close(c.delay_right(), 1.0 / 0.788, 1e-15));
    }

    #[test]
    fn zero_separation_is_non_retarded() {
        let c = SystemConfig::from_velocities(1.0, 1.0, 500.0, 0.0, 1.0, 0.9, 0.8).unwrap();
        assert_eq!(c.delay_left(), 0.0);
        assert_eq!(c.delay_right(), 0.0);
        assert_eq!(c.phase_left(), 0.0);
        assert_eq!(c.phase_right(), 0.0);
        assert!(!c.is_retarded());
    }

    #[test]
    fn rejects_invalid_velocity_and_beta_naming_the_field() {
        let e = SystemConfig::from_velocities(1.0, 0.5, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "v_left", .. }));
        let e = SystemConfig::from_velocities(1.0, 0.5, 1.0, 1.0, 1.0, 1.0, -2.0).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "v_right", .. }));
        let e = SystemConfig::from_velocities(1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "beta", .. }));
        let e = SystemConfig::from_phases(1.0, -0.1, 1.0, 1.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "beta", .. }));
        let e = SystemConfig::from_phases(0.0, 0.1, 1.0, 1.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "gamma", .. }));
    }

    #[test]
    fn phase_built_averages() {
        let c = SystemConfig::from_phases(1.0, 1.0, 1.0, 1.0, PI, PI).unwrap();
        assert_eq!(c.mean_delay(), 1.0);
        assert_eq!(c.mean_phase(), PI);
        let c = SystemConfig::from_phases(1.0, 1.0, 1.0, 1.3, PI, 2.0 * PI).unwrap();
        assert!(close(c.mean_phase(), 1.5 * PI, 1e-15));
        assert!(c.velocities().is_none());
        assert!(c.omega0().is_none());
    }

    #[test]
    fn zero_delays_accepted_and_negative_rejected() {
        let c = SystemConfig::from_phases(1.0, 0.3, 0.0, 0.0, 0.7, -2.0).unwrap();
        assert!(!c.is_retarded());
        assert!(c.field_geometry().is_none());
        let e = SystemConfig::from_phases(1.0, 0.3, -1.0, 0.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(
            e,
            Error::InvalidParameter {
                field: "delay_left",
                ..
            }
        ));
    }

    #[test]
    fn the_two_construction_paths_agree() {
        let v = SystemConfig::from_velocities(1.0, 0.8, 37.0, 1.3, 1.0, 0.9, 0.7).unwrap();
        let p =
            SystemConfig::from_phases(1.0, 0.8, 1.3 / 0.9, 1.3 / 0.7, 37.0 * (1.3 / 0.9), 37.0 * (1.3 / 0.7)).unwrap();
        assert_eq!(v.delay_left(), p.delay_left());
        assert_eq!(v.delay_right(), p.delay_right());
        assert_eq!(v.phase_left(), p.phase_left());
        assert_eq!(v.phase_right(), p.phase_right());
        let gv = v.field_geometry().unwrap();
        let gp = p.field_geometry().unwrap();
        // Propagation phase across the full separation must match.
        assert!(close(gv.k_left * gv.separation, gp.k_left * gp.separation, 1e-12));
        assert!(close(gv.k_right * gv.separation, gp.k_right * gp.separation, 1e-12));
    }

    #[test]
    fn initial_state_examples() {
        let s = InitialState::new(0.0, 0.0, 0.0);
        assert_eq!(s.c1(), Complex64::new(1.0, 0.0));
        assert_eq!(s.c2().norm(), 0.0);
        let s = InitialState::symmetric();
        assert!(close(s.c1().re, FRAC_1_SQRT_2, 1e-15));
        assert!(close(s.c2().re, FRAC_1_SQRT_2, 1e-15));
        let s = InitialState::antisymmetric();
        assert!(close(s.c1().re, FRAC_1_SQRT_2, 1e-15));
        assert!(close(s.c2().re, -FRAC_1_SQRT_2, 1e-15));
        assert!(close(s.c2().im, 0.0, 1e-15));
    }

    #[test]
    fn from_amplitudes_round_trips_and_rejects_unnormalized() {
        let s = InitialState::new(0.4, 1.1, -2.0);
        let t = InitialState::from_amplitudes(s.c1(), s.c2()).unwrap();
        assert!(close(t.theta(), 0.4, 1e-14));
        assert!(close(t.phase_a1(), 1.1, 1e-14));
        assert!(close(t.phase_a2(), -2.0, 1e-14));
        assert!(InitialState::from_amplitudes(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn delta_phi_examples() {
        let c = SystemConfig::from_phases(1.0, 1.0, 1.0, 1.0, 0.3, 0.3).unwrap();
        assert_eq!(InitialState::new(0.3, 0.5, 0.5).delta_phi(&c), 0.0);
        assert!(close(
            InitialState::new(0.3, PI / 2.0, 0.0).delta_phi(&c),
            PI / 2.0,
            1e-15
        ));
        let c = SystemConfig::from_phases(1.0, 1.0, 1.0, 1.0, PI, 2.0 * PI).unwrap();
        assert!(close(InitialState::symmetric().delta_phi(&c), PI / 2.0, 1e-15));
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!(close(wrap_angle(-PI), PI, 1e-15));
        assert!(close(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, 1e-15));
        assert!(close(wrap_angle(7.0), 7.0 - TAU, 1e-15));
    }

    proptest::proptest! {
        #[test]
        fn initial_state_is_normalized(theta in -10.0f64..10.0, a in -50.0f64..50.0, b in -50.0f64..50.0) {
            let s = InitialState::new(theta, a, b);
            let norm = s.c1().norm_sqr() + s.c2().norm_sqr();
            proptest::prop_assert!((norm - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn averages_hold_for_random_velocities(
            omega0 in 0.0f64..1000.0,
            d in 0.0f64..5.0,
            vl in 0.05f64..3.0,
            vr in 0.05f64..3.0,
        ) {
            let c = SystemConfig::from_velocities(1.0, 0.5, omega0, d, 1.0, vl, vr).unwrap();
            proptest::prop_assert_eq!(c.delay_left(), d / vl);
            proptest::prop_assert_eq!(c.delay_right(), d / vr);
            proptest::prop_assert!((c.mean_delay() - 0.5 * (d / vl + d / vr)).abs() <= 1e-15 * (1.0 + c.mean_delay()));
            let phi = 0.5 * (omega0 * d / vl + omega0 * d / vr);
            proptest::prop_assert!((c.mean_phase() - phi).abs() <= 1e-15 * (1.0 + phi));
        }
    }
}

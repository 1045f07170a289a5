//! Method-of-steps integration of the delay equations.
//!
//! Classical RK4 on a grid that lands exactly on every onset time
//! `2nT`, `2nT + T_L`, `2nT + T_R`: each interval between consecutive onsets
//! is split into `ceil(len / dt)` equal steps. Delayed amplitudes come from a
//! cubic Hermite interpolant of the solution computed so far. Every knot keeps
//! separate left and right derivatives because the right-hand side jumps at
//! the onsets, so the interpolant is exact to fourth order on each side.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{AmplitudeSource, AmplitudeTrace, SolverMethod};
use crate::config::{cis, InitialState, SystemConfig};
use crate::error::{Error, Result};

type Pair = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Knot {
    t: f64,
    y: Pair,
    /// Derivative approached from the left (end of the previous step).
    d_left: Pair,
    /// Derivative leaving to the right (start of the next step).
    d_right: Pair,
}

/// Dense solution on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DdeSolution {
    knots: Vec<Knot>,
    t_max: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

struct Rhs {
    half_gamma: f64,
    coupling_left: Complex64,
    coupling_right: Complex64,
    delay_left: f64,
    delay_right: f64,
}

impl DdeSolution {
    /// Integrates up to `t_max` with nominal step `dt <= min(T_L, T_R) / 8`.
    pub fn integrate(config: &SystemConfig, state: &InitialState, t_max: f64, dt: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::Domain("t_max must be positive"));
        }
        if config.delay_left() <= 0.0 || config.delay_right() <= 0.0 {
            return Err(Error::Domain(
                "delay integration needs both delays positive; use the non-retarded closed form",
            ));
        }
        let limit = config.min_delay() / 8.0;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                field: "dt",
                reason: "must be positive and finite",
            });
        }
        if dt > limit {
            return Err(Error::StepSize { dt, limit });
        }

        let a = 0.5 * config.beta() * config.gamma();
        let rhs = Rhs {
            half_gamma: 0.5 * config.gamma(),
            coupling_left: cis(config.phase_left()) * a,
            coupling_right: cis(config.phase_right()) * a,
            delay_left: config.delay_left(),
            delay_right: config.delay_right(),
        };

        let breaks = breakpoints(config, t_max);
        let mut sol = DdeSolution {
            knots: Vec::with_capacity((t_max / dt) as usize + breaks.len() + 2),
            t_max,
        };
        let y0 = [state.c1(), state.c2()];
        sol.knots.push(Knot {
            t: 0.0,
            y: y0,
            d_left: [ZERO; 2],
            d_right: [ZERO; 2],
        });

        let mut start = 0.0;
        for &end in &breaks {
            let steps = ((end - start) / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = (end - start) / steps as f64;
            // The cross terms switch on at the onset itself, Θ(0) = 1.
            let active = [
                start >= rhs.delay_left * (1.0 - 1e-12),
                start >= rhs.delay_right * (1.0 - 1e-12),
            ];
            for i in 0..steps {
                let t0 = start + i as f64 * h;
                let t1 = if i + 1 == steps {
                    end
                } else {
                    start + (i + 1) as f64 * h
                };
                let h = t1 - t0;
                let y = sol.knots.last().unwrap().y;
                let k1 = rhs.eval(&sol, t0, y, active, Side::Right);
                sol.knots.last_mut().unwrap().d_right = k1;
                let k2 = rhs.eval(&sol, t0 + 0.5 * h, axpy(y, 0.5 * h, k1), active, Side::Right);
                let k3 = rhs.eval(&sol, t0 + 0.5 * h, axpy(y, 0.5 * h, k2), active, Side::Right);
                let k4 = rhs.eval(&sol, t1, axpy(y, h, k3), active, Side::Left);
                let y1 = [
                    y[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * (h / 6.0),
                    y[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * (h / 6.0),
                ];
                // Push with a provisional left derivative: the delayed lookup
                // below may read the interval ending at this knot.
                sol.knots.push(Knot {
                    t: t1,
                    y: y1,
                    d_left: k4,
                    d_right: k4,
                });
                let d = rhs.eval(&sol, t1, y1, active, Side::Left);
                let last = sol.knots.last_mut().unwrap();
                last.d_left = d;
                last.d_right = d;
            }
            start = end;
        }
        Ok(sol)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Number of integration knots including `t = 0`.
    pub fn knot_count(&self) -> usize {
        self.knots.len()
    }

    /// Hermite interpolation; `side` picks the piece when `t` is a knot.
    fn interpolate(&self, t: f64, side: Side) -> Pair {
        let ks = &self.knots;
        // Index of the first knot with time > t (Right) or >= t (Left).
        let idx = match side {
            Side::Right => ks.partition_point(|k| k.t <= t),
            Side::Left => ks.partition_point(|k| k.t < t),
        };
        let i = idx.clamp(1, ks.len() - 1);
        let (k0, k1) = (&ks[i - 1], &ks[i]);
        let h = k1.t - k0.t;
        let s = (t - k0.t) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let mut out = [ZERO; 2];
        for (j, o) in out.iter_mut().enumerate() {
            *o = k0.y[j] * h00 + k0.d_right[j] * (h10 * h) + k1.y[j] * h01 + k1.d_left[j] * (h11 * h);
        }
        out
    }
}

impl Rhs {
    fn eval(&self, sol: &DdeSolution, t: f64, y: Pair, active: [bool; 2], side: Side) -> Pair {
        let mut d = [-y[0] * self.half_gamma, -y[1] * self.half_gamma];
        if active[0] {
            let q = (t - self.delay_left).max(0.0);
            d[0] -= self.coupling_left * sol.interpolate(q, side)[1];
        }
        if active[1] {
            let q = (t - self.delay_right).max(0.0);
            d[1] -= self.coupling_right * sol.interpolate(q, side)[0];
        }
        d
    }
}

fn axpy(y: Pair, h: f64, k: Pair) -> Pair {
    [y[0] + k[0] * h, y[1] + k[1] * h]
}

/// Sorted onset times in `(0, t_max]`, always ending with `t_max`.
fn breakpoints(config: &SystemConfig, t_max: f64) -> Vec<f64> {
    let two_t = 2.0 * config.mean_delay();
    let mut out = Vec::new();
    let mut n = 0usize;
    loop {
        let base = n as f64 * two_t;
        if base > t_max {
            break;
        }
        for t in [base, base + config.delay_left(), base + config.delay_right()] {
            if t > 0.0 && t < t_max {
                out.push(t);
            }
        }
        n += 1;
    }
    out.push(t_max);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tiny = 1e-12 * t_max.max(1.0);
    out.dedup_by(|a, b| (*a - *b).abs() <= tiny);
    // Keep t_max itself as the final point.
    if let Some(last) = out.last_mut() {
        *last = t_max;
    }
    out
}

impl AmplitudeSource for DdeSolution {
    fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain("time must be finite and non-negative"));
        }
        if t > self.t_max * (1.0 + 1e-12) {
            return Err(Error::Domain("time beyond the integrated window"));
        }
        let y = self.interpolate(t.min(self.t_max), Side::Left);
        Ok((y[0], y[1]))
    }
}

/// Integrates with step `dt` and samples the result at `k * dt`.
pub fn dde_integrate(config: &SystemConfig, state: &InitialState, t_max: f64, dt: f64) -> Result<AmplitudeTrace> {
    let sol = DdeSolution::integrate(config, state, t_max, dt)?;
    AmplitudeTrace::sample(&sol, config, state, SolverMethod::Dde, t_max, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{series_amplitudes, Solver};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn fig2() -> SystemConfig {
        SystemConfig::from_phases(1.0, 1.0, 1.0 / 0.988, 1.0 / 0.788, PI, 2.0 * PI).unwrap()
    }

    fn max_err(cfg: &SystemConfig, s: &InitialState, t_max: f64, dt: f64) -> f64 {
        let trace = dde_integrate(cfg, s, t_max, dt).unwrap();
        let series = Solver::Series.trace(cfg, s, t_max, dt).unwrap();
        trace.max_abs_difference(&series)
    }

    #[test]
    fn agrees_with_series_on_the_anisotropic_example() {
        let cfg = fig2();
        let err = max_err(&cfg, &InitialState::symmetric(), 6.0, cfg.min_delay() / 64.0);
        assert!(err <= 1e-6, "{err:e}");
    }

    #[test]
    fn fourth_order_convergence() {
        let cfg = SystemConfig::from_phases(1.0, 0.9, 0.8, 1.1, 0.4, 2.0).unwrap();
        let s = InitialState::new(0.5, 0.2, -0.7);
        let e1 = max_err(&cfg, &s, 5.0, 0.8 / 16.0);
        let e2 = max_err(&cfg, &s, 5.0, 0.8 / 32.0);
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "order {order}, errors {e1:e} {e2:e}");
    }

    #[test]
    fn uncoupled_is_pure_exponential() {
        let cfg = SystemConfig::from_phases(1.0, 0.0, 0.5, 0.7, 1.0, 1.0).unwrap();
        let s = InitialState::new(0.4, 0.3, 0.1);
        let trace = dde_integrate(&cfg, &s, 5.0, 0.01).unwrap();
        for (i, &t) in trace.times().iter().enumerate() {
            let e = (-0.5 * t).exp();
            assert!((trace.c1()[i] - s.c1() * e).norm() < 1e-10);
            assert!((trace.c2()[i] - s.c2() * e).norm() < 1e-10);
        }
    }

    #[test]
    fn step_and_delay_preconditions() {
        let cfg = fig2();
        let s = InitialState::symmetric();
        let limit = cfg.min_delay() / 8.0;
        assert!(matches!(
            dde_integrate(&cfg, &s, 1.0, limit * 1.01),
            Err(Error::StepSize { .. })
        ));
        assert!(dde_integrate(&cfg, &s, 1.0, limit).is_ok());
        let zero = SystemConfig::from_phases(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(dde_integrate(&zero, &s, 1.0, 0.01), Err(Error::Domain(_))));
        assert!(matches!(dde_integrate(&cfg, &s, 0.0, 0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn breakpoints_are_sorted_and_include_onsets() {
        let cfg = fig2();
        let b = breakpoints(&cfg, 6.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*b.last().unwrap(), 6.0);
        for onset in [cfg.delay_left(), cfg.delay_right(), 2.0 * cfg.mean_delay()] {
            assert!(b.contains(&onset));
        }
    }

    #[test]
    fn dense_output_between_samples() {
        let cfg = fig2();
        let s = InitialState::symmetric();
        let sol = DdeSolution::integrate(&cfg, &s, 6.0, cfg.min_delay() / 64.0).unwrap();
        for i in 0..97 {
            let t = 0.0613 * i as f64;
            let (a1, a2) = sol.amplitudes(t).unwrap();
            let (b1, b2) = series_amplitudes(&cfg, &s, t).unwrap();
            assert!((a1 - b1).norm() < 1e-6 && (a2 - b2).norm() < 1e-6, "t={t}");
        }
        assert!(sol.amplitudes(6.5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn agrees_with_series_on_random_systems(
            beta in 0.1f64..1.0, tl in 0.1f64..2.0, tr in 0.1f64..2.0,
            phl in -10.0f64..10.0, phr in -10.0f64..10.0,
            theta in 0.0f64..PI, pa in -PI..PI,
        ) {
            let cfg = SystemConfig::from_phases(1.0, beta, tl, tr, phl, phr).unwrap();
            let s = InitialState::new(theta, pa, 0.0);
            let err = max_err(&cfg, &s, 6.0, cfg.min_delay() / 64.0);
            prop_assert!(err <= 1e-6, "{:e}", err);
        }
    }
}

//! Radiated intensity `I(x, t) / I0`.
//!
//! The guided field at `(x, t)` is the coherent sum of four light-cone terms,
//! one per atom and direction. Atom `i` at `x_i` contributes to the left
//! (`x < x_i`) with `c_i(t - (x_i - x)/v_L) e^{-i k_L (x - x_i)}` and to the
//! right (`x > x_i`) with `c_i(t - (x - x_i)/v_R) e^{i k_R (x - x_i)}`, each
//! windowed by `ζ(t, τ) = Θ(t + τ) - Θ(τ)` with `Θ(0) = 1`. The window keeps
//! a term on its own side of the atom and inside its causal cone; cone
//! boundaries are included, the atom position itself is not.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::config::{cis, FieldGeometry, InitialState, SystemConfig};
use crate::dynamics::{AmplitudeSource, SolverMethod};
use crate::error::{Error, Result};

#[inline]
fn step(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn window(t: f64, tau: f64) -> f64 {
    step(t + tau) - step(tau)
}

/// Geometry of a configuration, or a domain error when it has none.
pub fn geometry(config: &SystemConfig) -> Result<FieldGeometry> {
    config
        .field_geometry()
        .ok_or(Error::Domain("configuration has no spatial geometry (zero delay)"))
}

/// `I(x, t) / I0` from any amplitude backend.
pub fn intensity_at<S: AmplitudeSource + ?Sized>(geometry: &FieldGeometry, source: &S, x: f64, t: f64) -> Result<f64> {
    let half = 0.5 * geometry.separation;
    let mut field = Complex64::new(0.0, 0.0);
    for (atom, x_atom) in [(0usize, -half), (1, half)] {
        let offset = x - x_atom;
        let tau_left = offset / geometry.v_left;
        let w = window(t, tau_left);
        if w != 0.0 {
            let c = pick(source.amplitudes(t + tau_left)?, atom);
            field += c * cis(-geometry.k_left * offset) * w;
        }
        let tau_right = -offset / geometry.v_right;
        let w = window(t, tau_right);
        if w != 0.0 {
            let c = pick(source.amplitudes(t + tau_right)?, atom);
            field += c * cis(geometry.k_right * offset) * w;
        }
    }
    Ok(field.norm_sqr())
}

#[inline]
fn pick(pair: (Complex64, Complex64), atom: usize) -> Complex64 {
    if atom == 0 {
        pair.0
    } else {
        pair.1
    }
}

/// Uniform axis with `n >= 2` points spanning `[lo, hi]`.
pub fn axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            field: "grid size",
            reason: "needs at least two points",
        });
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter {
            field: "range",
            reason: "must be finite and non-empty",
        });
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * h })
        .collect())
}

/// Intensity samples on a rectangular `(x, t)` window, stored row-major with
/// one row per time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeGrid {
    xs: Vec<f64>,
    ts: Vec<f64>,
    values: Vec<f64>,
    config: SystemConfig,
    state: InitialState,
    method: SolverMethod,
}

impl SpacetimeGrid {
    /// Assembles a grid from rows computed elsewhere (possibly in parallel).
    pub fn from_rows(
        xs: Vec<f64>,
        ts: Vec<f64>,
        rows: Vec<Vec<f64>>,
        config: SystemConfig,
        state: InitialState,
        method: SolverMethod,
    ) -> Result<Self> {
        if rows.len() != ts.len() || rows.iter().any(|r| r.len() != xs.len()) {
            return Err(Error::InvalidParameter {
                field: "rows",
                reason: "shape does not match the axes",
            });
        }
        Ok(Self {
            values: rows.into_iter().flatten().collect(),
            xs,
            ts,
            config,
            state,
            method,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at time index `it`, position index `ix`.
    pub fn get(&self, it: usize, ix: usize) -> f64 {
        self.values[it * self.xs.len() + ix]
    }

    pub fn row(&self, it: usize) -> &[f64] {
        let n = self.xs.len();
        &self.values[it * n..(it + 1) * n]
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
}

/// One row of [`intensity_grid`].
pub fn intensity_row<S: AmplitudeSource + ?Sized>(
    geometry: &FieldGeometry,
    source: &S,
    xs: &[f64],
    t: f64,
) -> Result<Vec<f64>> {
    xs.iter().map(|&x| intensity_at(geometry, source, x, t)).collect()
}

/// Sequential grid evaluation.
#[allow(clippy::too_many_arguments)]
pub fn intensity_grid<S: AmplitudeSource + ?Sized>(
    config: &SystemConfig,
    state: &InitialState,
    source: &S,
    method: SolverMethod,
    x_range: (f64, f64),
    t_range: (f64, f64),
    nx: usize,
    nt: usize,
) -> Result<SpacetimeGrid> {
    let geo = geometry(config)?;
    let xs = axis(x_range.0, x_range.1, nx)?;
    let ts = axis(t_range.0, t_range.1, nt)?;
    if t_range.0 < 0.0 {
        return Err(Error::InvalidParameter {
            field: "t range",
            reason: "must start at or after 0",
        });
    }
    let rows = ts
        .iter()
        .map(|&t| intensity_row(&geo, source, &xs, t))
        .collect::<Result<Vec<_>>>()?;
    SpacetimeGrid::from_rows(xs, ts, rows, *config, *state, method)
}

/// Time-integrated intensity at a pair of detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorEnergy {
    pub left: f64,
    pub right: f64,
    /// `(E_R - E_L) / (E_R + E_L)`; `None` when nothing arrives.
    pub asymmetry: Option<f64>,
}

/// Integrates `I(±x_det, t)` over `[0, t_max]` with the trapezoid rule.
///
/// The time axis is split at every instant where a light-cone window opens or
/// an amplitude switches on a new term, and each piece is sampled with steps
/// no longer than `dt`. Piece ends are evaluated as one-sided limits so the
/// jumps never straddle a trapezoid.
pub fn directional_energy<S: AmplitudeSource + ?Sized>(
    config: &SystemConfig,
    source: &S,
    x_det: f64,
    t_max: f64,
    dt: f64,
) -> Result<DetectorEnergy> {
    let geo = geometry(config)?;
    let half = 0.5 * geo.separation;
    if !(x_det.is_finite() && x_det.abs() > half) {
        return Err(Error::InvalidParameter {
            field: "x_det",
            reason: "detector must lie outside the atom pair",
        });
    }
    if !(t_max.is_finite() && t_max > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            field: "t_max/dt",
            reason: "must be positive and finite",
        });
    }
    let x = x_det.abs();
    let right_arrivals = [(x + half) / geo.v_right, (x - half) / geo.v_right];
    let left_arrivals = [(x - half) / geo.v_left, (x + half) / geo.v_left];
    let right = detector_integral(&geo, source, x, &right_arrivals, config, t_max, dt)?;
    let left = detector_integral(&geo, source, -x, &left_arrivals, config, t_max, dt)?;
    let total = left + right;
    Ok(DetectorEnergy {
        left,
        right,
        asymmetry: (total > 0.0).then(|| (right - left) / total),
    })
}

fn detector_integral<S: AmplitudeSource + ?Sized>(
    geo: &FieldGeometry,
    source: &S,
    x: f64,
    arrivals: &[f64; 2],
    config: &SystemConfig,
    t_max: f64,
    dt: f64,
) -> Result<f64> {
    let mut cuts = Vec::new();
    let two_t = 2.0 * config.mean_delay();
    for &a in arrivals {
        cuts.push(a);
        if two_t > 0.0 {
            let mut n = 0usize;
            loop {
                let base = a + n as f64 * two_t;
                if base > t_max {
                    break;
                }
                cuts.extend([base, base + config.delay_left(), base + config.delay_right()]);
                n += 1;
            }
        }
    }
    cuts.retain(|&c| c > 0.0 && c < t_max);
    cuts.push(0.0);
    cuts.push(t_max);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let n = ((b - a) / dt).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        let nudge = 1e-12 * b.max(1.0);
        let mut sum = 0.0;
        for k in 0..=n {
            let t = match k {
                0 => a + nudge,
                _ if k == n => b - nudge,
                _ => a + k as f64 * h,
            };
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            sum += w * intensity_at(geo, source, x, t)?;
        }
        total += sum * h;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{SeriesSolution, Solver};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn fig2() -> SystemConfig {
        SystemConfig::from_phases(1.0, 1.0, 1.0 / 0.988, 1.0 / 0.788, PI, 2.0 * PI).unwrap()
    }

    #[test]
    fn dark_at_time_zero_and_outside_the_cones() {
        let cfg = fig2();
        let geo = geometry(&cfg).unwrap();
        let src = SeriesSolution::new(&cfg, &InitialState::symmetric()).unwrap();
        for &x in &[-3.0, -0.5, 0.0, 0.2, 0.5, 4.0] {
            assert_eq!(intensity_at(&geo, &src, x, 0.0).unwrap(), 0.0);
        }
        let t = 1.5;
        let ahead = 0.5 + geo.v_right * t + 1e-9;
        assert_eq!(intensity_at(&geo, &src, ahead, t).unwrap(), 0.0);
        let behind = -0.5 - geo.v_left * t - 1e-9;
        assert_eq!(intensity_at(&geo, &src, behind, t).unwrap(), 0.0);
        assert!(intensity_at(&geo, &src, ahead - 1e-3, t).unwrap() > 0.0);
    }

    #[test]
    fn single_uncoupled_atom_follows_its_retarded_amplitude() {
        let cfg = SystemConfig::from_velocities(1.0, 0.0, 20.0, 1.0, 1.0, 0.7, 1.3).unwrap();
        let geo = geometry(&cfg).unwrap();
        let src = SeriesSolution::new(&cfg, &InitialState::first_atom()).unwrap();
        for &(x, t) in &[(-2.0, 3.0), (-0.7, 0.5), (0.0, 1.0), (2.0, 2.5)] {
            let x1 = -0.5;
            let v = if x < x1 { 0.7 } else { 1.3 };
            let retarded = t - (x - x1).abs() / v;
            let expected = if retarded >= 0.0 { (-retarded).exp() } else { 0.0 };
            let got = intensity_at(&geo, &src, x, t).unwrap();
            assert!((got - expected).abs() < 1e-14, "x={x} t={t}: {got} vs {expected}");
        }
    }

    #[test]
    fn mirror_symmetric_for_symmetric_setup() {
        let cfg = SystemConfig::from_phases(1.0, 0.8, 0.5, 0.5, 2.0 * PI, 2.0 * PI).unwrap();
        let s = InitialState::symmetric();
        let src = SeriesSolution::new(&cfg, &s).unwrap();
        let grid = intensity_grid(&cfg, &s, &src, SolverMethod::Series, (-2.05, 2.05), (0.0, 3.0), 41, 31).unwrap();
        for it in 0..31 {
            for ix in 0..41 {
                let a = grid.get(it, ix);
                let b = grid.get(it, 40 - ix);
                assert!((a - b).abs() <= 1e-9, "{it} {ix}");
            }
        }
    }

    #[test]
    fn grid_rejects_bad_axes() {
        let cfg = fig2();
        let s = InitialState::symmetric();
        let src = SeriesSolution::new(&cfg, &s).unwrap();
        assert!(intensity_grid(&cfg, &s, &src, SolverMethod::Series, (0.0, 1.0), (0.0, 1.0), 1, 5).is_err());
        assert!(intensity_grid(&cfg, &s, &src, SolverMethod::Series, (1.0, 1.0), (0.0, 1.0), 5, 5).is_err());
        let nonret = SystemConfig::from_phases(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(geometry(&nonret).is_err());
    }

    #[test]
    fn energy_asymmetry_vanishes_without_coupling() {
        let cfg = SystemConfig::from_velocities(1.0, 0.0, 10.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let src = SeriesSolution::new(&cfg, &InitialState::symmetric()).unwrap();
        let e = directional_energy(&cfg, &src, 2.0, 40.0, 0.01).unwrap();
        assert!(e.asymmetry.unwrap().abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn energy_sums_to_two_over_beta_gamma() {
        // Every photon ends up in the guide when beta = 1: E_L + E_R = 2/gamma.
        let cfg = fig2();
        let src = Solver::Series
            .source(&cfg, &InitialState::new(0.3, 0.4, 0.0), 60.0)
            .unwrap();
        let e = directional_energy(&cfg, &src, 1.0, 60.0, 0.005).unwrap();
        assert!((e.left + e.right - 2.0).abs() < 1e-4, "{e:?}");
    }

    #[test]
    fn detector_inside_the_pair_is_rejected() {
        let cfg = fig2();
        let src = SeriesSolution::new(&cfg, &InitialState::symmetric()).unwrap();
        assert!(directional_energy(&cfg, &src, 0.3, 10.0, 0.01).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn global_phase_does_not_change_intensity(
            g in -PI..PI, x in -4.0f64..4.0, t in 0.0f64..5.0, theta in 0.0f64..PI, pa in -PI..PI,
        ) {
            let cfg = fig2();
            let geo = geometry(&cfg).unwrap();
            let a = SeriesSolution::new(&cfg, &InitialState::new(theta, pa, 0.0)).unwrap();
            let b = SeriesSolution::new(&cfg, &InitialState::new(theta, pa + g, g)).unwrap();
            let ia = intensity_at(&geo, &a, x, t).unwrap();
            let ib = intensity_at(&geo, &b, x, t).unwrap();
            prop_assert!(ia >= 0.0);
            prop_assert!((ia - ib).abs() <= 1e-12);
        }
    }
}

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use anisotachy::dynamics::{compute_poles, instantaneous_rates};
use anisotachy::{AmplitudeSource, InitialState, Solver, SystemConfig};

fn pair() -> impl Strategy<Value = (SystemConfig, InitialState)> {
    (
        0.3..1.5f64,
        0.3..1.5f64,
        0.05..1.0f64,
        -PI..PI,
        -PI..PI,
        0.0..FRAC_PI_2,
        -PI..PI,
    )
        .prop_map(|(tl, tr, beta, pl, pr, theta, a1)| {
            (
                SystemConfig::from_phases(1.0, beta, tl, tr, pl, pr).unwrap(),
                InitialState::new(theta, a1, 0.0),
            )
        })
}

fn max_gap(a: &dyn AmplitudeSource, b: &dyn AmplitudeSource, ts: impl Iterator<Item = f64>) -> f64 {
    ts.map(|t| {
        let (a1, a2) = a.amplitudes(t).unwrap();
        let (b1, b2) = b.amplitudes(t).unwrap();
        (a1 - b1).norm().max((a2 - b2).norm())
    })
    .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn backends_agree((cfg, state) in pair()) {
        let t_max = 5.0;
        let series = Solver::Series.source(&cfg, &state, t_max).unwrap();
        let dde = Solver::Dde { dt: Some(cfg.min_delay() / 128.0) }.source(&cfg, &state, t_max).unwrap();
        let poles = compute_poles(&cfg, 50).unwrap().with_state(&state);
        let grid = || (1..=100).map(|k| 0.05 * k as f64);
        prop_assert!(max_gap(&*series, &*dde, grid()) < 1e-7);
        // The truncated pole sum converges slowly at early times and near
        // the onsets.
        let away = |t: &f64| *t >= 2.0 && [cfg.delay_left(), cfg.delay_right()]
            .iter()
            .all(|&tau| (1..=16).all(|k| (t - k as f64 * tau).abs() > 0.1));
        prop_assert!(max_gap(&*series, &poles, grid().filter(away)) < 2e-3);
    }

    #[test]
    fn shifting_both_phases_by_pi_flips_the_second_amplitude((cfg, state) in pair()) {
        let shifted = SystemConfig::from_phases(
            1.0, cfg.beta(), cfg.delay_left(), cfg.delay_right(),
            cfg.phase_left() + PI, cfg.phase_right() + PI,
        ).unwrap();
        let flipped = InitialState::new(state.theta(), state.phase_a1(), state.phase_a2() + PI);
        let a = Solver::Series.source(&cfg, &state, 4.0).unwrap();
        let b = Solver::Series.source(&shifted, &flipped, 4.0).unwrap();
        for k in 0..=80 {
            let t = 0.05 * k as f64;
            let (a1, a2) = a.amplitudes(t).unwrap();
            let (b1, b2) = b.amplitudes(t).unwrap();
            prop_assert!((a1 - b1).norm() < 1e-12);
            prop_assert!((a2 + b2).norm() < 1e-12);
        }
    }

    #[test]
    fn mirrored_pair_swaps_amplitudes((cfg, state) in pair()) {
        let mirror = SystemConfig::from_phases(
            1.0, cfg.beta(), cfg.delay_right(), cfg.delay_left(),
            cfg.phase_right(), cfg.phase_left(),
        ).unwrap();
        let swapped = InitialState::from_amplitudes(state.c2(), state.c1()).unwrap();
        let a = Solver::Series.source(&cfg, &state, 4.0).unwrap();
        let b = Solver::Series.source(&mirror, &swapped, 4.0).unwrap();
        for k in 0..=80 {
            let t = 0.05 * k as f64;
            let (a1, a2) = a.amplitudes(t).unwrap();
            let (b1, b2) = b.amplitudes(t).unwrap();
            prop_assert!((a1 - b2).norm() < 1e-12 && (a2 - b1).norm() < 1e-12);
        }
    }

    #[test]
    fn traces_never_exceed_unit_excitation((cfg, state) in pair()) {
        let trace = Solver::Series.trace(&cfg, &state, 8.0, 0.01).unwrap();
        for (p1, p2) in trace.populations() {
            prop_assert!(p1 + p2 <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn lossless_pair_without_delay_oscillates() {
    let cfg = SystemConfig::from_phases(1.0, 1.0, 0.0, 0.0, FRAC_PI_2, FRAC_PI_2).unwrap();
    let trace = Solver::NonRetarded
        .trace(&cfg, &InitialState::first_atom(), 10.0, 0.01)
        .unwrap();
    for (&t, c1) in trace.times().iter().zip(trace.c1()) {
        let expected = (0.5 * t).cos() * (-0.5 * t).exp();
        assert!((c1 - Complex64::new(expected, 0.0)).norm() < 1e-12, "t = {t}");
    }
}

#[test]
fn amplitude_slope_jumps_when_the_partner_field_arrives() {
    let (tl, tr) = (0.8, 1.1);
    let cfg = SystemConfig::from_phases(1.0, 0.7, tl, tr, 0.4, -1.0).unwrap();
    let state = InitialState::new(0.6, 0.3, 0.0);
    let src = Solver::Series.source(&cfg, &state, 3.0).unwrap();
    let h = 1e-6;
    let slope = |t: f64, atom: usize| {
        let (a, b) = (src.amplitudes(t - h).unwrap(), src.amplitudes(t + h).unwrap());
        if atom == 0 {
            (b.0 - a.0) / (2.0 * h)
        } else {
            (b.1 - a.1) / (2.0 * h)
        }
    };
    let eps = 1e-3;
    // The jump equals the newly switched-on term, evaluated at its start.
    let jump1 = slope(tl + eps, 0) - slope(tl - eps, 0);
    let expected1 = -0.5 * 0.7 * Complex64::from_polar(1.0, 0.4) * state.c2();
    assert!((jump1 - expected1).norm() < 2e-3, "{jump1} vs {expected1}");
    let jump2 = slope(tr + eps, 1) - slope(tr - eps, 1);
    let expected2 = -0.5 * 0.7 * Complex64::from_polar(1.0, -1.0) * state.c1();
    assert!((jump2 - expected2).norm() < 2e-3, "{jump2} vs {expected2}");
    // Rates are smooth away from the onsets.
    let r = instantaneous_rates(&src, 0.5, 1e-4).unwrap();
    assert!((r.0.unwrap() - 1.0).abs() < 1e-6 && (r.1.unwrap() - 1.0).abs() < 1e-6);
}

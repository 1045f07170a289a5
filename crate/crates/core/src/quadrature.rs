#![allow(clippy::excessive_precision)]
//! Globally adaptive 21-point Gauss-Kronrod quadrature on finite intervals
//! and on the whole real line.
//!
//! The real line is split at caller-supplied breakpoints (peak positions of
//! the integrand). The two semi-infinite tails are mapped onto `[0, 1)` with
//! `x = a ± w t / (1 - t)`. All pieces share one pool: the interval with the
//! largest error estimate is bisected until the global tolerance is met.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Stopping rule: `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 0.0,
            rel: 1e-11,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    Upper { a: f64, w: f64 },
    Lower { a: f64, w: f64 },
}

impl Map {
    #[inline]
    fn apply<F: FnMut(f64) -> f64>(self, f: &mut F, t: f64) -> f64 {
        match self {
            Map::Identity => f(t),
            Map::Upper { a, w } => {
                let s = 1.0 - t;
                f(a + w * t / s) * w / (s * s)
            }
            Map::Lower { a, w } => {
                let s = 1.0 - t;
                f(a - w * t / s) * w / (s * s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, map: Map, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = map.apply(f, center);

    let mut gauss = 0.0;
    let mut kron = f_center * WGK[10];
    let mut res_abs = kron.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for (j, &weight) in WG.iter().enumerate() {
        let i = 2 * j + 1;
        let dx = half * XGK[i];
        let (f1, f2) = (map.apply(f, center - dx), map.apply(f, center + dx));
        fv1[i] = f1;
        fv2[i] = f2;
        gauss += weight * (f1 + f2);
        kron += WGK[i] * (f1 + f2);
        res_abs += WGK[i] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let i = 2 * j;
        let dx = half * XGK[i];
        let (f1, f2) = (map.apply(f, center - dx), map.apply(f, center + dx));
        fv1[i] = f1;
        fv2[i] = f2;
        kron += WGK[i] * (f1 + f2);
        res_abs += WGK[i] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * kron;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for i in 0..10 {
        res_asc += WGK[i] * ((fv1[i] - mean).abs() + (fv2[i] - mean).abs());
    }

    let value = kron * half;
    let err = (kron - gauss) * half;
    let error = rescale_error(err, res_abs * half.abs(), res_asc * half.abs());
    (value, error)
}

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, pieces: &[(Map, f64, f64)], tol: Tolerance) -> Result<Estimate> {
    let mut pool: Vec<Segment> = Vec::with_capacity(pieces.len() + 64);
    for &(map, a, b) in pieces {
        let (value, error) = kronrod(f, map, a, b);
        pool.push(Segment {
            map,
            a,
            b,
            value,
            error,
        });
    }
    let mut evaluations = 21 * pool.len();

    loop {
        let value: f64 = pool.iter().map(|s| s.value).sum();
        let error: f64 = pool.iter().map(|s| s.error).sum();
        if !(value.is_finite() && error.is_finite()) {
            return Err(Error::NonConvergence {
                what: "quadrature (non-finite integrand)",
                achieved: error,
            });
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        if pool.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                what: "quadrature",
                achieved: error,
            });
        }

        let (worst, _) = pool
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = pool.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            // Interval exhausted at machine resolution; accept what we have.
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        for (a, b) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = kronrod(f, seg.map, a, b);
            pool.push(Segment {
                map: seg.map,
                a,
                b,
                value,
                error,
            });
        }
        evaluations += 42;
    }
}

/// `∫_a^b f(x) dx`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("finite interval required; use integrate_real_line"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    adapt(&mut f, &[(Map::Identity, a, b)], tol)
}

/// `∫_{-inf}^{inf} f(x) dx`, splitting at `breakpoints` (any order) and
/// mapping the tails with length scale `scale`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter {
            field: "scale",
            reason: "must be positive and finite",
        });
    }
    let mut points: Vec<f64> = breakpoints.iter().copied().filter(|x| x.is_finite()).collect();
    if points.is_empty() {
        points.push(0.0);
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();

    let mut pieces = Vec::with_capacity(points.len() + 1);
    pieces.push((Map::Lower { a: points[0], w: scale }, 0.0, 1.0));
    for pair in points.windows(2) {
        pieces.push((Map::Identity, pair[0], pair[1]));
    }
    pieces.push((
        Map::Upper {
            a: points[points.len() - 1],
            w: scale,
        },
        0.0,
        1.0,
    ));
    adapt(&mut f, &pieces, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((e.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_over_the_line() {
        let w = 0.05;
        let e = integrate_real_line(|x| w / ((x - 3.0).powi(2) + w * w), &[3.0], w, Tolerance::default()).unwrap();
        assert!((e.value - PI).abs() < 1e-10 * PI, "{}", e.value);
    }

    #[test]
    fn squared_lorentzian_pair() {
        // ∫ dx / (x^2 + a^2)^2 = pi / (2 a^3)
        let a = 0.3;
        let f = |x: f64| {
            let l = 1.0 / ((x - 1.0).powi(2) + a * a);
            let r = 1.0 / ((x + 1.0).powi(2) + a * a);
            l * l + r * r
        };
        let e = integrate_real_line(f, &[-1.0, 1.0], a, Tolerance::default()).unwrap();
        let exact = PI / (a * a * a);
        assert!((e.value - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn gaussian_over_the_line() {
        let e = integrate_real_line(|x| (-x * x).exp(), &[], 1.0, Tolerance::default()).unwrap();
        assert!((e.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}

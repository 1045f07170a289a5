//! Multi-branch complex Lambert W.
//!
//! `W_k(z)` solves `w e^w = z` on branch `k`. Branches follow the usual
//! counter-clockwise-continuous convention: the principal branch has its cut
//! on `(-inf, -1/e]`, every other branch on `(-inf, 0]`, and a point on a cut
//! belongs to the branch approached from above. A signed zero imaginary part
//! is treated as `+0`.
//!
//! A result is accepted only when it both satisfies the defining equation and
//! lies on the requested branch, checked with the unwinding identity
//! `w + Log w = Log z + 2 pi i k`.

use core::f64::consts::{E, PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;
const STEP_TOL: f64 = 1e-13;
const RESIDUAL_TOL: f64 = 1e-12;

/// `W_k(z)`.
pub fn lambert_w(k: i32, z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("lambert_w argument must be finite"));
    }
    let z = positive_zero(z);
    if z.re == 0.0 && z.im == 0.0 {
        return if k == 0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::Domain("lambert_w(0) is only defined on the principal branch"))
        };
    }
    if (k == 0 || k == -1) && z.im == 0.0 && z.re == -1.0 / E {
        return Ok(Complex64::new(-1.0, 0.0));
    }

    let mut best = f64::INFINITY;
    for seed in seeds(k, z).into_iter().flatten() {
        match halley(seed, z) {
            Ok(w) => {
                let res = residual(w, z);
                if res <= RESIDUAL_TOL * z.norm().max(1.0) && on_branch(k, w, z) {
                    return Ok(w);
                }
                best = best.min(res);
            }
            Err(res) => best = best.min(res),
        }
    }
    Err(Error::NonConvergence {
        what: "lambert_w",
        achieved: best,
    })
}

/// Principal branch.
pub fn lambert_w0(z: Complex64) -> Result<Complex64> {
    lambert_w(0, z)
}

fn positive_zero(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn residual(w: Complex64, z: Complex64) -> f64 {
    (w * w.exp() - z).norm()
}

/// Branch index implied by the unwinding identity.
fn branch_of(w: Complex64, z: Complex64) -> i64 {
    let w = positive_zero(w);
    let lhs = w + w.ln() - z.ln();
    (lhs.im / TAU).round() as i64
}

fn on_branch(k: i32, w: Complex64, z: Complex64) -> bool {
    // On [-1/e, 0) branch -1 is real with w <= -1; there the identity reads 0.
    if k == -1 && z.im == 0.0 && z.re < 0.0 && z.re >= -1.0 / E {
        return w.im.abs() <= 1e-12 && w.re <= -1.0 + 1e-6;
    }
    // On [-1/e, 0) the principal branch is real with w >= -1.
    if k == 0 && z.im == 0.0 && z.re < 0.0 && z.re >= -1.0 / E {
        return w.im.abs() <= 1e-12 && w.re >= -1.0 - 1e-6;
    }
    branch_of(w, z) == k as i64
}

fn seeds(k: i32, z: Complex64) -> [Option<Complex64>; 6] {
    let mut out = [None; 6];
    let mut i = 0;
    let mut push = |w: Complex64| {
        if i < out.len() && w.re.is_finite() && w.im.is_finite() {
            out[i] = Some(w);
            i += 1;
        }
    };

    // Branch-point series around z = -1/e.
    let q = z * E + 1.0;
    if (-1..=1).contains(&k) && q.norm() < 0.3 {
        let p = (q * 2.0).sqrt();
        let series = |p: Complex64| -> Complex64 { p * (p * (p * (11.0 / 72.0) - 1.0 / 3.0) + 1.0) - 1.0 };
        push(series(p));
        push(series(-p));
    }

    if k == 0 {
        if z.norm() < 0.5 {
            // Taylor series about the origin.
            push(z * (1.0 - z * (1.0 - z * 1.5)));
        }
        push((z + 1.0).ln());
    }

    // Asymptotic expansion with the branch offset folded into the logarithm.
    let l1 = z.ln() + Complex64::new(0.0, TAU * k as f64);
    if l1.norm() > 1e-3 {
        let l2 = l1.ln();
        push(l1 - l2 + l2 / l1);
    }

    let fallback = match k {
        0 => Complex64::new(0.5, 0.0),
        -1 => Complex64::new(-2.0, -1.0),
        _ => Complex64::new(0.0, TAU * k as f64 - PI * (k as f64).signum() * 0.5),
    };
    push(fallback);
    out
}

/// Halley iteration; `Err` carries the last residual on failure.
fn halley(mut w: Complex64, z: Complex64) -> Result<Complex64, f64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (wp1 * 2.0);
        let step = f / denom;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(residual(w, z));
        }
        w -= step;
        if step.norm() <= STEP_TOL * w.norm().max(1.0) {
            return Ok(w);
        }
    }
    let res = residual(w, z);
    if res <= RESIDUAL_TOL * z.norm().max(1.0) {
        Ok(w)
    } else {
        Err(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Real principal branch by bisection on `w e^w - x`, independent of the
    /// Halley machinery.
    fn w0_bisection(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0, 1.0f64.max(x.ln_1p() + 1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(lambert_w(0, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let w = lambert_w(0, c(E, 0.0)).unwrap();
        assert!((w - 1.0).norm() < 1e-15);
        assert_eq!(lambert_w(-1, c(-1.0 / E, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(lambert_w(0, c(-1.0 / E, 0.0)).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn omega_constant_matches_bisection() {
        let w = lambert_w0(c(1.0, 0.0)).unwrap();
        let oracle = w0_bisection(1.0);
        assert!((w.re - oracle).abs() < 1e-14, "{w} vs {oracle}");
        assert!((w.re - 0.567_143_290_409_783_8).abs() < 1e-15);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn zero_off_principal_is_a_domain_error() {
        assert!(matches!(lambert_w(3, c(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(-1, c(0.0, -0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn real_lower_branch_on_the_short_cut() {
        for &x in &[-0.3678, -0.3, -0.1, -1e-3, -1e-8] {
            let w = lambert_w(-1, c(x, 0.0)).unwrap();
            assert!(w.im.abs() < 1e-12 && w.re <= -1.0, "{x}: {w}");
            assert!((w.re * w.re.exp() - x).abs() < 1e-14);
            let w0 = lambert_w(0, c(x, 0.0)).unwrap();
            assert!(w0.im.abs() < 1e-12 && w0.re >= -1.0, "{x}: {w0}");
        }
    }

    #[test]
    fn principal_branch_on_the_negative_axis_is_upper_half() {
        let w = lambert_w(0, c(-2.0, 0.0)).unwrap();
        assert!(w.im > 0.0 && w.im < PI);
        let w_neg_zero = lambert_w(0, c(-2.0, -0.0)).unwrap();
        assert_eq!(w, w_neg_zero);
    }

    #[test]
    fn known_complex_values() {
        // W_0(i) and W_1(1) to 15 digits.
        let w = lambert_w(0, c(0.0, 1.0)).unwrap();
        assert!((w - c(0.374_699_020_737_117_5, 0.576_412_723_031_435_3)).norm() < 1e-14);
        let w = lambert_w(1, c(1.0, 0.0)).unwrap();
        assert!((w - c(-1.533_913_319_793_574_5, 4.375_185_153_061_898)).norm() < 1e-13);
    }

    #[test]
    fn near_branch_point_both_sides() {
        let z = c(-1.0 / E + 1e-9, 1e-9);
        for k in [-1, 0, 1] {
            let w = lambert_w(k, z).unwrap();
            assert!(residual(w, z) < 1e-12, "branch {k}");
        }
        assert!((lambert_w(0, z).unwrap() - lambert_w(-1, z).unwrap()).norm() < 1e-3);
    }

    proptest! {
        #[test]
        fn defining_identity(
            log_r in -3.0f64..3.0,
            arg in -PI..PI,
            k in -25i32..=25,
        ) {
            let z = Complex64::from_polar(10f64.powf(log_r), arg);
            let w = lambert_w(k, z).unwrap();
            prop_assert!(residual(w, z) <= 1e-10 * z.norm().max(1.0));
        }

        #[test]
        fn imaginary_part_in_branch_band(
            log_r in -3.0f64..3.0,
            arg in -PI..PI,
            k in 2i32..=25,
            sign in prop::bool::ANY,
        ) {
            let k = if sign { k } else { -k };
            let z = Complex64::from_polar(10f64.powf(log_r), arg);
            let w = lambert_w(k, z).unwrap();
            let centre = TAU * k as f64;
            prop_assert!((w.im - centre).abs() < TAU, "k={} w={}", k, w);
        }

        #[test]
        fn conjugate_symmetry(
            log_r in -3.0f64..3.0,
            arg in -3.1f64..3.1,
            k in 1i32..=25,
        ) {
            prop_assume!(arg.abs() > 1e-3);
            let z = Complex64::from_polar(10f64.powf(log_r), arg);
            let a = lambert_w(-k, z.conj()).unwrap();
            let b = lambert_w(k, z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
        }
    }
}

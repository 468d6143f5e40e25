//! Scaled complementary error function for complex arguments and its relatives.
//!
//! `erfcx(z) = exp(z²) erfc(z)` is the Gaussian-averaged resolvent behind the disorder
//! scattering term. For `Re z >= 0` it is evaluated as the Faddeeva function `w(iz)`;
//! the left half-plane goes through `erfcx(z) = 2 exp(z²) - erfcx(-z)`, which fails with
//! a range error once `exp(z²)` is no longer representable.

mod faddeeva;
mod real;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub(crate) const FRAC_1_SQRT_PI: f64 = 0.5 * std::f64::consts::FRAC_2_SQRT_PI;
pub(crate) const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Half-width of the square in which [`erfcx`] and [`dawson`] guarantee their accuracy.
pub const ACCURACY_ENVELOPE: f64 = 100.0;

/// Largest `Re(z²)` for which `2 exp(z²)` is still finite.
const MAX_EXP_ARG: f64 = 708.0;

/// `exp(z²) erfc(z)` for `|Re z|, |Im z| <= 100`.
///
/// Relative error stays at the 1e-13 level across the envelope, except in the immediate
/// vicinity of the zeros of `erfc` in the left half-plane where only absolute accuracy
/// is meaningful.
pub fn erfcx(z: Complex64) -> Result<Complex64> {
    if !(z.re.abs() <= ACCURACY_ENVELOPE && z.im.abs() <= ACCURACY_ENVELOPE) {
        return Err(Error::Range {
            z,
            reason: "outside the erfcx accuracy envelope |Re z|, |Im z| <= 100",
        });
    }
    erfcx_wide(z)
}

/// [`erfcx`] without the envelope check.
///
/// The continued-fraction region is accurate for arbitrarily large `|z|` in the right
/// half-plane, which the dispersion solver needs when `σ` is tiny. The only failure mode
/// is overflow of `exp(z²)` on the reflection path.
pub fn erfcx_wide(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Range {
            z,
            reason: "non-finite argument",
        });
    }
    if z.im == 0.0 {
        return erfcx_real(z.re).map(|v| Complex64::new(v, z.im));
    }
    if z.re >= 0.0 {
        Ok(faddeeva::w_upper(Complex64::new(-z.im, z.re)))
    } else {
        let e = exp_square(z)?;
        let mirrored = faddeeva::w_upper(Complex64::new(z.im, -z.re));
        Ok(2.0 * e - mirrored)
    }
}

/// Real-argument `erfcx`; range error once `exp(x²)` overflows for negative `x`.
pub fn erfcx_real(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Range {
            z: Complex64::new(x, 0.0),
            reason: "non-finite argument",
        });
    }
    if x >= 0.0 {
        Ok(real::erfcx_nonneg(x))
    } else if x * x > MAX_EXP_ARG {
        Err(Error::Range {
            z: Complex64::new(x, 0.0),
            reason: "exp(x²) overflows on the reflection path",
        })
    } else {
        Ok(2.0 * real::exp_signed_square(x, 1.0) - real::erfcx_nonneg(-x))
    }
}

/// `exp(z²)`, with the rounding errors of `z²` carried into the exponential.
fn exp_square(z: Complex64) -> Result<Complex64> {
    let (x, y) = (z.re, z.im);
    let xx = x * x;
    let yy = y * y;
    let re = xx - yy;
    if re > MAX_EXP_ARG {
        return Err(Error::Range {
            z,
            reason: "exp(z²) overflows on the reflection path",
        });
    }
    let re_lo = (x.mul_add(x, -xx) - y.mul_add(y, -yy)) + ((xx - re) - yy);
    let im = 2.0 * x * y;
    let im_lo = (2.0 * x).mul_add(y, -im);
    let m = re.exp() * (1.0 + re_lo);
    let (s, c) = im.sin_cos();
    Ok(Complex64::new(m * (c - s * im_lo), m * (s + c * im_lo)))
}

/// `erfcx(z)` together with `d/dz erfcx(z) = 2z erfcx(z) - 2/√π`.
///
/// For `|z| >= 12` the derivative is summed from its asymptotic series instead, since
/// the direct formula loses about `2 log10|z|` digits to cancellation.
pub fn erfcx_with_derivative(z: Complex64) -> Result<(Complex64, Complex64)> {
    let value = erfcx_wide(z)?;
    let derivative = if z.norm() >= 12.0 {
        if z.re < 0.0 {
            // erfcx'(z) = 4z exp(z²) + erfcx'(-z)
            4.0 * z * exp_square(z)? + asymptotic_derivative(-z)
        } else {
            asymptotic_derivative(z)
        }
    } else {
        2.0 * z * value - FRAC_2_SQRT_PI
    };
    Ok((value, derivative))
}

/// `(2/√π) Σ_{k>=1} (-1)^k (2k-1)!! / (2z²)^k`, valid for `Re z >= 0`, `|z| >= 12`.
fn asymptotic_derivative(z: Complex64) -> Complex64 {
    let inv = 1.0 / (2.0 * z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        term *= -(2.0 * k as f64 - 1.0) * inv;
        sum += term;
        if term.norm() < 0.25 * f64::EPSILON * sum.norm() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Dawson's integral `D(x) = (√π/2) exp(-x²) erfi(x)`, `|x| <= 100`.
pub fn dawson(x: f64) -> Result<f64> {
    if !(x.abs() <= ACCURACY_ENVELOPE) {
        return Err(Error::Range {
            z: Complex64::new(x, 0.0),
            reason: "outside the dawson accuracy envelope |x| <= 100",
        });
    }
    Ok(real::dawson_unchecked(x))
}

/// Truncated large-`|z|` expansion
/// `erfcx(z) ≈ 1/(z√π) Σ_{k<n} (-1)^k (2k-1)!! / (2z²)^k`.
///
/// The truncation error is `O(|z|^-(2n+1))`. Only defined for `|z| >= 5`,
/// `1 <= n_terms <= 4` and `|arg z| < 3π/4`.
pub fn erfcx_asymptotic(z: Complex64, n_terms: usize) -> Result<Complex64> {
    if !(1..=4).contains(&n_terms) {
        return Err(Error::Domain(format!(
            "asymptotic erfcx takes 1..=4 terms, got {n_terms}"
        )));
    }
    if !(z.norm() >= 5.0) {
        return Err(Error::Domain(format!(
            "asymptotic erfcx needs |z| >= 5, got |z| = {}",
            z.norm()
        )));
    }
    if !(z.arg().abs() < 0.75 * PI) {
        return Err(Error::Domain(format!(
            "asymptotic erfcx needs |arg z| < 3π/4, got {}",
            z.arg()
        )));
    }
    let inv = 1.0 / (2.0 * z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..n_terms {
        term *= -(2.0 * k as f64 - 1.0) * inv;
        sum += term;
    }
    Ok(sum / (z * (FRAC_1_SQRT_PI.recip())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn erfcx_at_origin_is_one() {
        assert_eq!(erfcx(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn erfcx_matches_two_term_expansion_at_fifty() {
        let x = 50.0;
        let truncated = 1.0 / (x * PI.sqrt()) * (1.0 - 1.0 / (2.0 * x * x));
        let v = erfcx(c(x, 0.0)).unwrap().re;
        // the first neglected term, 3/(4x⁴) relative, bounds the gap
        assert!((v - truncated).abs() <= 1e-8);
        let next = 3.0 / (4.0 * x.powi(4)) / (x * PI.sqrt());
        assert!(((v - truncated) - next).abs() <= 1e-3 * next);
    }

    #[test]
    fn erfcx_rejects_outside_envelope() {
        assert!(matches!(erfcx(c(100.5, 0.0)), Err(Error::Range { .. })));
        assert!(matches!(erfcx(c(0.0, -101.0)), Err(Error::Range { .. })));
        assert!(matches!(erfcx(c(f64::NAN, 0.0)), Err(Error::Range { .. })));
        // inside the envelope but exp(z²) is not representable
        assert!(matches!(erfcx(c(-30.0, 1.0)), Err(Error::Range { .. })));
        assert!(erfcx_wide(c(1e6, -3e5)).is_ok());
    }

    #[test]
    fn erfcx_real_axis_is_positive_and_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=10_000 {
            let x = i as f64 * 0.01;
            let v = erfcx(c(x, 0.0)).unwrap();
            assert_eq!(v.im, 0.0);
            assert!(v.re > 0.0 && v.re < prev, "x = {x}");
            prev = v.re;
        }
    }

    #[test]
    fn dawson_is_odd_and_zero_at_origin() {
        assert_eq!(dawson(0.0).unwrap(), 0.0);
        for i in 0..200 {
            let x = i as f64 * 0.05;
            assert_eq!(dawson(-x).unwrap(), -dawson(x).unwrap());
        }
        assert!(dawson(100.5).is_err());
    }

    #[test]
    fn dawson_matches_imaginary_axis_erfcx() {
        // erfcx(-ix) = exp(-x²) + (2i/√π) D(x)
        for &x in &[0.7, 0.05, 1.5, 3.0, 6.5, 7.5, 12.0, 30.0] {
            let w = erfcx(c(0.0, -x)).unwrap();
            let d = dawson(x).unwrap();
            let from_erfcx = w.im / FRAC_2_SQRT_PI;
            assert!((from_erfcx - d).abs() <= 1e-12 * d.abs(), "x = {x}");
            assert!((w.re - (-x * x).exp()).abs() <= 1e-12 * w.norm());
        }
    }

    #[test]
    fn asymptotic_first_term() {
        let v = erfcx_asymptotic(c(10.0, 0.0), 1).unwrap();
        assert!((v.re - 0.056_418_958_354_775_63).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn asymptotic_improves_with_terms() {
        let z = c(6.0, 0.5);
        let exact = erfcx(z).unwrap();
        let errs: Vec<f64> = (1..=4)
            .map(|n| rel(erfcx_asymptotic(z, n).unwrap(), exact))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn asymptotic_at_eight() {
        // two terms leave the 3/(4·8⁴) ≈ 1.8e-4 correction behind
        let exact = erfcx(c(8.0, 0.0)).unwrap();
        let e2 = rel(erfcx_asymptotic(c(8.0, 0.0), 2).unwrap(), exact);
        assert!(e2 > 1.5e-4 && e2 < 2e-4, "{e2}");
        let e4 = rel(erfcx_asymptotic(c(8.0, 0.0), 4).unwrap(), exact);
        assert!(e4 <= 1e-5, "{e4}");
    }

    #[test]
    fn asymptotic_domain_errors() {
        assert!(erfcx_asymptotic(c(4.0, 0.0), 2).is_err());
        assert!(erfcx_asymptotic(c(10.0, 0.0), 0).is_err());
        assert!(erfcx_asymptotic(c(10.0, 0.0), 5).is_err());
        assert!(erfcx_asymptotic(c(-10.0, 1.0), 2).is_err());
        assert!(erfcx_asymptotic(c(-5.0, 6.0), 2).is_ok());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        for &z in &[
            c(0.3, 0.2),
            c(-2.0, 3.0),
            c(5.0, -4.0),
            c(15.0, 2.0),
            c(-0.5, 20.0),
        ] {
            let (_, d) = erfcx_with_derivative(z).unwrap();
            let fd = (erfcx_wide(z + h).unwrap() - erfcx_wide(z - h).unwrap()) / (2.0 * h);
            assert!(
                (d - fd).norm() <= 1e-7 * d.norm().max(1e-3),
                "z = {z}: {d} vs {fd}"
            );
        }
    }

    #[test]
    fn derivative_far_from_origin_keeps_precision() {
        // 2z erfcx(z) - 2/√π ≈ -1/(√π z²) for huge |z|
        let z = c(-1e-9, -2e5);
        let (_, d) = erfcx_with_derivative(z).unwrap();
        let lead = -1.0 / (PI.sqrt() * z * z);
        assert!(rel(d, lead) < 1e-9);
    }
}

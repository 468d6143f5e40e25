//! Reference `erfcx` built from paths that share nothing with the production kernel.
//!
//! * `|z| <= 4`: Maclaurin series of `exp(z²)` and `exp(z²) erf(z)` in double-double,
//!   so the cancellation in their difference costs nothing visible.
//! * `Re z > 0`: the defining integral along the steepest-descent path `t = √(z² + u)`,
//!   `erfcx(z) = (1/√π) ∫₀^∞ e^{-u} / √(z² + u) du`, by adaptive Gauss–Kronrod.
//! * `Re z = 0`: `erfcx(iy) = e^{-y²} (1 - i erfi(y))`, with `erfi` from its all-positive
//!   series in double-double.
//! * `Re z < 0`: reflection through `2 exp(z²)` with an exactly formed exponent.

use num_complex::Complex64;
use std::f64::consts::FRAC_2_SQRT_PI;

use super::dd::{Cdd, Dd};
use super::quadrature::integrate;
use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: Dd = Dd::new(FRAC_2_SQRT_PI, 1.533_545_961_316_588e-17);
const FRAC_1_SQRT_PI: Dd = Dd::new(0.5 * FRAC_2_SQRT_PI, 7.667_729_806_582_94e-18);

/// Largest `|z|` accepted by [`erfcx_reference`].
pub const REFERENCE_RADIUS: f64 = 15.0;

/// Slow, independent evaluation of `exp(z²) erfc(z)` for `|z| <= 15`.
pub fn erfcx_reference(z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= REFERENCE_RADIUS) {
        return Err(Error::Range {
            z,
            reason: "reference erfcx is limited to |z| <= 15",
        });
    }
    if z.norm() <= 4.0 {
        return Ok(maclaurin(z));
    }
    if z.re > 0.0 {
        laplace(z)
    } else if z.re == 0.0 {
        Ok(imaginary_axis(z.im))
    } else {
        let e = exp_of_square(z).ok_or(Error::Range {
            z,
            reason: "exp(z²) overflows on the reflection path",
        })?;
        Ok(2.0 * e - laplace(-z)?)
    }
}

/// `Σ z^{2k}/k! - (2/√π) Σ 2^k z^{2k+1} / (2k+1)!!`.
fn maclaurin(z: Complex64) -> Complex64 {
    let zz = Cdd::from_parts(z.re, z.im);
    let z2 = zz * zz;
    let mut e_term = Cdd::from_parts(1.0, 0.0);
    let mut e_sum = e_term;
    let mut o_term = zz;
    let mut o_sum = o_term;
    let mut k = 1.0;
    loop {
        e_term = (e_term * z2).div_f64(k);
        o_term = (o_term * z2).div_f64(k + 0.5);
        e_sum = e_sum + e_term;
        o_sum = o_sum + o_term;
        if e_term.l1() + o_term.l1() < 1e-34 * (e_sum.l1() + o_sum.l1()) && k > 2.0 {
            break;
        }
        k += 1.0;
    }
    (e_sum - o_sum.scale(TWO_OVER_SQRT_PI)).to_c64()
}

fn laplace(z: Complex64) -> Result<Complex64> {
    let z2 = z * z;
    let g = |u: f64| (-u).exp() / (z2 + u).sqrt();
    // beyond u = 60 the integrand is below e^{-60} of its value at the origin
    let upper = 60.0;
    let turn = -z2.re;
    let tol = 1e-14;
    let value = if turn > 0.0 && turn < upper {
        // the integrand peaks in modulus where z² + u is smallest; u = turn ∓ s² makes it smooth
        let left = integrate(
            |s| g(turn - s * s) * (2.0 * s),
            0.0,
            turn.sqrt(),
            0.0,
            tol,
            4000,
        )?;
        let right = integrate(
            |s| g(turn + s * s) * (2.0 * s),
            0.0,
            (upper - turn).sqrt(),
            0.0,
            tol,
            4000,
        )?;
        left.value + right.value
    } else {
        integrate(g, 0.0, upper, 0.0, tol, 4000)?.value
    };
    Ok(value * FRAC_1_SQRT_PI.to_f64())
}

fn imaginary_axis(y: f64) -> Complex64 {
    let ay = y.abs();
    let y2 = Dd::prod(ay, ay);
    let mut power = Dd::from_f64(ay);
    let mut sum = power;
    let mut k = 1.0;
    loop {
        power = (power * y2).div_f64(k);
        let term = power.div_f64(2.0 * k + 1.0);
        sum = sum + term;
        if term.hi < 1e-34 * sum.hi {
            break;
        }
        k += 1.0;
    }
    let decay = (-y2.hi).exp() * (1.0 - y2.lo);
    let erfi_scaled = (sum * TWO_OVER_SQRT_PI).to_f64() * decay;
    Complex64::new(decay, -erfi_scaled.copysign(y))
}

/// `exp(z²)` with `z²` formed exactly, so only the final libm roundings remain.
fn exp_of_square(z: Complex64) -> Option<Complex64> {
    let re = Dd::prod(z.re, z.re) - Dd::prod(z.im, z.im);
    let im = Dd::prod(z.re, z.im).scale(2.0);
    if re.hi > 709.0 {
        return None;
    }
    let m = re.hi.exp() * (1.0 + re.lo);
    let (s, c) = im.hi.sin_cos();
    let cos = c - s * im.lo;
    let sin = s + c * im.lo;
    let v = Complex64::new(m * cos, m * sin);
    (v.re.is_finite() && v.im.is_finite()).then_some(v)
}

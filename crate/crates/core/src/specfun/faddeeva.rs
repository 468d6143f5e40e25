//! Faddeeva function `w(z) = exp(-z²) erfc(-iz)` on the closed upper half-plane.
//!
//! Three regions, chosen so that every path reaches close to binary64 precision:
//!
//! * large `|z|`: Laplace continued fraction, depth fitted to the distance from the
//!   real axis;
//! * moderate `|z|`: exponentially convergent sums over a trapezoidal discretisation of
//!   the Fourier representation of `w` (Zaghloul & Ali, ACM TOMS 38(2), 2011);
//! * a narrow strip hugging the real axis for `10 <= |x| <= 28`, where only the terms
//!   centred on `x / a` survive.
//!
//! Callers reach the lower half-plane through the reflection identity, so nothing here
//! handles `Im z < 0`.

use num_complex::Complex64;
use std::sync::LazyLock;

use super::real::erfcx_nonneg;
use super::FRAC_1_SQRT_PI;

// Sum parameter a = pi / sqrt(-ln(eps / 2)); c = 2a / pi.
const A: f64 = 0.518_321_480_430_085_929_872;
const C: f64 = 0.329_973_702_884_629_072_537;
const A2: f64 = 0.268_657_157_075_235_951_582;

const EPS: f64 = f64::EPSILON;

static EXP_A2N2: LazyLock<[f64; 64]> = LazyLock::new(|| {
    let mut table = [0.0; 64];
    for (i, v) in table.iter_mut().enumerate() {
        let n = (i + 1) as f64;
        *v = (-A2 * n * n).exp();
    }
    table
});

fn exp_a2n2(n: usize) -> f64 {
    match EXP_A2N2.get(n - 1) {
        Some(v) => *v,
        None => {
            let nf = n as f64;
            (-A2 * nf * nf).exp()
        }
    }
}

/// `sin(x) / x`, given `sin(x)`.
fn sinc(x: f64, sin_x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        sin_x / x
    }
}

fn sinh_taylor(x: f64) -> f64 {
    let x2 = x * x;
    x * (1.0 + x2 * (1.0 / 6.0 + x2 / 120.0))
}

/// `w(z)` for `z.im >= 0`.
pub(crate) fn w_upper(z: Complex64) -> Complex64 {
    let xs = z.re;
    let y = z.im;
    debug_assert!(y >= 0.0, "w_upper called below the real axis");
    let x = xs.abs();

    if xs == 0.0 {
        return Complex64::new(erfcx_nonneg(y), xs);
    }
    if y > 7.0 || (x > 6.0 && (y > 0.1 || (x > 8.0 && y > 1e-10) || x > 28.0)) {
        continued_fraction(xs, y)
    } else if x < 10.0 {
        moderate(xs, y)
    } else {
        near_real_axis(xs, y)
    }
}

fn continued_fraction(xs: f64, y: f64) -> Complex64 {
    let x = xs.abs();
    if x + y > 4000.0 {
        if x + y > 1e7 {
            // one term: i / (sqrt(pi) z), scaled against overflow
            if x > y {
                let yax = y / xs;
                let denom = FRAC_1_SQRT_PI / (xs + yax * y);
                Complex64::new(denom * yax, denom)
            } else {
                let xya = xs / y;
                let denom = FRAC_1_SQRT_PI / (xya * xs + y);
                Complex64::new(denom, denom * xya)
            }
        } else {
            // two terms: i z / (sqrt(pi) (z² - 1/2))
            let dr = xs * xs - y * y - 0.5;
            let di = 2.0 * xs * y;
            let denom = FRAC_1_SQRT_PI / (dr * dr + di * di);
            Complex64::new(denom * (xs * di - y * dr), denom * (xs * dr + y * di))
        }
    } else {
        let depth = (3.9 + 11.398 / (0.08254 * x + 0.1421 * y + 0.2023)).floor();
        let mut wr = xs;
        let mut wi = y;
        let mut nu = 0.5 * (depth - 1.0);
        while nu > 0.4 {
            // w <- z - nu / w
            let denom = nu / (wr * wr + wi * wi);
            wr = xs - wr * denom;
            wi = y + wi * denom;
            nu -= 0.5;
        }
        let denom = FRAC_1_SQRT_PI / (wr * wr + wi * wi);
        Complex64::new(denom * wi, denom * wr)
    }
}

fn moderate(xs: f64, y: f64) -> Complex64 {
    let x = xs.abs();
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    let mut sum3 = 0.0;
    let mut sum4 = 0.0;
    let mut sum5 = 0.0;
    let mut prod2ax = 1.0;
    let mut prodm2ax = 1.0;
    let y2 = y * y;

    let expx2 = if x < 5e-4 {
        // sum5 - sum4 accumulated directly through sinh to avoid cancellation
        let x2 = x * x;
        let expx2 = 1.0 - x2 * (1.0 - 0.5 * x2);
        let ax2 = 2.0 * A * x;
        let exp2ax = 1.0 + ax2 * (1.0 + ax2 * (0.5 + ax2 / 6.0));
        let expm2ax = 1.0 - ax2 * (1.0 - ax2 * (0.5 - ax2 / 6.0));
        let mut n = 1usize;
        loop {
            let nf = n as f64;
            let coef = exp_a2n2(n) * expx2 / (A2 * nf * nf + y2);
            prod2ax *= exp2ax;
            prodm2ax *= expm2ax;
            sum1 += coef;
            sum2 += coef * prodm2ax;
            sum3 += coef * prod2ax;
            sum5 += coef * (2.0 * A) * nf * sinh_taylor(2.0 * A * nf * x);
            if coef * prod2ax < EPS * sum3 {
                break;
            }
            n += 1;
        }
        expx2
    } else {
        let expx2 = (-x * x).exp();
        let exp2ax = (2.0 * A * x).exp();
        let expm2ax = 1.0 / exp2ax;
        let mut n = 1usize;
        loop {
            let nf = n as f64;
            let coef = exp_a2n2(n) * expx2 / (A2 * nf * nf + y2);
            prod2ax *= exp2ax;
            prodm2ax *= expm2ax;
            sum1 += coef;
            sum2 += coef * prodm2ax;
            sum4 += coef * prodm2ax * (A * nf);
            sum3 += coef * prod2ax;
            sum5 += coef * prod2ax * (A * nf);
            // sum5 decays slowest
            if coef * prod2ax * (A * nf) < EPS * sum5 {
                break;
            }
            n += 1;
        }
        expx2
    };

    let expx2_erfcxy = expx2 * erfcx_nonneg(y);
    let base = if y > 5.0 {
        // the imaginary contributions of these terms cancel against the sums
        let sinxy = (x * y).sin();
        Complex64::new(
            (expx2_erfcxy - C * y * sum1) * (2.0 * x * y).cos()
                + (C * x * expx2) * sinxy * sinc(x * y, sinxy),
            0.0,
        )
    } else {
        let sinxy = (xs * y).sin();
        let sin2xy = (2.0 * xs * y).sin();
        let cos2xy = (2.0 * xs * y).cos();
        let coef1 = expx2_erfcxy - C * y * sum1;
        let coef2 = C * xs * expx2;
        Complex64::new(
            coef1 * cos2xy + coef2 * sinxy * sinc(xs * y, sinxy),
            coef2 * sinc(2.0 * xs * y, sin2xy) - coef1 * sin2xy,
        )
    };
    base + Complex64::new(
        0.5 * C * y * (sum2 + sum3),
        0.5 * C * (sum5 - sum4).copysign(xs),
    )
}

/// `10 <= |x| <= 28` and `y <= 1e-10`: only sum3 and sum5 contribute, summed outward
/// from the dominant index `n0 ≈ |x| / a`.
fn near_real_axis(xs: f64, y: f64) -> Complex64 {
    let x = xs.abs();
    let y2 = y * y;
    let n0 = (x / A + 0.5).floor();
    let dx = A * n0 - x;
    let mut sum3 = (-dx * dx).exp() / (A2 * n0 * n0 + y2);
    let mut sum5 = A * n0 * sum3;
    let exp1 = (4.0 * A * dx).exp();
    let mut exp1dn = 1.0;
    let mut dn = 1.0;
    let mut converged = false;
    while n0 - dn > 0.0 {
        let np = n0 + dn;
        let nm = n0 - dn;
        let mut tp = (-(A * dn + dx).powi(2)).exp();
        exp1dn *= exp1;
        let mut tm = tp * exp1dn;
        tp /= A2 * np * np + y2;
        tm /= A2 * nm * nm + y2;
        sum3 += tp + tm;
        sum5 += A * (np * tp + nm * tm);
        if A * (np * tp + nm * tm) < EPS * sum5 {
            converged = true;
            break;
        }
        dn += 1.0;
    }
    if !converged {
        loop {
            let np = n0 + dn;
            let tp = (-(A * dn + dx).powi(2)).exp() / (A2 * np * np + y2);
            sum3 += tp;
            sum5 += A * np * tp;
            if A * np * tp < EPS * sum5 {
                break;
            }
            dn += 1.0;
        }
    }
    Complex64::new(
        (-x * x).exp() + 0.5 * C * y * sum3,
        (0.5 * C * sum5).copysign(xs),
    )
}

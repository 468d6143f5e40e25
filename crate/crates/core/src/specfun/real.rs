//! Real-axis kernels: `erfcx(x)` for `x >= 0` and Dawson's integral.

use super::FRAC_1_SQRT_PI;

/// `exp(±x²)` with the rounding error of `x²` folded back in.
pub(crate) fn exp_signed_square(x: f64, sign: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (sign * hi).exp() * (1.0 + sign * lo)
}

/// Scaled complementary error function for `x >= 0`.
pub(crate) fn erfcx_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 12.0 {
        exp_signed_square(x, 1.0) * libm::erfc(x)
    } else {
        // asymptotic series; the smallest term sits near k = x², far past double precision
        let inv = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= -(2.0 * k - 1.0) * inv;
            sum += term;
            if term.abs() < 0.25 * f64::EPSILON * sum.abs() {
                break;
            }
            k += 1.0;
        }
        FRAC_1_SQRT_PI / x * sum
    }
}

/// Dawson's integral `D(x) = exp(-x²) ∫₀ˣ exp(t²) dt` for `|x|` up to the caller's limit.
pub(crate) fn dawson_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return x;
    }
    let d = if ax < 7.0 {
        // exp(-x²) Σ x^(2k+1) / (k! (2k+1)): every term positive
        let x2 = ax * ax;
        let mut power = ax;
        let mut sum = ax;
        let mut k = 1.0;
        loop {
            power *= x2 / k;
            let term = power / (2.0 * k + 1.0);
            sum += term;
            if term < 0.25 * f64::EPSILON * sum {
                break;
            }
            k += 1.0;
        }
        exp_signed_square(ax, -1.0) * sum
    } else {
        // 1/(2x) Σ (2k-1)!! / (2x²)^k
        let inv = 1.0 / (2.0 * ax * ax);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= (2.0 * k - 1.0) * inv;
            sum += term;
            if term < 0.25 * f64::EPSILON * sum {
                break;
            }
            k += 1.0;
        }
        sum / (2.0 * ax)
    };
    d.copysign(x)
}

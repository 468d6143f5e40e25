use num_complex::Complex64;

use crate::error::Result;
use crate::model::SystemConfig;
use crate::solver::{residual, residual_derivative};

/// `|df(E) - central difference| / max(1, |df(E)|)`, worst of the real and
/// imaginary step directions.
pub fn fd_discrepancy<F, D>(f: F, df: D, e: Complex64, h: f64) -> f64
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let analytic = df(e);
    let scale = analytic.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for step in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
        // difference against the representable displacement, not the nominal one
        let fwd = e + step;
        let bwd = e - step;
        let fd = (f(fwd) - f(bwd)) / (fwd - bwd);
        worst = worst.max((analytic - fd).norm() / scale);
    }
    worst
}

/// [`fd_discrepancy`] applied to the dispersion residual.
pub fn fd_derivative_check(e: Complex64, q: f64, cfg: &SystemConfig, h: f64) -> Result<f64> {
    // surface errors before the closures swallow them
    residual(e, q, cfg)?;
    residual_derivative(e, q, cfg)?;
    let f = |x| residual(x, q, cfg).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let df = |x| residual_derivative(x, q, cfg).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Ok(fd_discrepancy(f, df, e, h))
}

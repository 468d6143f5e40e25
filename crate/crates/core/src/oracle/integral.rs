use num_complex::Complex64;
use std::f64::consts::PI;

use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::model::{GaussianDisorder, SystemConfig};

/// Quadrature controls for the effective-medium integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// eV
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Half-width of the integration window in units of σ.
    pub window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 4000,
            window: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if !(self.window >= 8.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature window must be at least 8σ, got {}",
                self.window
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Exciton energy distribution for the brute-force integral.
pub trait Density: Sync {
    /// Density in 1/eV at real energy `e`.
    fn density(&self, e: f64) -> f64;
    /// Centre of the integration window, eV.
    fn center(&self) -> f64;
    /// Width unit of the integration window, eV.
    fn width(&self) -> f64;
    /// Analytic continuation of the density off the real axis, when one exists.
    fn continued(&self, _e: Complex64) -> Option<Complex64> {
        None
    }
}

impl Density for GaussianDisorder {
    fn density(&self, e: f64) -> f64 {
        let u = (e - self.e_m()) / self.sigma();
        (-u * u).exp() / (self.sigma() * PI.sqrt())
    }

    fn center(&self) -> f64 {
        self.e_m()
    }

    fn width(&self) -> f64 {
        self.sigma()
    }

    fn continued(&self, e: Complex64) -> Option<Complex64> {
        let u = (e - self.e_m()) / self.sigma();
        Some((-u * u).exp() / (self.sigma() * PI.sqrt()))
    }
}

/// `(Ω²/4) ∫ ρ(E′) / (E - E′) dE′` over `center ± window·width`, by adaptive
/// Gauss–Kronrod with a breakpoint under the pole and the pole's own contribution
/// integrated in closed form.
///
/// This is the plain Cauchy integral: it is conjugation-symmetric and jumps by
/// `-iπ(Ω²/2)ρ` across the real axis.
pub fn cauchy_integral(
    e: Complex64,
    omega_r: f64,
    rho: &dyn Density,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.validate()?;
    if e.im == 0.0 {
        return Err(Error::Domain(
            "the pole must lie off the real axis (Im E ≠ 0)".into(),
        ));
    }
    if !(rho.width() > 0.0) {
        return Err(Error::DegenerateDisorder);
    }
    let lo = rho.center() - spec.window * rho.width();
    let hi = rho.center() + spec.window * rho.width();
    // subtract the pole so the integrand stays bounded near Re E; E - x keeps a fixed
    // nonzero imaginary part, so the logarithms never meet their cut
    let anchor = rho.density(e.re);
    let f = |x: f64| (rho.density(x) - anchor) / (e - x);
    let mut pieces = vec![lo];
    if e.re > lo && e.re < hi {
        pieces.push(e.re);
    }
    pieces.push(hi);
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for w in pieces.windows(2) {
        let part = integrate(
            f,
            w[0],
            w[1],
            0.5 * spec.abs_tol,
            spec.rel_tol,
            spec.max_subdivisions,
        )?;
        total += part.value;
        error += part.error;
    }
    total += anchor * ((e - lo).ln() - (e - hi).ln());
    let target = spec.abs_tol.max(spec.rel_tol * total.norm());
    if error > target {
        return Err(Error::ToleranceNotMet {
            estimate: error,
            requested: target,
        });
    }
    Ok(0.25 * omega_r * omega_r * total)
}

/// Effective-medium scattering term on the sheet that holds the decaying roots.
///
/// For `Im E > 0` this is the Cauchy integral itself; for `Im E < 0` it is continued
/// from above by adding the residue term `-iπ(Ω²/2)ρ(E)`, which requires a density
/// with an analytic continuation.
pub fn effective_medium_term(
    e: Complex64,
    omega_r: f64,
    rho: &dyn Density,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let raw = cauchy_integral(e, omega_r, rho, spec)?;
    if e.im > 0.0 {
        return Ok(raw);
    }
    let rho_e = rho.continued(e).ok_or_else(|| {
        Error::Domain("density has no analytic continuation below the real axis".into())
    })?;
    Ok(raw - Complex64::new(0.0, PI * 0.5 * omega_r * omega_r) * rho_e)
}

/// Brute-force right-hand side of the dispersion relation for a system.
pub fn integral_rhs(
    e: Complex64,
    _q: f64,
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if cfg.disorder().is_degenerate() {
        return Err(Error::DegenerateDisorder);
    }
    effective_medium_term(e, cfg.omega_r(), cfg.disorder(), spec)
}

/// [`cauchy_integral`] for a system's Gaussian disorder.
pub fn raw_integral_rhs(
    e: Complex64,
    cfg: &SystemConfig,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if cfg.disorder().is_degenerate() {
        return Err(Error::DegenerateDisorder);
    }
    cauchy_integral(e, cfg.omega_r(), cfg.disorder(), spec)
}

/// `∫ ρ dE` over the quadrature window.
pub fn density_mass(rho: &dyn Density, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let lo = rho.center() - spec.window * rho.width();
    let hi = rho.center() + spec.window * rho.width();
    let r = integrate(
        |x| Complex64::new(rho.density(x), 0.0),
        lo,
        hi,
        spec.abs_tol,
        spec.rel_tol,
        spec.max_subdivisions,
    )?;
    Ok(r.value.re)
}

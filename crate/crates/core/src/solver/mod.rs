//! Complex roots of the disorder-averaged dispersion relation
//!
//! `F(E) = E - E_C(q) - (Ω_R²√π / 4iσ) erfcx(-i(E - E_M)/σ) = 0`
//!
//! by damped Newton iteration with the analytic derivative, continued along a q grid.
//! Below the real axis `erfcx` is taken through its reflection identity, which is the
//! analytic continuation of the scattering term onto the sheet holding decaying modes.

mod branch;

pub use branch::{solve_branch, solve_branch_with, BranchSolution};

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::specfun::{erfcx_wide, erfcx_with_derivative};

/// Lower or upper polariton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    LP,
    UP,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::LP, Branch::UP];

    pub fn other(self) -> Branch {
        match self {
            Branch::LP => Branch::UP,
            Branch::UP => Branch::LP,
        }
    }

    /// `-1` for LP, `+1` for UP.
    pub fn sign(self) -> f64 {
        match self {
            Branch::LP => -1.0,
            Branch::UP => 1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::LP => "LP",
            Branch::UP => "UP",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LP" => Ok(Branch::LP),
            "UP" => Ok(Branch::UP),
            _ => Err(Error::InvalidParameter(format!(
                "branch must be LP or UP, got {s:?}"
            ))),
        }
    }
}

/// Newton controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Residual norm accepted as a root, eV.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings tried when a full step increases the residual.
    pub max_halvings: usize,
    /// Extra undamped steps after convergence to settle the last bits.
    pub polish_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            max_halvings: 8,
            polish_steps: 3,
        }
    }
}

/// Result of a successful Newton run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    pub energy: Complex64,
    pub iterations: usize,
    pub residual_norm: f64,
}

fn require_disorder(cfg: &SystemConfig) -> Result<f64> {
    let sigma = cfg.sigma();
    if sigma == 0.0 {
        Err(Error::DegenerateDisorder)
    } else {
        Ok(sigma)
    }
}

fn scaled_argument(e: Complex64, cfg: &SystemConfig, sigma: f64) -> Complex64 {
    // -i (E - E_M) / σ
    let d = e - cfg.e_m();
    Complex64::new(d.im / sigma, -d.re / sigma)
}

/// Disorder-averaged scattering term `(Ω_R²√π / 4iσ) erfcx(-i(E - E_M)/σ)` in eV.
pub fn scattering_term(e: Complex64, cfg: &SystemConfig) -> Result<Complex64> {
    let sigma = require_disorder(cfg)?;
    let w = erfcx_wide(scaled_argument(e, cfg, sigma))?;
    let k = cfg.omega_r() * cfg.omega_r() * PI.sqrt() / (4.0 * sigma);
    // k / i = -i k
    Ok(Complex64::new(k * w.im, -k * w.re))
}

/// `F(E)` in eV; its roots are the renormalized polariton energies.
pub fn residual(e: Complex64, q: f64, cfg: &SystemConfig) -> Result<Complex64> {
    let s = scattering_term(e, cfg)?;
    let e_c = cfg.photon_energy(q)?;
    Ok(e - e_c - s)
}

/// `dF/dE = 1 + (Ω_R²√π / 4σ²) erfcx'(z)`.
pub fn residual_derivative(e: Complex64, _q: f64, cfg: &SystemConfig) -> Result<Complex64> {
    let sigma = require_disorder(cfg)?;
    let (_, dw) = erfcx_with_derivative(scaled_argument(e, cfg, sigma))?;
    let k = cfg.omega_r() * cfg.omega_r() * PI.sqrt() / (4.0 * sigma * sigma);
    Ok(1.0 + k * dw)
}

/// Damped Newton iteration from `e0` until `|F(E)| <= tol`.
pub fn newton_root(
    e0: Complex64,
    q: f64,
    cfg: &SystemConfig,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonReport> {
    let opts = SolverOptions {
        tol,
        max_iter,
        ..SolverOptions::default()
    };
    newton_with(e0, q, cfg, &opts)
}

pub(crate) fn newton_with(
    e0: Complex64,
    q: f64,
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> Result<NewtonReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    let mut e = e0;
    let mut f = residual(e, q, cfg)?;
    let mut norm = f.norm();
    if norm <= opts.tol {
        return Ok(NewtonReport {
            energy: e,
            iterations: 0,
            residual_norm: norm,
        });
    }
    let mut best = (e, norm);
    for it in 1..=opts.max_iter {
        let d = residual_derivative(e, q, cfg)?;
        let mut step = f / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let mut trial = e - step;
        let mut ft = residual(trial, q, cfg).ok();
        let mut halvings = 0;
        while halvings < opts.max_halvings && ft.is_none_or(|v| !(v.norm() <= norm)) {
            step *= 0.5;
            trial = e - step;
            ft = residual(trial, q, cfg).ok();
            halvings += 1;
        }
        let Some(ft) = ft else { break };
        e = trial;
        f = ft;
        norm = f.norm();
        if norm < best.1 {
            best = (e, norm);
        }
        if norm <= opts.tol {
            return Ok(NewtonReport {
                energy: e,
                iterations: it,
                residual_norm: norm,
            });
        }
    }
    Err(Error::NonConvergence {
        best: best.0,
        residual: best.1,
        iterations: opts.max_iter,
    })
}

/// Undamped Newton steps that are kept only while the residual does not grow.
pub(crate) fn polish(
    report: NewtonReport,
    q: f64,
    cfg: &SystemConfig,
    steps: usize,
) -> NewtonReport {
    let mut best = report;
    for _ in 0..steps {
        let Ok(d) = residual_derivative(best.energy, q, cfg) else {
            break;
        };
        let Ok(f) = residual(best.energy, q, cfg) else {
            break;
        };
        let next = best.energy - f / d;
        let Ok(fn_) = residual(next, q, cfg) else {
            break;
        };
        if fn_.norm() > best.residual_norm || next == best.energy {
            break;
        }
        best = NewtonReport {
            energy: next,
            iterations: best.iterations,
            residual_norm: fn_.norm(),
        };
    }
    best
}

/// Two-level energy `(E_C + E_M)/2 ∓ ½√((E_C - E_M)² + Ω²)`.
pub fn two_level_energy(e_c: f64, e_m: f64, omega: f64, branch: Branch) -> f64 {
    0.5 * (e_c + e_m) + branch.sign() * 0.5 * (e_c - e_m).hypot(omega)
}

/// Polariton energy without disorder.
pub fn zero_disorder_energy(q: f64, branch: Branch, cfg: &SystemConfig) -> Result<f64> {
    Ok(two_level_energy(
        cfg.photon_energy(q)?,
        cfg.e_m(),
        cfg.omega_r(),
        branch,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;
    use crate::specfun::dawson;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn perovskite(ratio: f64) -> SystemConfig {
        preset("perovskite")
            .unwrap()
            .with_sigma_ratio(ratio)
            .unwrap()
    }

    #[test]
    fn real_axis_split_into_dawson_and_gaussian() {
        let cfg = perovskite(0.25);
        let (om, s, em) = (cfg.omega_r(), cfg.sigma(), cfg.e_m());
        for &e in &[0.0, 0.1, 0.2, 0.214, 0.3, 0.7, 1.5] {
            let t = scattering_term(c(e, 0.0), &cfg).unwrap();
            let u = (e - em) / s;
            let re = om * om / (2.0 * s) * dawson(u).unwrap();
            let im = -(om * om * PI.sqrt() / (4.0 * s)) * (-u * u).exp();
            assert!((t.re - re).abs() <= 1e-12 * re.abs().max(1e-300), "{e}");
            assert!((t.im - im).abs() <= 1e-12 * im.abs(), "{e}");
        }
    }

    #[test]
    fn narrow_disorder_reduces_to_bare_coupling() {
        let cfg = perovskite(1e-6);
        let om = cfg.omega_r();
        for &e in &[c(0.1, 0.0), c(0.5, -1e-3), c(0.9, 0.0)] {
            let t = scattering_term(e, &cfg).unwrap();
            let lim = om * om / (4.0 * (e - cfg.e_m()));
            assert!((t - lim).norm() <= 1e-9 * lim.norm());
            let d = residual_derivative(e, 0.0, &cfg).unwrap();
            let dlim = 1.0 + om * om / (4.0 * (e - cfg.e_m()) * (e - cfg.e_m()));
            assert!((d - dlim).norm() <= 1e-6);
        }
    }

    #[test]
    fn zero_disorder_root_nearly_solves_narrow_case() {
        let cfg = perovskite(1e-6);
        for b in Branch::BOTH {
            for &q in &[0.0, 5.0, 20.0] {
                let e0 = zero_disorder_energy(q, b, &cfg).unwrap();
                assert!(residual(c(e0, 0.0), q, &cfg).unwrap().norm() <= 1e-6);
            }
        }
    }

    #[test]
    fn zero_width_is_refused() {
        let cfg = perovskite(0.0);
        assert!(matches!(
            residual(c(0.1, 0.0), 0.0, &cfg),
            Err(Error::DegenerateDisorder)
        ));
        assert!(matches!(
            residual_derivative(c(0.1, 0.0), 0.0, &cfg),
            Err(Error::DegenerateDisorder)
        ));
    }

    #[test]
    fn newton_converges_quadratically_from_bare_root() {
        let cfg = perovskite(1e-6);
        for b in Branch::BOTH {
            let e0 = zero_disorder_energy(3.0, b, &cfg).unwrap();
            let r = newton_root(c(e0, 0.0), 3.0, &cfg, 1e-12, 50).unwrap();
            assert!(r.iterations <= 3, "{}", r.iterations);
            assert!(r.residual_norm <= 1e-12);
        }
    }

    #[test]
    fn newton_accepts_a_root_as_seed() {
        let cfg = perovskite(0.1);
        let e0 = zero_disorder_energy(2.0, Branch::LP, &cfg).unwrap();
        let r = newton_root(c(e0, -1e-6), 2.0, &cfg, 1e-12, 50).unwrap();
        let again = newton_root(r.energy, 2.0, &cfg, 1e-12, 50).unwrap();
        assert_eq!(again.iterations, 0);
        assert_eq!(again.energy, r.energy);
    }

    #[test]
    fn newton_reports_nonconvergence() {
        let cfg = perovskite(0.1);
        match newton_root(c(5.0, 3.0), 2.0, &cfg, 1e-12, 1) {
            Err(Error::NonConvergence {
                iterations,
                residual,
                ..
            }) => {
                assert_eq!(iterations, 1);
                assert!(residual > 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(newton_root(c(0.1, 0.0), 2.0, &cfg, 0.0, 5).is_err());
        assert!(newton_root(c(0.1, 0.0), 2.0, &cfg, 1e-12, 0).is_err());
    }

    #[test]
    fn two_level_examples() {
        assert!((two_level_energy(2.0, 2.0, 0.2, Branch::LP) - 1.9).abs() < 1e-15);
        assert!((two_level_energy(2.0, 2.0, 0.2, Branch::UP) - 2.1).abs() < 1e-15);
        assert!((two_level_energy(1.0, 2.0, 1e-12, Branch::LP) - 1.0).abs() < 1e-15);
        assert!((two_level_energy(1.0, 2.0, 1e-12, Branch::UP) - 2.0).abs() < 1e-15);
        let cfg = perovskite(0.0);
        let split = zero_disorder_energy(0.0, Branch::UP, &cfg).unwrap()
            - zero_disorder_energy(0.0, Branch::LP, &cfg).unwrap();
        let want = ((0.157f64 - 0.214).powi(2) + 0.55f64.powi(2)).sqrt();
        assert!((split - want).abs() < 1e-15);
    }

    #[test]
    fn two_level_satisfies_quadratic() {
        let cfg = perovskite(0.0);
        for i in 0..300 {
            let q = i as f64 * 0.1;
            let ec = cfg.photon_energy(q).unwrap();
            for b in Branch::BOTH {
                let e = zero_disorder_energy(q, b, &cfg).unwrap();
                let lhs = (e - ec) * (e - cfg.e_m());
                assert!((lhs - 0.25 * cfg.omega_r().powi(2)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn branch_parsing() {
        assert_eq!("lp".parse::<Branch>().unwrap(), Branch::LP);
        assert_eq!("UP".parse::<Branch>().unwrap(), Branch::UP);
        assert!("XP".parse::<Branch>().is_err());
        assert_eq!(Branch::LP.to_string(), "LP");
    }
}

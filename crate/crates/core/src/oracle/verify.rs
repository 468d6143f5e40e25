use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use super::{erfcx_reference, fd_derivative_check, integral_rhs, Halton, QuadratureSpec};
use crate::analysis::perturbative_energy;
use crate::error::{Error, Result};
use crate::model::{preset, QGrid, SystemConfig, PRESET_NAMES};
use crate::solver::{scattering_term, solve_branch, zero_disorder_energy, Branch};
use crate::specfun::erfcx;

/// Disorder ratios σ/Ω_R used for the sampled checks.
pub const SAMPLE_RATIOS: [f64; 3] = [0.1, 0.25, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Erfcx,
    Integral,
    Derivative,
    Perturbative,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erfcx" => Ok(Suite::Erfcx),
            "integral" => Ok(Suite::Integral),
            "derivative" => Ok(Suite::Derivative),
            "perturbative" => Ok(Suite::Perturbative),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidParameter(format!(
                "unknown suite '{s}' (erfcx, integral, derivative, perturbative, all)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Erfcx => "erfcx",
            Suite::Integral => "integral",
            Suite::Derivative => "derivative",
            Suite::Perturbative => "perturbative",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Within(f64, f64),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(t) => write!(f, "<= {t:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

/// One measured quantity against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub samples: usize,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(t) => self.value <= t,
            Bound::Within(lo, hi) => self.value >= lo && self.value <= hi,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<13} {:<44} {:>11.3e} {:<16} n={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.to_string(),
            self.name,
            self.value,
            self.bound.to_string(),
            self.samples
        )
    }
}

fn max_or_nan(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

/// Production erfcx against the reference on the 41×41 grid over `[-10, 10]²`.
pub fn erfcx_grid_deviation() -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for i in 0..41 {
        for j in 0..41 {
            let z = Complex64::new(-10.0 + 0.5 * i as f64, -10.0 + 0.5 * j as f64);
            let dev = match (erfcx(z), erfcx_reference(z)) {
                (Ok(a), Ok(b)) => (a - b).norm() / b.norm(),
                _ => f64::NAN,
            };
            worst = max_or_nan(worst, dev);
            n += 1;
        }
    }
    (worst, n)
}

fn presets() -> Vec<SystemConfig> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("bundled preset"))
        .collect()
}

/// Sample points `E = E_M + σ(a + ib)` with `a ∈ [-5, 5]` and `1e-3 <= |b| <= 2`.
pub fn integral_samples(
    cfg: &SystemConfig,
    count: usize,
) -> Result<Vec<(SystemConfig, Complex64)>> {
    let mut out = Vec::with_capacity(count);
    for (k, [u0, u1, u2]) in Halton::<3>::new().take(count).enumerate() {
        let c = cfg.with_sigma_ratio(SAMPLE_RATIOS[k % SAMPLE_RATIOS.len()])?;
        let s = c.sigma();
        let a = -5.0 + 10.0 * u0;
        let b = 10f64.powf(-3.0 + (2f64.log10() + 3.0) * u1);
        let b = if u2 < 0.5 { -b } else { b };
        let e = Complex64::new(c.e_m() + a * s, b * s);
        out.push((c, e));
    }
    Ok(out)
}

/// Largest `|closed form - quadrature|` in eV over the sample set.
pub fn integral_deviation(cfg: &SystemConfig, count: usize) -> Result<f64> {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for (c, e) in integral_samples(cfg, count)? {
        let quad = integral_rhs(e, 0.0, &c, &spec)?;
        let closed = scattering_term(e, &c)?;
        worst = max_or_nan(worst, (quad - closed).norm());
    }
    Ok(worst)
}

/// Largest finite-difference discrepancy of the residual derivative over `count` points.
pub fn derivative_deviation(cfg: &SystemConfig, count: usize, h: f64) -> Result<f64> {
    let grid = QGrid::default_for(cfg);
    let mut worst: f64 = 0.0;
    for (k, [u0, u1, u2]) in Halton::<3>::new().take(count).enumerate() {
        let c = cfg.with_sigma_ratio(SAMPLE_RATIOS[k % SAMPLE_RATIOS.len()])?;
        let s = c.sigma();
        let q = grid.min + (grid.max - grid.min) * u0;
        let e = Complex64::new(c.e_m() + s * (-5.0 + 10.0 * u1), s * (-2.0 + 2.5 * u2));
        worst = max_or_nan(worst, fd_derivative_check(e, q, &c, h)?);
    }
    Ok(worst)
}

/// Weak-disorder error at σ = 0.02 Ω_R and 0.01 Ω_R for one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    pub branch: Branch,
    pub coarse_error: f64,
    pub fine_error: f64,
    pub samples: usize,
}

impl ScalingReport {
    pub fn ratio(&self) -> f64 {
        self.coarse_error / self.fine_error
    }
}

/// Halving σ from 0.02 Ω_R to 0.01 Ω_R, compared on the `q` where
/// `|E⁽⁰⁾ - E_M| >= 5σ` at the larger σ.
pub fn perturbative_scaling(
    cfg: &SystemConfig,
    branch: Branch,
    q: &[f64],
) -> Result<ScalingReport> {
    let coarse = cfg.with_sigma_ratio(0.02)?;
    let fine = cfg.with_sigma_ratio(0.01)?;
    let margin = 5.0 * coarse.sigma();
    let mut keep = Vec::new();
    for &x in q {
        if (zero_disorder_energy(x, branch, cfg)? - cfg.e_m()).abs() >= margin {
            keep.push(x);
        }
    }
    if keep.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let error = |c: &SystemConfig| -> Result<(f64, usize)> {
        let sol = solve_branch(branch, q, c)?;
        let mut worst: f64 = 0.0;
        let mut used = 0;
        for (i, &x) in q.iter().enumerate() {
            if !keep.contains(&x) || !sol.converged[i] {
                continue;
            }
            let pert = perturbative_energy(x, branch, c)?;
            worst = worst.max((sol.energies[i] - pert).norm());
            used += 1;
        }
        Ok((worst, used))
    };
    let (coarse_error, n1) = error(&coarse)?;
    let (fine_error, n2) = error(&fine)?;
    Ok(ScalingReport {
        branch,
        coarse_error,
        fine_error,
        samples: n1.min(n2),
    })
}

fn check(suite: Suite, name: String, r: Result<f64>, bound: Bound, samples: usize) -> Check {
    Check {
        suite,
        name,
        value: r.unwrap_or(f64::NAN),
        bound,
        samples,
    }
}

/// Runs one suite (or all of them) and returns every check.
pub fn run_suite(suite: Suite) -> Vec<Check> {
    let mut out = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Erfcx) {
        let (dev, n) = erfcx_grid_deviation();
        out.push(check(
            Suite::Erfcx,
            "41x41 grid max relative deviation".into(),
            Ok(dev),
            Bound::AtMost(1e-12),
            n,
        ));
    }
    for cfg in presets() {
        if wants(Suite::Integral) {
            out.push(check(
                Suite::Integral,
                format!("{} closed form vs quadrature (eV)", cfg.label()),
                integral_deviation(&cfg, 100),
                Bound::AtMost(1e-8),
                100,
            ));
        }
        if wants(Suite::Derivative) {
            out.push(check(
                Suite::Derivative,
                format!("{} dF/dE vs central difference", cfg.label()),
                derivative_deviation(&cfg, 50, 1e-7),
                Bound::AtMost(1e-6),
                50,
            ));
        }
        if wants(Suite::Perturbative) {
            let q = QGrid::default_for(&cfg).points();
            for branch in Branch::BOTH {
                let r = perturbative_scaling(&cfg, branch, &q);
                let samples = r.as_ref().map(|r| r.samples).unwrap_or(0);
                out.push(check(
                    Suite::Perturbative,
                    format!("{} {branch} sigma-halving error ratio", cfg.label()),
                    r.map(|r| r.ratio()),
                    Bound::Within(8.0, 32.0),
                    samples,
                ));
            }
        }
    }
    out
}

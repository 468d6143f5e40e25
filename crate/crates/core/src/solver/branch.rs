use num_complex::Complex64;

use super::{
    newton_with, polish, residual, zero_disorder_energy, Branch, NewtonReport, SolverOptions,
};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Complex energies of one branch along a q grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSolution {
    pub branch: Branch,
    /// Disorder width the solution was computed for, eV.
    pub sigma: f64,
    /// μm⁻¹, strictly increasing.
    pub q_grid: Vec<f64>,
    /// eV; for unconverged points this is the best iterate.
    pub energies: Vec<Complex64>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
    /// `|F(E)|` in eV.
    pub residual_norm: Vec<f64>,
}

impl BranchSolution {
    pub fn len(&self) -> usize {
        self.q_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q_grid.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn converged_count(&self) -> usize {
        self.converged.iter().filter(|&&c| c).count()
    }
}

const SEED_NUDGE: f64 = 1e-6;

/// [`solve_branch_with`] using default solver options.
pub fn solve_branch(branch: Branch, q_grid: &[f64], cfg: &SystemConfig) -> Result<BranchSolution> {
    solve_branch_with(branch, q_grid, cfg, &SolverOptions::default())
}

/// Tracks one branch across `q_grid` by continuation from the first point.
///
/// The first point starts from the bare two-level energy pushed `1e-6 i` eV below the
/// real axis; later points start from a linear extrapolation of the last two converged
/// energies. A point counts as converged only if Newton met the tolerance, the energy
/// does not sit above the real axis, and it stays on its own side of the opposite bare
/// branch. Failures past the first point are flagged, not fatal.
pub fn solve_branch_with(
    branch: Branch,
    q_grid: &[f64],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> Result<BranchSolution> {
    check_grid(q_grid, cfg)?;
    let n = q_grid.len();
    let mut sol = BranchSolution {
        branch,
        sigma: cfg.sigma(),
        q_grid: q_grid.to_vec(),
        energies: Vec::with_capacity(n),
        converged: Vec::with_capacity(n),
        iterations: Vec::with_capacity(n),
        residual_norm: Vec::with_capacity(n),
    };

    if cfg.sigma() == 0.0 {
        for &q in q_grid {
            let e = zero_disorder_energy(q, branch, cfg)?;
            let e_c = cfg.photon_energy(q)?;
            let f = e - e_c - 0.25 * cfg.omega_r() * cfg.omega_r() / (e - cfg.e_m());
            sol.energies.push(Complex64::new(e, 0.0));
            sol.converged.push(true);
            sol.iterations.push(0);
            sol.residual_norm.push(f.abs());
        }
        return Ok(sol);
    }

    // (q, E) of the last two accepted points, newest last
    let mut history: Vec<(f64, Complex64)> = Vec::with_capacity(2);
    for (k, &q) in q_grid.iter().enumerate() {
        let seed = match history.as_slice() {
            [] => Complex64::new(zero_disorder_energy(q, branch, cfg)?, -SEED_NUDGE),
            [(_, e)] => *e,
            [(q0, e0), (q1, e1)] => *e1 + (*e1 - *e0) * ((q - q1) / (q1 - q0)),
            _ => unreachable!(),
        };
        let outcome = newton_with(seed, q, cfg, opts)
            .map(|r| polish(r, q, cfg, opts.polish_steps))
            .and_then(|r| settle_sign(r, q, cfg, opts.tol));
        let (report, ok) = match outcome {
            Ok(r) => {
                let ok = acceptable(&r, q, branch, cfg)?;
                (r, ok)
            }
            Err(Error::NonConvergence {
                best,
                residual,
                iterations,
            }) => (
                NewtonReport {
                    energy: best,
                    iterations,
                    residual_norm: residual,
                },
                false,
            ),
            Err(e) => {
                if k == 0 {
                    return Err(e);
                }
                (
                    NewtonReport {
                        energy: Complex64::new(f64::NAN, f64::NAN),
                        iterations: 0,
                        residual_norm: f64::NAN,
                    },
                    false,
                )
            }
        };
        if k == 0 && !ok {
            return Err(Error::NonConvergence {
                best: report.energy,
                residual: report.residual_norm,
                iterations: report.iterations,
            });
        }
        if ok {
            if history.len() == 2 {
                history.remove(0);
            }
            history.push((q, report.energy));
        }
        sol.energies.push(report.energy);
        sol.converged.push(ok);
        sol.iterations.push(report.iterations);
        sol.residual_norm.push(report.residual_norm);
    }
    Ok(sol)
}

/// A positive imaginary part no larger than the tolerance is below what the residual can
/// resolve (for very narrow disorder the true value underflows); it is reported as zero
/// provided the residual still meets the tolerance there.
fn settle_sign(r: NewtonReport, q: f64, cfg: &SystemConfig, tol: f64) -> Result<NewtonReport> {
    if !(r.energy.im > 0.0 && r.energy.im <= tol) {
        return Ok(r);
    }
    let e = Complex64::new(r.energy.re, 0.0);
    let norm = residual(e, q, cfg)?.norm();
    Ok(if norm <= tol {
        NewtonReport {
            energy: e,
            residual_norm: norm,
            ..r
        }
    } else {
        r
    })
}

fn acceptable(r: &NewtonReport, q: f64, branch: Branch, cfg: &SystemConfig) -> Result<bool> {
    if r.energy.im > 0.0 {
        return Ok(false);
    }
    let other = zero_disorder_energy(q, branch.other(), cfg)?;
    Ok(match branch {
        Branch::LP => r.energy.re < other,
        Branch::UP => r.energy.re > other,
    })
}

fn check_grid(q_grid: &[f64], cfg: &SystemConfig) -> Result<()> {
    if q_grid.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    if let Some(q) = q_grid.iter().find(|q| !q.is_finite()) {
        return Err(Error::InvalidParameter(format!("q grid contains {q}")));
    }
    if let Some(i) = q_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(format!(
            "q grid must be strictly increasing (index {})",
            i + 1
        )));
    }
    let (lo, hi) = cfg.dispersion().domain();
    for &q in [q_grid[0], q_grid[q_grid.len() - 1]].iter() {
        if q < lo || q > hi {
            return Err(Error::OutOfRange {
                q,
                min: lo,
                max: hi,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;

    fn grid(n: usize, max: f64) -> Vec<f64> {
        (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn narrow_disorder_tracks_bare_branches() {
        for name in ["perovskite", "bodipy-bsw"] {
            let cfg = preset(name).unwrap().with_sigma_ratio(1e-6).unwrap();
            let (_, qmax) = cfg.dispersion().domain();
            let q = grid(200, qmax.min(30.0));
            for b in Branch::BOTH {
                let sol = solve_branch(b, &q, &cfg).unwrap();
                assert!(sol.all_converged(), "{name} {b}");
                for (k, e) in sol.energies.iter().enumerate() {
                    let e0 = zero_disorder_energy(q[k], b, &cfg).unwrap();
                    assert!((e.re - e0).abs() <= 1e-5, "{name} {b} q={}", q[k]);
                    assert!(e.im <= 0.0);
                }
            }
        }
    }

    #[test]
    fn disorder_pushes_branches_apart() {
        let cfg = preset("perovskite")
            .unwrap()
            .with_sigma_ratio(0.25)
            .unwrap();
        let q = grid(200, 30.0);
        let lp = solve_branch(Branch::LP, &q, &cfg).unwrap();
        let up = solve_branch(Branch::UP, &q, &cfg).unwrap();
        for k in 0..q.len() {
            if lp.converged[k] {
                assert!(lp.energies[k].re <= zero_disorder_energy(q[k], Branch::LP, &cfg).unwrap());
                assert!(lp.energies[k].im < 0.0);
            }
            if up.converged[k] {
                assert!(up.energies[k].re >= zero_disorder_energy(q[k], Branch::UP, &cfg).unwrap());
                assert!(up.energies[k].im < 0.0);
            }
        }
    }

    #[test]
    fn roots_do_not_depend_on_grid() {
        let cfg = preset("perovskite")
            .unwrap()
            .with_sigma_ratio(0.25)
            .unwrap();
        let coarse = grid(200, 30.0);
        let mut fine: Vec<f64> = coarse
            .windows(2)
            .flat_map(|w| [w[0], 0.5 * (w[0] + w[1])])
            .collect();
        fine.push(30.0);
        let dense = grid(400, 30.0);
        for b in Branch::BOTH {
            let a = solve_branch(b, &coarse, &cfg).unwrap();
            let f = solve_branch(b, &fine, &cfg).unwrap();
            let d = solve_branch(b, &dense, &cfg).unwrap();
            for k in 0..coarse.len() {
                if a.converged[k] && f.converged[2 * k] {
                    assert!((a.energies[k] - f.energies[2 * k]).norm() <= 1e-10);
                }
            }
            let last = coarse.len() - 1;
            assert!((a.energies[0] - d.energies[0]).norm() <= 1e-10);
            assert!((a.energies[last] - d.energies[dense.len() - 1]).norm() <= 1e-10);
        }
    }

    #[test]
    fn zero_width_uses_closed_form() {
        let cfg = preset("perovskite").unwrap();
        let q = grid(50, 30.0);
        let sol = solve_branch(Branch::UP, &q, &cfg).unwrap();
        for (k, e) in sol.energies.iter().enumerate() {
            assert_eq!(e.re, zero_disorder_energy(q[k], Branch::UP, &cfg).unwrap());
            assert_eq!(e.im, 0.0);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = preset("bodipy-bsw").unwrap().with_sigma_ratio(0.5).unwrap();
        let q = grid(120, 30.0);
        let a = solve_branch(Branch::LP, &q, &cfg).unwrap();
        let b = solve_branch(Branch::LP, &q, &cfg).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn grid_validation() {
        let cfg = preset("bodipy-bsw").unwrap().with_sigma_ratio(0.1).unwrap();
        assert!(solve_branch(Branch::LP, &[], &cfg).is_err());
        assert!(solve_branch(Branch::LP, &[1.0, 1.0], &cfg).is_err());
        assert!(matches!(
            solve_branch(Branch::LP, &[0.0, 40.0], &cfg),
            Err(Error::OutOfRange { .. })
        ));
    }
}

use super::stencil::even_masked_derivative;
use crate::error::Result;
use crate::model::{SystemConfig, HBAR_EV_FS};
use crate::solver::{solve_branch, Branch, BranchSolution};

/// Group velocities and lifetime-induced wave-vector broadening along a branch.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    pub q_grid: Vec<f64>,
    /// μm/fs; NaN at unconverged points.
    pub v_g: Vec<f64>,
    /// μm⁻¹; NaN where `v_g` vanishes or the point did not converge.
    pub delta_q: Vec<f64>,
    /// Converged, finite non-zero velocity, `q > 0` and `δq/q < 1`.
    pub valid: Vec<bool>,
}

impl VelocityProfile {
    /// `δq/q` per point (NaN where undefined).
    pub fn dq_over_q(&self) -> Vec<f64> {
        self.q_grid
            .iter()
            .zip(&self.delta_q)
            .map(|(q, dq)| if *q > 0.0 { dq / q } else { f64::NAN })
            .collect()
    }
}

/// `v_g = (1/ħ) d Re E/dq` by five-point differences over the converged points, with
/// `δq` and validity from [`wavevector_broadening`].
pub fn group_velocity(sol: &BranchSolution) -> Result<VelocityProfile> {
    let re: Vec<f64> = sol.energies.iter().map(|e| e.re).collect();
    let slope = even_masked_derivative(&sol.q_grid, &re, &sol.converged)?;
    let v_g: Vec<f64> = slope.iter().map(|s| s / HBAR_EV_FS).collect();
    let (delta_q, valid) = wavevector_broadening(sol, &v_g);
    Ok(VelocityProfile {
        q_grid: sol.q_grid.clone(),
        v_g,
        delta_q,
        valid,
    })
}

/// `δq = |Im E| / (ħ |v_g|)`; a point is valid when it converged and `δq/q < 1`.
pub fn wavevector_broadening(sol: &BranchSolution, v_g: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let mut delta_q = Vec::with_capacity(v_g.len());
    let mut valid = Vec::with_capacity(v_g.len());
    for (k, &v) in v_g.iter().enumerate() {
        let dq = if sol.converged[k] && v.is_finite() && v != 0.0 {
            sol.energies[k].im.abs() / (HBAR_EV_FS * v.abs())
        } else {
            f64::NAN
        };
        let q = sol.q_grid[k];
        delta_q.push(dq);
        valid.push(q > 0.0 && dq / q < 1.0);
    }
    (delta_q, valid)
}

/// Velocities of the bare two-level branch on the same grid and stencil.
pub fn zero_disorder_velocity(
    branch: Branch,
    q_grid: &[f64],
    cfg: &SystemConfig,
) -> Result<VelocityProfile> {
    let bare = solve_branch(branch, q_grid, &cfg.with_sigma(0.0)?)?;
    group_velocity(&bare)
}

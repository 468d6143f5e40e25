use super::stencil::even_masked_derivative;
use crate::error::Result;
use crate::model::SystemConfig;
use crate::solver::{zero_disorder_energy, BranchSolution};

/// Disorder-induced energy shift of a branch and its q-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftProfile {
    pub q_grid: Vec<f64>,
    /// `Re E_P - E_P⁽⁰⁾` in eV; NaN at unconverged points.
    pub shift: Vec<f64>,
    /// eV·μm
    pub shift_slope: Vec<f64>,
}

pub fn disorder_shift(sol: &BranchSolution, cfg: &SystemConfig) -> Result<ShiftProfile> {
    let mut shift = Vec::with_capacity(sol.len());
    for (k, &q) in sol.q_grid.iter().enumerate() {
        shift.push(if sol.converged[k] {
            sol.energies[k].re - zero_disorder_energy(q, sol.branch, cfg)?
        } else {
            f64::NAN
        });
    }
    let shift_slope = even_masked_derivative(&sol.q_grid, &shift, &sol.converged)?;
    Ok(ShiftProfile {
        q_grid: sol.q_grid.clone(),
        shift,
        shift_slope,
    })
}

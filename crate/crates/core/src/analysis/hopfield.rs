use crate::error::Result;
use crate::model::SystemConfig;
use crate::solver::Branch;

/// Exciton weight of a bare two-level polariton with detuning `Δ = E_C - E_M`.
///
/// LP: `½(1 + Δ/√(Δ² + Ω²))`, UP: `½(1 - Δ/√(Δ² + Ω²))`; a red-detuned photon
/// (`Δ < 0`) leaves the LP mostly photonic.
pub fn hopfield_exciton_weight(detuning: f64, omega: f64, branch: Branch) -> f64 {
    let r = detuning / detuning.hypot(omega);
    0.5 * (1.0 - branch.sign() * r)
}

/// Zero-disorder exciton fraction `P_M(q)` of `branch`.
pub fn exciton_fraction(q: f64, branch: Branch, cfg: &SystemConfig) -> Result<f64> {
    let detuning = cfg.photon_energy(q)? - cfg.e_m();
    Ok(hopfield_exciton_weight(detuning, cfg.omega_r(), branch))
}

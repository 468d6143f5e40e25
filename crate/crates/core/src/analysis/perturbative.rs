use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::solver::{two_level_energy, zero_disorder_energy, Branch};

/// Distance from the exciton, in units of σ, below which weak-disorder theory is refused.
pub const WEAK_DISORDER_MARGIN: f64 = 5.0;

/// Disorder-enhanced splitting `Ω̃ = Ω_R √(1 + σ²/(2(E_P⁽⁰⁾ - E_M)²))`.
pub fn modified_rabi(q: f64, branch: Branch, sigma: f64, cfg: &SystemConfig) -> Result<f64> {
    let d = zero_disorder_energy(q, branch, cfg)? - cfg.e_m();
    if d == 0.0 {
        return Err(Error::Domain(format!(
            "bare {branch} energy coincides with the exciton at q = {q}"
        )));
    }
    let r = sigma / d;
    Ok(cfg.omega_r() * (1.0 + 0.5 * r * r).sqrt())
}

/// Weak-disorder energy: the two-level quadratic with `Ω_R` replaced by `Ω̃`.
///
/// Only defined where `|E_P⁽⁰⁾ - E_M| >= 5σ`.
pub fn perturbative_energy(q: f64, branch: Branch, cfg: &SystemConfig) -> Result<f64> {
    let sigma = cfg.sigma();
    let e0 = zero_disorder_energy(q, branch, cfg)?;
    if (e0 - cfg.e_m()).abs() < WEAK_DISORDER_MARGIN * sigma {
        return Err(Error::Domain(format!(
            "|E⁽⁰⁾ - E_M| = {} eV is inside the strong-disorder sector (< {WEAK_DISORDER_MARGIN}σ = {} eV)",
            (e0 - cfg.e_m()).abs(),
            WEAK_DISORDER_MARGIN * sigma
        )));
    }
    if sigma == 0.0 {
        return Ok(e0);
    }
    let omega = modified_rabi(q, branch, sigma, cfg)?;
    Ok(two_level_energy(
        cfg.photon_energy(q)?,
        cfg.e_m(),
        omega,
        branch,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;

    #[test]
    fn no_disorder_no_change() {
        let cfg = preset("perovskite").unwrap();
        for b in Branch::BOTH {
            assert_eq!(modified_rabi(4.0, b, 0.0, &cfg).unwrap(), cfg.omega_r());
            assert_eq!(
                perturbative_energy(4.0, b, &cfg).unwrap(),
                zero_disorder_energy(4.0, b, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn root_two_identity() {
        let cfg = preset("perovskite").unwrap();
        let d = (zero_disorder_energy(2.0, Branch::UP, &cfg).unwrap() - cfg.e_m()).abs();
        let om = modified_rabi(2.0, Branch::UP, 2f64.sqrt() * d, &cfg).unwrap();
        assert!((om - cfg.omega_r() * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn splitting_grows_and_relaxes_on_the_upper_branch() {
        let cfg = preset("perovskite").unwrap();
        let sigma = 0.05;
        let near = modified_rabi(0.0, Branch::UP, sigma, &cfg).unwrap();
        let far = modified_rabi(1e4, Branch::UP, sigma, &cfg).unwrap();
        assert!(near > cfg.omega_r());
        assert!(far >= cfg.omega_r() && far - cfg.omega_r() < 1e-8);
    }

    #[test]
    fn branches_move_apart() {
        let cfg = preset("perovskite")
            .unwrap()
            .with_sigma_ratio(0.02)
            .unwrap();
        for i in 0..30 {
            let q = i as f64;
            if let Ok(e) = perturbative_energy(q, Branch::LP, &cfg) {
                assert!(e <= zero_disorder_energy(q, Branch::LP, &cfg).unwrap());
            }
            if let Ok(e) = perturbative_energy(q, Branch::UP, &cfg) {
                assert!(e >= zero_disorder_energy(q, Branch::UP, &cfg).unwrap());
            }
        }
    }

    #[test]
    fn strong_sector_is_refused() {
        let cfg = preset("perovskite").unwrap().with_sigma_ratio(0.5).unwrap();
        assert!(matches!(
            perturbative_energy(30.0, Branch::LP, &cfg),
            Err(Error::Domain(_))
        ));
    }
}

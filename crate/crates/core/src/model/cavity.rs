use std::f64::consts::PI;

use super::constants::{C_UM_PER_FS, HBAR_EV_FS};
use crate::error::{Error, Result};

/// Planar-cavity photon band `E_C(q) = (ħc/n_eff) √(q² + k_z²)` with `k_z = mπ/L_C`.
///
/// `n_eff` is derived from the other three parameters so that `E_C(0) = E_C0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityDispersion {
    e_c0: f64,
    l_c: f64,
    m: u32,
    n_eff: f64,
}

impl CavityDispersion {
    /// `e_c0` in eV, `l_c` in μm, `m >= 1`.
    pub fn new(e_c0: f64, l_c: f64, m: u32) -> Result<Self> {
        if !(e_c0 > 0.0 && e_c0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "E_C0 must be positive and finite, got {e_c0}"
            )));
        }
        if !(l_c > 0.0 && l_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "L_C must be positive and finite, got {l_c}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter(
                "mode index must be at least 1 (m = 0 has no q = 0 cutoff)".into(),
            ));
        }
        let n_eff = HBAR_EV_FS * C_UM_PER_FS * PI * f64::from(m) / (l_c * e_c0);
        Ok(Self {
            e_c0,
            l_c,
            m,
            n_eff,
        })
    }

    pub fn e_c0(&self) -> f64 {
        self.e_c0
    }

    pub fn l_c(&self) -> f64 {
        self.l_c
    }

    pub fn mode_index(&self) -> u32 {
        self.m
    }

    pub fn n_eff(&self) -> f64 {
        self.n_eff
    }

    /// Longitudinal wave vector `mπ/L_C` in μm⁻¹.
    pub fn k_z(&self) -> f64 {
        f64::from(self.m) * PI / self.l_c
    }

    /// Light-line slope `ħc/n_eff` in eV·μm.
    pub fn light_line_slope(&self) -> f64 {
        HBAR_EV_FS * C_UM_PER_FS / self.n_eff
    }

    /// Photon energy in eV at in-plane wave vector `q` (μm⁻¹, `q >= 0`).
    pub fn energy(&self, q: f64) -> f64 {
        let r = q / self.k_z();
        self.e_c0 * r.mul_add(r, 1.0).sqrt()
    }

    /// Wave vector at which the band reaches `e`, if it does.
    pub fn wavevector_at(&self, e: f64) -> Option<f64> {
        if e < self.e_c0 {
            return None;
        }
        let r = e / self.e_c0;
        Some(self.k_z() * (r * r - 1.0).sqrt())
    }
}

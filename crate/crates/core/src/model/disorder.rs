use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gaussian distribution of exciton energies, `ρ(E) = exp(-(E - E_M)²/σ²) / (σ√π)`.
///
/// Note the width convention: the variance is `σ²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDisorder {
    e_m: f64,
    sigma: f64,
}

impl GaussianDisorder {
    pub fn new(e_m: f64, sigma: f64) -> Result<Self> {
        if !e_m.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "E_M must be finite, got {e_m}"
            )));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and non-negative, got {sigma}"
            )));
        }
        Ok(Self { e_m, sigma })
    }

    /// Mean exciton energy in eV.
    pub fn e_m(&self) -> f64 {
        self.e_m
    }

    /// Width parameter in eV.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma == 0.0
    }

    /// Probability density in 1/eV.
    pub fn pdf(&self, e: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateDisorder);
        }
        let u = (e - self.e_m) / self.sigma;
        Ok((-u * u).exp() / (self.sigma * PI.sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_and_shape() {
        let g = GaussianDisorder::new(0.2, 0.01).unwrap();
        let peak = g.pdf(0.2).unwrap();
        assert!((peak - 1.0 / (0.01 * PI.sqrt())).abs() < 1e-12 * peak);
        let ratio = g.pdf(0.21).unwrap() / peak;
        assert!((ratio - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_width_has_no_density() {
        let g = GaussianDisorder::new(0.2, 0.0).unwrap();
        assert!(matches!(g.pdf(0.2), Err(Error::DegenerateDisorder)));
        assert!(GaussianDisorder::new(0.2, -1e-3).is_err());
        assert!(GaussianDisorder::new(f64::NAN, 0.1).is_err());
    }
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{CavityDispersion, GaussianDisorder, TabulatedDispersion};
use crate::error::{Error, Result};

/// Photon band: analytic planar cavity or a tabulated measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum Dispersion {
    Cavity(CavityDispersion),
    Tabulated(Arc<TabulatedDispersion>),
}

impl Dispersion {
    /// Photon energy in eV at wave vector `q` in μm⁻¹.
    pub fn energy(&self, q: f64) -> Result<f64> {
        match self {
            Dispersion::Cavity(c) => Ok(c.energy(q)),
            Dispersion::Tabulated(t) => t.energy(q),
        }
    }

    /// Range of `q` on which the band is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Dispersion::Cavity(_) => (0.0, f64::INFINITY),
            Dispersion::Tabulated(t) => (t.q_min(), t.q_max()),
        }
    }

    /// Wave vector where the photon band crosses energy `e`.
    pub fn wavevector_at(&self, e: f64) -> Option<f64> {
        match self {
            Dispersion::Cavity(c) => c.wavevector_at(e),
            Dispersion::Tabulated(t) => t.wavevector_at(e),
        }
    }
}

/// Complete physical setup for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    dispersion: Dispersion,
    disorder: GaussianDisorder,
    omega_r: f64,
    label: String,
}

impl SystemConfig {
    pub fn new(
        dispersion: Dispersion,
        disorder: GaussianDisorder,
        omega_r: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(omega_r > 0.0 && omega_r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Rabi splitting must be positive and finite, got {omega_r}"
            )));
        }
        Ok(Self {
            dispersion,
            disorder,
            omega_r,
            label: label.into(),
        })
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.dispersion
    }

    pub fn disorder(&self) -> &GaussianDisorder {
        &self.disorder
    }

    /// Rabi splitting in eV.
    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mean exciton energy in eV.
    pub fn e_m(&self) -> f64 {
        self.disorder.e_m()
    }

    /// Disorder width in eV.
    pub fn sigma(&self) -> f64 {
        self.disorder.sigma()
    }

    /// Photon energy at `q`.
    pub fn photon_energy(&self, q: f64) -> Result<f64> {
        self.dispersion.energy(q)
    }

    /// Same system with a different disorder width (eV).
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Ok(Self {
            disorder: GaussianDisorder::new(self.e_m(), sigma)?,
            ..self.clone()
        })
    }

    /// Same system with `σ = ratio · Ω_R`.
    pub fn with_sigma_ratio(&self, ratio: f64) -> Result<Self> {
        self.with_sigma(ratio * self.omega_r)
    }

    /// Wave vector where the bare photon crosses the exciton, `E_C(q) = E_M`.
    pub fn resonance_wavevector(&self) -> Option<f64> {
        self.dispersion.wavevector_at(self.e_m())
    }

    /// Reads a `key = value` configuration file; relative dispersion paths resolve against
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse_config(&text, &path.display().to_string(), base)
    }

    /// Parses the `key = value` format.
    ///
    /// Keys: `E_M_eV`, `omega_R_eV`, `sigma_eV` or `sigma_over_omega`, `label`, and either
    /// `E_C0_eV` + `L_C_um` (+ optional `mode_index`, default 1) or `dispersion_file`.
    pub fn parse_config(text: &str, source_name: &str, base_dir: &Path) -> Result<Self> {
        const KEYS: [&str; 8] = [
            "E_M_eV",
            "sigma_eV",
            "sigma_over_omega",
            "omega_R_eV",
            "E_C0_eV",
            "L_C_um",
            "mode_index",
            "dispersion_file",
        ];
        let mut values: BTreeMap<&str, (usize, String)> = BTreeMap::new();
        let mut label = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse {
                source_name: source_name.to_string(),
                line: line_no,
                message,
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
            let key = key.trim();
            let value = value.trim().to_string();
            if key == "label" {
                if label.replace((line_no, value)).is_some() {
                    return Err(err("duplicate key `label`".into()));
                }
                continue;
            }
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(format!("unknown key {key:?}")));
            };
            if values.insert(known, (line_no, value)).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }

        let at_line = |line: usize, message: String| Error::Parse {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let last_line = text.lines().count().max(1);
        let number = |key: &str| -> Result<Option<f64>> {
            match values.get(key) {
                None => Ok(None),
                Some((line, v)) => match v.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Some(x)),
                    _ => Err(at_line(
                        *line,
                        format!("{key} is not a finite number: {v:?}"),
                    )),
                },
            }
        };
        let required = |key: &str| -> Result<f64> {
            number(key)?.ok_or_else(|| at_line(last_line, format!("missing required key `{key}`")))
        };

        let e_m = required("E_M_eV")?;
        let omega_r = required("omega_R_eV")?;
        let sigma = match (number("sigma_eV")?, number("sigma_over_omega")?) {
            (Some(_), Some(_)) => {
                let line = values["sigma_over_omega"].0.max(values["sigma_eV"].0);
                return Err(at_line(
                    line,
                    "give either sigma_eV or sigma_over_omega, not both".into(),
                ));
            }
            (Some(s), None) => s,
            (None, Some(r)) => r * omega_r,
            (None, None) => 0.0,
        };

        let cavity_keys = ["E_C0_eV", "L_C_um", "mode_index"];
        let dispersion = if let Some((line, file)) = values.get("dispersion_file") {
            if let Some(k) = cavity_keys.iter().find(|k| values.contains_key(*k)) {
                return Err(at_line(
                    values[k].0.max(*line),
                    format!("`{k}` conflicts with `dispersion_file`"),
                ));
            }
            let mut path = PathBuf::from(file);
            if path.is_relative() {
                path = base_dir.join(path);
            }
            Dispersion::Tabulated(Arc::new(TabulatedDispersion::from_file(&path)?))
        } else {
            let e_c0 = required("E_C0_eV")?;
            let l_c = required("L_C_um")?;
            let m = match values.get("mode_index") {
                None => 1,
                Some((line, v)) => v.parse::<u32>().map_err(|_| {
                    at_line(
                        *line,
                        format!("mode_index must be a positive integer: {v:?}"),
                    )
                })?,
            };
            Dispersion::Cavity(CavityDispersion::new(e_c0, l_c, m)?)
        };

        let disorder = GaussianDisorder::new(e_m, sigma)?;
        let label = label
            .map(|l| l.1)
            .unwrap_or_else(|| source_name.to_string());
        Self::new(dispersion, disorder, omega_r, label)
    }
}

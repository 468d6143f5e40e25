use chrono::{DateTime, Utc};
use serde::Serialize;
use std::fs;
use std::path::Path;

use super::output::Num;
use crate::error::{Error, Result};
use crate::model::{Dispersion, QGrid, SystemConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a dataset's columns change.
pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DispersionEcho {
    Cavity {
        e_c0_ev: Num,
        l_c_um: Num,
        mode_index: u32,
        n_eff: Num,
    },
    Tabulated {
        /// `[q (μm⁻¹), E (eV)]`
        samples: Vec<[Num; 2]>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub label: String,
    pub e_m_ev: Num,
    pub omega_r_ev: Num,
    pub dispersion: DispersionEcho,
}

impl ConfigEcho {
    pub fn of(cfg: &SystemConfig) -> Self {
        let dispersion = match cfg.dispersion() {
            Dispersion::Cavity(c) => DispersionEcho::Cavity {
                e_c0_ev: Num(c.e_c0()),
                l_c_um: Num(c.l_c()),
                mode_index: c.mode_index(),
                n_eff: Num(c.n_eff()),
            },
            Dispersion::Tabulated(t) => DispersionEcho::Tabulated {
                samples: t.samples().map(|(q, e)| [Num(q), Num(e)]).collect(),
            },
        };
        Self {
            label: cfg.label().to_string(),
            e_m_ev: Num(cfg.e_m()),
            omega_r_ev: Num(cfg.omega_r()),
            dispersion,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QGridEcho {
    pub min: Num,
    pub max: Num,
    pub count: usize,
}

impl From<QGrid> for QGridEcho {
    fn from(g: QGrid) -> Self {
        Self {
            min: Num(g.min),
            max: Num(g.max),
            count: g.count,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Grids {
    pub q_per_um: QGridEcho,
    pub sigma_ev: Vec<Num>,
    pub sigma_ratio: Vec<Num>,
}

/// One file written by a command.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_ev: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_ratio: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<Num>,
}

/// Everything needed to regenerate a run's outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub schema_version: u32,
    pub command: String,
    pub timestamp: String,
    pub config: ConfigEcho,
    pub grids: Grids,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_mode: Option<String>,
    pub unconverged_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resonance_wavevector_per_um: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_slope: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_slope_error: Option<String>,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Schema(format!("manifest serialization: {e}")))?;
        text.push('\n');
        fs::write(dir.join(MANIFEST_NAME), text)?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<serde_json::Value> {
        let path = dir.join(MANIFEST_NAME);
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
    }
}

/// UTC time of the run; `SOURCE_DATE_EPOCH` overrides the clock for reproducible output.
pub fn timestamp() -> Result<String> {
    let when = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(s) => {
            let secs: i64 = s.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("SOURCE_DATE_EPOCH is not an integer: {s:?}"))
            })?;
            DateTime::<Utc>::from_timestamp(secs, 0).ok_or_else(|| {
                Error::InvalidParameter(format!("SOURCE_DATE_EPOCH out of range: {secs}"))
            })?
        }
        Err(_) => Utc::now(),
    };
    Ok(when.format("%Y-%m-%dT%H:%M:%SZ").to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;

    #[test]
    fn echo_carries_the_table() {
        let e = serde_json::to_value(ConfigEcho::of(&preset("bodipy-bsw").unwrap())).unwrap();
        assert_eq!(e["dispersion"]["kind"], "tabulated");
        assert!(e["dispersion"]["samples"].as_array().unwrap().len() > 10);
        let p = serde_json::to_value(ConfigEcho::of(&preset("perovskite").unwrap())).unwrap();
        assert_eq!(p["dispersion"]["kind"], "cavity");
        assert_eq!(p["omega_r_ev"].as_f64().unwrap(), 0.55);
    }
}

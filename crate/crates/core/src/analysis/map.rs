use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use super::hopfield::exciton_fraction;
use super::velocity::{group_velocity, zero_disorder_velocity, VelocityProfile};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::solver::{solve_branch, Branch};

/// Convention for the velocity-renormalization metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricMode {
    /// `1 - v_g/v_g⁽⁰⁾`: positive for a slowdown.
    #[default]
    FractionalSlowdown,
    /// `1 - v_g⁽⁰⁾/v_g`: negative for a slowdown.
    PaperExact,
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricMode::FractionalSlowdown => "fractional-slowdown",
            MetricMode::PaperExact => "paper-exact",
        })
    }
}

impl FromStr for MetricMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fractional-slowdown" => Ok(MetricMode::FractionalSlowdown),
            "paper-exact" => Ok(MetricMode::PaperExact),
            _ => Err(Error::InvalidParameter(format!(
                "metric mode must be fractional-slowdown or paper-exact, got {s:?}"
            ))),
        }
    }
}

/// Dimensionless group-velocity renormalization.
pub fn renormalization_metric(v_g: f64, v_g0: f64, mode: MetricMode) -> Result<f64> {
    if !(v_g > 0.0 && v_g0 > 0.0) {
        return Err(Error::NonPositiveVelocity { v_g, v_g0 });
    }
    Ok(match mode {
        MetricMode::FractionalSlowdown => 1.0 - v_g / v_g0,
        MetricMode::PaperExact => 1.0 - v_g0 / v_g,
    })
}

/// Lower-branch renormalization over a (σ/Ω_R, q) grid, stored row-major by σ.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormalizationMap {
    pub sigma_ratios: Vec<f64>,
    pub q_grid: Vec<f64>,
    pub mode: MetricMode,
    /// NaN where undefined.
    pub metric: Vec<f64>,
    /// Bare-branch exciton fraction of each cell.
    pub exciton_fraction: Vec<f64>,
    pub dq_over_q: Vec<f64>,
    pub valid: Vec<bool>,
    /// Number of cells whose root did not converge.
    pub unconverged: usize,
}

impl RenormalizationMap {
    pub fn rows(&self) -> usize {
        self.sigma_ratios.len()
    }

    pub fn cols(&self) -> usize {
        self.q_grid.len()
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols() + col
    }
}

struct Row {
    metric: Vec<f64>,
    dq_over_q: Vec<f64>,
    valid: Vec<bool>,
    unconverged: usize,
}

/// Solves the LP branch for every `σ/Ω_R` (rows run in parallel) and evaluates the
/// metric against the bare branch. Rows with `σ = 0` are zero by definition.
pub fn renormalization_map(
    cfg: &SystemConfig,
    sigma_ratios: &[f64],
    q_grid: &[f64],
    mode: MetricMode,
) -> Result<RenormalizationMap> {
    if sigma_ratios.is_empty() || q_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "map grids must be non-empty".into(),
        ));
    }
    if let Some(r) = sigma_ratios.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "sigma ratios must be finite and non-negative, got {r}"
        )));
    }
    let bare = zero_disorder_velocity(Branch::LP, q_grid, cfg)?;
    let fractions = q_grid
        .iter()
        .map(|&q| exciton_fraction(q, Branch::LP, cfg))
        .collect::<Result<Vec<f64>>>()?;

    let rows: Vec<Result<Row>> = sigma_ratios
        .par_iter()
        .map(|&ratio| map_row(cfg, ratio, q_grid, &bare, mode))
        .collect();

    let n = sigma_ratios.len() * q_grid.len();
    let mut map = RenormalizationMap {
        sigma_ratios: sigma_ratios.to_vec(),
        q_grid: q_grid.to_vec(),
        mode,
        metric: Vec::with_capacity(n),
        exciton_fraction: Vec::with_capacity(n),
        dq_over_q: Vec::with_capacity(n),
        valid: Vec::with_capacity(n),
        unconverged: 0,
    };
    for row in rows {
        let row = row?;
        map.metric.extend(row.metric);
        map.dq_over_q.extend(row.dq_over_q);
        map.valid.extend(row.valid);
        map.exciton_fraction.extend_from_slice(&fractions);
        map.unconverged += row.unconverged;
    }
    Ok(map)
}

fn map_row(
    cfg: &SystemConfig,
    ratio: f64,
    q_grid: &[f64],
    bare: &VelocityProfile,
    mode: MetricMode,
) -> Result<Row> {
    if ratio == 0.0 {
        return Ok(Row {
            metric: vec![0.0; q_grid.len()],
            dq_over_q: bare.dq_over_q(),
            valid: bare.valid.clone(),
            unconverged: 0,
        });
    }
    let sol = solve_branch(Branch::LP, q_grid, &cfg.with_sigma_ratio(ratio)?)?;
    let vp = group_velocity(&sol)?;
    let mut metric = Vec::with_capacity(q_grid.len());
    let mut valid = Vec::with_capacity(q_grid.len());
    for k in 0..q_grid.len() {
        let m = renormalization_metric(vp.v_g[k], bare.v_g[k], mode).unwrap_or(f64::NAN);
        metric.push(m);
        valid.push(vp.valid[k] && m.is_finite());
    }
    Ok(Row {
        metric,
        dq_over_q: vp.dq_over_q(),
        valid,
        unconverged: sol.converged.iter().filter(|c| !**c).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;

    #[test]
    fn metric_conventions() {
        for mode in [MetricMode::FractionalSlowdown, MetricMode::PaperExact] {
            assert_eq!(renormalization_metric(0.3, 0.3, mode).unwrap(), 0.0);
        }
        let f = renormalization_metric(0.9, 1.0, MetricMode::FractionalSlowdown).unwrap();
        assert!((f - 0.1).abs() < 1e-15);
        let p = renormalization_metric(0.9, 1.0, MetricMode::PaperExact).unwrap();
        assert!((p - (1.0 - 1.0 / 0.9)).abs() < 1e-15);
        assert!(matches!(
            renormalization_metric(0.0, 1.0, MetricMode::PaperExact),
            Err(Error::NonPositiveVelocity { .. })
        ));
        assert!(renormalization_metric(1.0, -1.0, MetricMode::FractionalSlowdown).is_err());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [MetricMode::FractionalSlowdown, MetricMode::PaperExact] {
            assert_eq!(m.to_string().parse::<MetricMode>().unwrap(), m);
        }
        assert!("other".parse::<MetricMode>().is_err());
    }

    #[test]
    fn zero_row_is_zero_and_rows_are_ordered() {
        let cfg = preset("perovskite").unwrap();
        let q: Vec<f64> = (0..80).map(|i| 0.25 * i as f64).collect();
        let map = renormalization_map(&cfg, &[0.0, 0.1, 0.2], &q, MetricMode::default()).unwrap();
        assert!(map.metric[..q.len()].iter().all(|m| *m == 0.0));
        for j in 0..q.len() {
            let (a, b) = (map.index(1, j), map.index(2, j));
            if map.valid[a] && map.valid[b] {
                assert!(map.metric[b] >= map.metric[a] - 1e-9);
            }
            assert!((0.0..=1.0).contains(&map.exciton_fraction[a]));
        }
    }

    #[test]
    fn rejects_negative_ratio() {
        let cfg = preset("perovskite").unwrap();
        assert!(renormalization_map(&cfg, &[-0.1], &[0.0, 1.0], MetricMode::default()).is_err());
    }
}

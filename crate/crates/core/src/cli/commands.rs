use rayon::prelude::*;
use std::io::Write;

use super::manifest::{
    timestamp, ConfigEcho, Grids, OutputEntry, RunManifest, SCHEMA_VERSION, TOOL_VERSION,
};
use super::output::{prepare_dir, Cell, Format, Num, Table};
use super::{MapArgs, SweepArgs, SystemArgs};
use crate::analysis::{
    crossover_slope, exciton_fraction, extract_contour, group_velocity, renormalization_map,
    zero_disorder_velocity, Contour, Field, MetricMode,
};
use crate::error::{Error, Result};
use crate::model::{preset, Dispersion, QGrid, SystemConfig, PRESET_NAMES};
use crate::oracle::verify::{run_suite, Suite};
use crate::solver::{solve_branch, zero_disorder_energy, Branch};

/// Outcome of a command that did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Clean,
    /// Some rows are flagged as not converged.
    Partial,
    Failed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Clean => 0,
            Status::Partial => 2,
            Status::Failed => 1,
        }
    }

    fn from_unconverged(n: usize) -> Self {
        if n == 0 {
            Status::Clean
        } else {
            Status::Partial
        }
    }
}

const SWEEP_RATIOS: &str = "0.1,0.25,0.5";
const MAP_RATIOS: &str = "0.02:0.8:40";
const DEFAULT_CONTOURS: [&str; 2] = ["metric=0.1", "dq_over_q=1"];

/// A comma list `a,b,c` or an inclusive grid `min:max:count`; values must be finite and
/// non-negative.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let values = if s.contains(':') {
        s.parse::<QGrid>()?.points()
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad number '{t}' in '{s}'")))
            })
            .collect::<Result<Vec<f64>>>()?
    };
    if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "values must be finite and non-negative: '{s}'"
        )));
    }
    Ok(values)
}

struct Resolved {
    cfg: SystemConfig,
    q: QGrid,
    sigmas: Vec<f64>,
    format: Format,
    /// Canonical flags, without the output path.
    flags: String,
}

fn resolve(a: &SystemArgs, default_ratios: &str) -> Result<Resolved> {
    let (cfg, source) = match (&a.preset, &a.config) {
        (Some(p), _) => (preset(p)?, format!("--preset {p}")),
        (None, Some(c)) => (
            SystemConfig::from_file(c)?,
            format!("--config {}", c.display()),
        ),
        (None, None) => {
            return Err(Error::InvalidParameter(
                "one of --preset or --config is required".into(),
            ))
        }
    };
    let (sigmas, sigma_flag) = match (&a.sigma, &a.sigma_ratio) {
        (Some(s), _) => (parse_values(s)?, format!("--sigma {s}")),
        (None, r) => {
            let r = r.as_deref().unwrap_or(default_ratios);
            let ratios = parse_values(r)?;
            (
                ratios.iter().map(|x| x * cfg.omega_r()).collect(),
                format!("--sigma-ratio {r}"),
            )
        }
    };
    let q = match &a.q {
        Some(s) => s.parse::<QGrid>()?,
        None => QGrid::default_for(&cfg),
    };
    if q.count < 5 {
        return Err(Error::InvalidParameter(format!(
            "the q grid needs at least 5 points for differentiation, got {}",
            q.count
        )));
    }
    let format: Format = a.format.parse()?;
    let flags = format!("{source} {sigma_flag} --q {q} --format {format}");
    Ok(Resolved {
        cfg,
        q,
        sigmas,
        format,
        flags,
    })
}

fn parse_branches(s: &str) -> Result<Vec<Branch>> {
    if s.eq_ignore_ascii_case("both") {
        Ok(Branch::BOTH.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

fn manifest(r: &Resolved, command: String) -> Result<RunManifest> {
    Ok(RunManifest {
        tool_version: TOOL_VERSION.to_string(),
        schema_version: SCHEMA_VERSION,
        command,
        timestamp: timestamp()?,
        config: ConfigEcho::of(&r.cfg),
        grids: Grids {
            q_per_um: r.q.into(),
            sigma_ev: r.sigmas.iter().map(|&s| Num(s)).collect(),
            sigma_ratio: r.sigmas.iter().map(|&s| Num(s / r.cfg.omega_r())).collect(),
        },
        format: r.format.to_string(),
        metric_mode: None,
        unconverged_points: 0,
        resonance_wavevector_per_um: None,
        crossover_slope: None,
        crossover_slope_error: None,
        outputs: Vec::new(),
    })
}

fn branch_tag(b: Branch) -> &'static str {
    match b {
        Branch::LP => "lp",
        Branch::UP => "up",
    }
}

fn solve_table(cfg: &SystemConfig, branch: Branch, q: &[f64]) -> Result<(Table, usize)> {
    let sol = solve_branch(branch, q, cfg)?;
    let profile = group_velocity(&sol)?;
    let mut t = Table::new(&[
        "q_per_um",
        "reE_eV",
        "imE_eV",
        "E0_eV",
        "EC_eV",
        "excfrac",
        "converged",
        "valid",
    ]);
    for (k, &x) in q.iter().enumerate() {
        let e = sol.energies[k];
        let (re, im) = if sol.converged[k] {
            (e.re, e.im)
        } else {
            (f64::NAN, f64::NAN)
        };
        t.push(vec![
            Cell::Num(x),
            Cell::Num(re),
            Cell::Num(im),
            Cell::Num(zero_disorder_energy(x, branch, cfg)?),
            Cell::Num(cfg.photon_energy(x)?),
            Cell::Num(exciton_fraction(x, branch, cfg)?),
            Cell::Bool(sol.converged[k]),
            Cell::Bool(sol.converged[k] && profile.valid[k]),
        ]);
    }
    Ok((t, sol.len() - sol.converged_count()))
}

fn gv_table(cfg: &SystemConfig, branch: Branch, q: &[f64], v0: &[f64]) -> Result<(Table, usize)> {
    let sol = solve_branch(branch, q, cfg)?;
    let p = group_velocity(&sol)?;
    let ratio = p.dq_over_q();
    let mut t = Table::new(&[
        "q_per_um",
        "vg_um_per_fs",
        "vg0_um_per_fs",
        "dq_per_um",
        "dq_over_q",
        "valid",
    ]);
    for k in 0..q.len() {
        t.push(vec![
            Cell::Num(q[k]),
            Cell::Num(p.v_g[k]),
            Cell::Num(v0[k]),
            Cell::Num(p.delta_q[k]),
            Cell::Num(ratio[k]),
            Cell::Bool(sol.converged[k] && p.valid[k]),
        ]);
    }
    Ok((t, sol.len() - sol.converged_count()))
}

type Job = (usize, f64, Branch);

fn sweep(
    a: &SweepArgs,
    kind: &str,
    build: impl Fn(&SystemConfig, Branch, &[f64]) -> Result<(Table, usize)> + Sync,
) -> Result<(Resolved, RunManifest)> {
    let r = resolve(&a.system, SWEEP_RATIOS)?;
    let branches = parse_branches(&a.branch)?;
    let q = r.q.points();
    let jobs: Vec<Job> = r
        .sigmas
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| branches.iter().map(move |&b| (i, s, b)))
        .collect();
    let tables: Vec<Result<(Table, usize)>> = jobs
        .par_iter()
        .map(|&(_, s, b)| build(&r.cfg.with_sigma(s)?, b, &q))
        .collect();
    let dir = prepare_dir(&a.system.out)?;
    let mut m = manifest(
        &r,
        format!(
            "{kind} {} --branch {}",
            r.flags,
            a.branch.to_ascii_lowercase()
        ),
    )?;
    for (&(i, s, b), t) in jobs.iter().zip(tables) {
        let (table, unconverged) = t?;
        let stem = format!("{kind}_s{i:02}_{}", branch_tag(b));
        m.outputs.push(OutputEntry {
            file: table.write(&dir, &stem, r.format)?,
            kind: kind.to_string(),
            branch: Some(b.to_string()),
            sigma_ev: Some(Num(s)),
            sigma_ratio: Some(Num(s / r.cfg.omega_r())),
            ..Default::default()
        });
        m.unconverged_points += unconverged;
    }
    Ok((r, m))
}

pub fn solve(a: &SweepArgs) -> Result<Status> {
    let (_, m) = sweep(a, "solve", solve_table)?;
    m.write(&a.system.out)?;
    Ok(Status::from_unconverged(m.unconverged_points))
}

pub fn gv(a: &SweepArgs) -> Result<Status> {
    let branches = parse_branches(&a.branch)?;
    let base = resolve(&a.system, SWEEP_RATIOS)?;
    let q = base.q.points();
    let mut bare = Vec::new();
    for b in Branch::BOTH {
        bare.push(if branches.contains(&b) {
            zero_disorder_velocity(b, &q, &base.cfg)?.v_g
        } else {
            Vec::new()
        });
    }
    let (r, mut m) = sweep(a, "gv", |cfg, b, q| {
        gv_table(cfg, b, q, &bare[if b == Branch::LP { 0 } else { 1 }])
    })?;
    m.resonance_wavevector_per_um = r.cfg.resonance_wavevector().map(Num);
    m.write(&a.system.out)?;
    Ok(Status::from_unconverged(m.unconverged_points))
}

fn contour_table(c: &Contour) -> Table {
    let mut t = Table::new(&[
        "polyline",
        "excfrac",
        "sigma_ratio",
        "q_per_um",
        "dq_over_q",
    ]);
    for (k, line) in c.polylines.iter().enumerate() {
        for p in line {
            t.push(vec![
                Cell::Int(k as i64),
                Cell::Num(p.exciton_fraction),
                Cell::Num(p.sigma_ratio),
                Cell::Num(p.q),
                Cell::Num(p.dq_over_q),
            ]);
        }
    }
    t
}

fn parse_contour(s: &str) -> Result<(Field, f64)> {
    let (f, l) = s.split_once('=').ok_or_else(|| {
        Error::InvalidParameter(format!("contour must look like field=level, got '{s}'"))
    })?;
    let level: f64 = l
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad contour level in '{s}'")))?;
    Ok((f.trim().parse()?, level))
}

pub fn map(a: &MapArgs) -> Result<Status> {
    let r = resolve(&a.system, MAP_RATIOS)?;
    let mode: MetricMode = a.metric_mode.parse()?;
    let requested: Vec<String> = if a.contour.is_empty() {
        DEFAULT_CONTOURS.iter().map(|s| s.to_string()).collect()
    } else {
        a.contour.clone()
    };
    let contours = requested
        .iter()
        .map(|s| parse_contour(s))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = r.sigmas.iter().map(|s| s / r.cfg.omega_r()).collect();
    let q = r.q.points();
    let map = renormalization_map(&r.cfg, &ratios, &q, mode)?;

    let mut table = Table::new(&[
        "sigma_ratio",
        "q_per_um",
        "excfrac",
        "metric",
        "dq_over_q",
        "valid",
    ]);
    for i in 0..map.rows() {
        for j in 0..map.cols() {
            let k = map.index(i, j);
            table.push(vec![
                Cell::Num(map.sigma_ratios[i]),
                Cell::Num(map.q_grid[j]),
                Cell::Num(map.exciton_fraction[k]),
                Cell::Num(map.metric[k]),
                Cell::Num(map.dq_over_q[k]),
                Cell::Bool(map.valid[k]),
            ]);
        }
    }
    let dir = prepare_dir(&a.system.out)?;
    let contour_flags: Vec<String> = requested.iter().map(|c| format!("--contour {c}")).collect();
    let mut m = manifest(
        &r,
        format!(
            "map {} --metric-mode {mode} {}",
            r.flags,
            contour_flags.join(" ")
        ),
    )?;
    m.metric_mode = Some(mode.to_string());
    m.unconverged_points = map.unconverged;
    m.outputs.push(OutputEntry {
        file: table.write(&dir, "map", r.format)?,
        kind: "map".into(),
        ..Default::default()
    });
    for (field, level) in contours {
        let c = extract_contour(&map, field, level);
        m.outputs.push(OutputEntry {
            file: contour_table(&c).write(&dir, &format!("contour_{field}_{level}"), r.format)?,
            kind: "contour".into(),
            field: Some(field.to_string()),
            level: Some(Num(level)),
            ..Default::default()
        });
    }
    let points: Vec<_> = extract_contour(&map, Field::Metric, 0.10)
        .points()
        .copied()
        .collect();
    match crossover_slope(&points) {
        Ok(s) => m.crossover_slope = Some(Num(s)),
        Err(e) => m.crossover_slope_error = Some(e.to_string()),
    }
    m.write(&dir)?;
    Ok(Status::from_unconverged(map.unconverged))
}

pub fn verify(suite: &str, out: &mut dyn Write) -> Result<Status> {
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite);
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    Ok(if failed == 0 {
        Status::Clean
    } else {
        Status::Failed
    })
}

pub fn presets(out: &mut dyn Write) -> Result<Status> {
    for name in PRESET_NAMES {
        let cfg = preset(name)?;
        writeln!(out, "{name}")?;
        writeln!(out, "  E_M      {:.3} eV       exciton energy", cfg.e_m())?;
        writeln!(
            out,
            "  Omega_R  {:.3} eV       Rabi splitting",
            cfg.omega_r()
        )?;
        match cfg.dispersion() {
            Dispersion::Cavity(c) => {
                writeln!(
                    out,
                    "  E_C0     {:.3} eV       photon energy at q = 0",
                    c.e_c0()
                )?;
                writeln!(out, "  L_C      {:.3} um       cavity length", c.l_c())?;
                writeln!(out, "  m        {}             mode index", c.mode_index())?;
                writeln!(
                    out,
                    "  n_eff    {:.4}          effective refractive index",
                    c.n_eff()
                )?;
            }
            Dispersion::Tabulated(t) => {
                let (e0, e1) = (t.energy(t.q_min())?, t.energy(t.q_max())?);
                writeln!(
                    out,
                    "  band     tabulated, {} samples, q in [{}, {}] um^-1, E from {:.4} to {:.4} eV",
                    t.len(),
                    t.q_min(),
                    t.q_max(),
                    e0,
                    e1
                )?;
            }
        }
        match cfg.resonance_wavevector() {
            Some(q) => writeln!(out, "  q_res    {q:.4} um^-1    photon-exciton crossing")?,
            None => writeln!(out, "  q_res    none in range")?,
        }
        writeln!(
            out,
            "  sigma    0 eV by default; set with --sigma or --sigma-ratio"
        )?;
    }
    Ok(Status::Clean)
}

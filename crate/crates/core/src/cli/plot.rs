use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::commands::Status;
use super::manifest::RunManifest;
use super::output::Table;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

const SOLVE_COLUMNS: [&str; 8] = [
    "q_per_um",
    "reE_eV",
    "imE_eV",
    "E0_eV",
    "EC_eV",
    "excfrac",
    "converged",
    "valid",
];
const GV_COLUMNS: [&str; 6] = [
    "q_per_um",
    "vg_um_per_fs",
    "vg0_um_per_fs",
    "dq_per_um",
    "dq_over_q",
    "valid",
];
const MAP_COLUMNS: [&str; 6] = [
    "sigma_ratio",
    "q_per_um",
    "excfrac",
    "metric",
    "dq_over_q",
    "valid",
];
const CONTOUR_COLUMNS: [&str; 5] = [
    "polyline",
    "excfrac",
    "sigma_ratio",
    "q_per_um",
    "dq_over_q",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Result<Self> {
        let range = |it: &mut dyn Iterator<Item = f64>| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in it.filter(|v| v.is_finite()) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if !lo.is_finite() {
                return Err(Error::Schema("dataset has no finite values to plot".into()));
            }
            if hi == lo {
                let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
                return Ok((lo - pad, hi + pad));
            }
            Ok((lo, hi))
        };
        let mut xs = xs;
        let mut ys = ys;
        Ok(Self {
            x: range(&mut xs)?,
            y: range(&mut ys)?,
        })
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn point(&self, x: f64, y: f64) -> String {
        format!("{:.2},{:.2}", self.px(x), self.py(y))
    }
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
        );
        let _ = writeln!(
            body,
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
        );
        let _ = writeln!(
            body,
            "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            WIDTH / 2.0,
            esc(title)
        );
        Self { body }
    }

    fn axes(&mut self, f: &Frame, xlabel: &str, ylabel: &str) {
        let b = &mut self.body;
        let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let _ = writeln!(
            b,
            "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"black\"/>"
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = f.x.0 + t * (f.x.1 - f.x.0);
            let yv = f.y.0 + t * (f.y.1 - f.y.0);
            let (px, py) = (f.px(xv), f.py(yv));
            let _ = writeln!(
                b,
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
                HEIGHT - BOTTOM,
                HEIGHT - BOTTOM + 5.0
            );
            let _ = writeln!(
                b,
                "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                HEIGHT - BOTTOM + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                b,
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>",
                LEFT - 5.0
            );
            let _ = writeln!(
                b,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                LEFT - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            b,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            LEFT + w / 2.0,
            HEIGHT - 15.0,
            esc(xlabel)
        );
        let _ = writeln!(
            b,
            "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
            TOP + h / 2.0,
            TOP + h / 2.0,
            esc(ylabel)
        );
    }

    fn polyline(&mut self, pts: &[String], color: &str, extra: &str) {
        if pts.len() < 2 {
            return;
        }
        let _ = writeln!(
            self.body,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{extra} points=\"{}\"/>",
            pts.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

struct Entry {
    table: Table,
    kind: String,
    branch: String,
    sigma_ratio: f64,
    field: String,
}

fn load(dir: &Path) -> Result<(serde_json::Value, Vec<Entry>)> {
    let m = RunManifest::read(dir)?;
    let outputs = m["outputs"]
        .as_array()
        .ok_or_else(|| Error::Schema("manifest has no outputs".into()))?;
    let mut entries = Vec::new();
    for o in outputs {
        let file = o["file"]
            .as_str()
            .ok_or_else(|| Error::Schema("output entry without file".into()))?;
        let kind = o["kind"].as_str().unwrap_or_default().to_string();
        let table = Table::read(&dir.join(file))?;
        let expected: &[&str] = match kind.as_str() {
            "solve" => &SOLVE_COLUMNS,
            "gv" => &GV_COLUMNS,
            "map" => &MAP_COLUMNS,
            "contour" => &CONTOUR_COLUMNS,
            other => return Err(Error::Schema(format!("unknown dataset kind '{other}'"))),
        };
        if table.columns != expected {
            return Err(Error::Schema(format!(
                "{file}: columns {:?} do not match the {kind} schema {expected:?}",
                table.columns
            )));
        }
        entries.push(Entry {
            table,
            kind,
            branch: o["branch"].as_str().unwrap_or_default().to_string(),
            sigma_ratio: o["sigma_ratio"].as_f64().unwrap_or(f64::NAN),
            field: o["field"].as_str().unwrap_or_default().to_string(),
        });
    }
    Ok((m, entries))
}

/// Colour per distinct σ, in order of first appearance.
fn colours(entries: &[&Entry]) -> BTreeMap<u64, &'static str> {
    let mut out = BTreeMap::new();
    for e in entries {
        let n = out.len();
        out.entry(e.sigma_ratio.to_bits())
            .or_insert(PALETTE[n % PALETTE.len()]);
    }
    out
}

fn legend(svg: &mut Svg, items: &[(String, &str)]) {
    for (k, (label, colour)) in items.iter().enumerate() {
        let y = TOP + 14.0 + 16.0 * k as f64;
        let x = WIDTH - RIGHT - 150.0;
        let _ = writeln!(
            svg.body,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{colour}\" stroke-width=\"3\"/>",
            y - 4.0,
            x + 20.0,
            y - 4.0
        );
        let _ = writeln!(
            svg.body,
            "<text x=\"{:.2}\" y=\"{y:.2}\">{}</text>",
            x + 26.0,
            esc(label)
        );
    }
}

fn plot_solve(title: &str, entries: &[&Entry]) -> Result<String> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in entries {
        let (q, re, im) = (
            e.table.floats("q_per_um")?,
            e.table.floats("reE_eV")?,
            e.table.floats("imE_eV")?,
        );
        xs.extend_from_slice(&q);
        for k in 0..re.len() {
            ys.push(re[k] + im[k].abs());
            ys.push(re[k] - im[k].abs());
        }
    }
    let f = Frame::fit(xs.into_iter(), ys.into_iter())?;
    let mut svg = Svg::new(title);
    svg.axes(&f, "q (1/um)", "Re E (eV), band Re E +/- |Im E|");
    let colour = colours(entries);
    for e in entries {
        let c = colour[&e.sigma_ratio.to_bits()];
        let (q, re, im) = (
            e.table.floats("q_per_um")?,
            e.table.floats("reE_eV")?,
            e.table.floats("imE_eV")?,
        );
        let idx: Vec<usize> = (0..q.len())
            .filter(|&k| re[k].is_finite() && im[k].is_finite())
            .collect();
        let mut band: Vec<String> = idx
            .iter()
            .map(|&k| f.point(q[k], re[k] + im[k].abs()))
            .collect();
        band.extend(
            idx.iter()
                .rev()
                .map(|&k| f.point(q[k], re[k] - im[k].abs())),
        );
        if band.len() >= 4 {
            let _ = writeln!(
                svg.body,
                "<polygon fill=\"{c}\" fill-opacity=\"0.2\" stroke=\"none\" points=\"{}\"/>",
                band.join(" ")
            );
        }
        let line: Vec<String> = idx.iter().map(|&k| f.point(q[k], re[k])).collect();
        svg.polyline(&line, c, &format!(" data-branch=\"{}\"", esc(&e.branch)));
    }
    let items: Vec<(String, &str)> = colour_labels(entries, &colour);
    legend(&mut svg, &items);
    Ok(svg.finish())
}

fn colour_labels(
    entries: &[&Entry],
    colour: &BTreeMap<u64, &'static str>,
) -> Vec<(String, &'static str)> {
    let mut seen = Vec::new();
    let mut items = Vec::new();
    for e in entries {
        let b = e.sigma_ratio.to_bits();
        if !seen.contains(&b) {
            seen.push(b);
            items.push((format!("sigma/Omega_R = {}", e.sigma_ratio), colour[&b]));
        }
    }
    items
}

fn plot_gv(title: &str, entries: &[&Entry]) -> Result<String> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in entries {
        xs.extend(e.table.floats("q_per_um")?);
        ys.extend(e.table.floats("vg_um_per_fs")?);
        ys.extend(e.table.floats("vg0_um_per_fs")?);
    }
    let f = Frame::fit(xs.into_iter(), ys.into_iter())?;
    let mut svg = Svg::new(title);
    svg.axes(&f, "q (1/um)", "v_g (um/fs); dashed: zero disorder");
    let colour = colours(entries);
    for e in entries {
        let c = colour[&e.sigma_ratio.to_bits()];
        let q = e.table.floats("q_per_um")?;
        let v = e.table.floats("vg_um_per_fs")?;
        let v0 = e.table.floats("vg0_um_per_fs")?;
        let valid = e.table.bools("valid")?;
        let pts = |y: &[f64]| -> Vec<String> {
            (0..q.len())
                .filter(|&k| y[k].is_finite())
                .map(|k| f.point(q[k], y[k]))
                .collect()
        };
        svg.polyline(
            &pts(&v0),
            c,
            " stroke-dasharray=\"4 3\" stroke-opacity=\"0.6\"",
        );
        svg.polyline(&pts(&v), c, "");
        for k in (0..q.len()).filter(|&k| !valid[k]) {
            let _ = writeln!(
                svg.body,
                "<circle class=\"gap\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{c}\"/>",
                f.px(q[k]),
                HEIGHT - BOTTOM - 4.0
            );
        }
    }
    let items = colour_labels(entries, &colour);
    legend(&mut svg, &items);
    Ok(svg.finish())
}

fn heat(t: f64) -> String {
    // white to dark red
    let t = t.clamp(0.0, 1.0);
    let r = 255.0 - 80.0 * t;
    let g = 255.0 * (1.0 - t);
    let b = 255.0 * (1.0 - t);
    format!(
        "#{:02x}{:02x}{:02x}",
        r.round() as u8,
        g.round() as u8,
        b.round() as u8
    )
}

fn plot_map(title: &str, map: &Entry, contours: &[&Entry]) -> Result<String> {
    let s = map.table.floats("sigma_ratio")?;
    let q = map.table.floats("q_per_um")?;
    let metric = map.table.floats("metric")?;
    let mut rows: Vec<f64> = s.clone();
    rows.dedup();
    let cols: Vec<f64> = q[..q.len() / rows.len().max(1)].to_vec();
    if rows.len() * cols.len() != q.len() || cols.len() < 2 || rows.len() < 2 {
        return Err(Error::Schema(
            "map dataset is not a full rectangular grid".into(),
        ));
    }
    let f = Frame::fit(cols.iter().copied(), rows.iter().copied())?;
    let finite: Vec<f64> = metric.iter().copied().filter(|m| m.is_finite()).collect();
    let (lo, hi) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut svg = Svg::new(title);
    let edges = |v: &[f64], k: usize| -> (f64, f64) {
        let a = if k == 0 {
            v[0]
        } else {
            0.5 * (v[k - 1] + v[k])
        };
        let b = if k + 1 == v.len() {
            v[k]
        } else {
            0.5 * (v[k] + v[k + 1])
        };
        (a, b)
    };
    for i in 0..rows.len() {
        let (y0, y1) = edges(&rows, i);
        for j in 0..cols.len() {
            let (x0, x1) = edges(&cols, j);
            let m = metric[i * cols.len() + j];
            let fill = if m.is_finite() {
                heat((m - lo) / span)
            } else {
                "#cccccc".into()
            };
            let _ = writeln!(
                svg.body,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
                f.px(x0),
                f.py(y1),
                f.px(x1) - f.px(x0),
                f.py(y0) - f.py(y1)
            );
        }
    }
    svg.axes(&f, "q (1/um)", "sigma / Omega_R");
    let mut items = Vec::new();
    for (n, c) in contours.iter().enumerate() {
        let colour = PALETTE[n % PALETTE.len()];
        let id = c.table.floats("polyline")?;
        let cq = c.table.floats("q_per_um")?;
        let cs = c.table.floats("sigma_ratio")?;
        let mut start = 0;
        for k in 1..=id.len() {
            if k == id.len() || id[k] != id[start] {
                let pts: Vec<String> = (start..k).map(|i| f.point(cq[i], cs[i])).collect();
                svg.polyline(&pts, colour, " stroke-dasharray=\"6 3\"");
                start = k;
            }
        }
        items.push((c.field.clone(), colour));
    }
    items.push((format!("metric {} .. {}", tick(lo), tick(hi)), "#af0000"));
    legend(&mut svg, &items);
    Ok(svg.finish())
}

/// Renders the datasets of a run directory to one SVG file.
pub fn plot(input: &Path, out: &Path) -> Result<Status> {
    let dir = if input.is_dir() {
        input
    } else {
        input.parent().unwrap_or(Path::new("."))
    };
    let (m, entries) = load(dir)?;
    let label = m["config"]["label"].as_str().unwrap_or_default();
    let of = |k: &str| entries.iter().filter(|e| e.kind == k).collect::<Vec<_>>();
    let svg = if let Some(map) = of("map").first() {
        plot_map(
            &format!("{label}: velocity renormalization"),
            map,
            &of("contour"),
        )?
    } else if !of("gv").is_empty() {
        plot_gv(&format!("{label}: group velocity"), &of("gv"))?
    } else if !of("solve").is_empty() {
        plot_solve(&format!("{label}: polariton dispersion"), &of("solve"))?
    } else {
        return Err(Error::Schema(
            "run directory contains no plottable dataset".into(),
        ));
    };
    fs::write(out, svg)?;
    Ok(Status::Clean)
}

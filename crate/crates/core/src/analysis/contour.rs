//! Marching-squares iso-lines of a [`RenormalizationMap`] in
//! (exciton fraction, σ/Ω_R) coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::map::RenormalizationMap;
use crate::error::{Error, Result};

/// Scalar field of the map to contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Metric,
    DqOverQ,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Metric => "metric",
            Field::DqOverQ => "dq_over_q",
        })
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Field::Metric),
            "dq_over_q" => Ok(Field::DqOverQ),
            _ => Err(Error::InvalidParameter(format!(
                "contour field must be metric or dq_over_q, got {s:?}"
            ))),
        }
    }
}

/// A contour vertex; every attribute is linearly interpolated along the crossed edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub exciton_fraction: f64,
    pub sigma_ratio: f64,
    pub q: f64,
    pub dq_over_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub field: Field,
    pub level: f64,
    pub polylines: Vec<Vec<ContourPoint>>,
}

impl Contour {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &ContourPoint> {
        self.polylines.iter().flatten()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    /// between (i, j) and (i, j + 1)
    H(usize, usize),
    /// between (i, j) and (i + 1, j)
    V(usize, usize),
}

/// Iso-line of `field` at `level`.
///
/// Cells with a non-finite corner are skipped; for the metric field so are cells with
/// any corner flagged invalid. Saddle cells are split by the cell-centre average.
pub fn extract_contour(map: &RenormalizationMap, field: Field, level: f64) -> Contour {
    let (rows, cols) = (map.rows(), map.cols());
    let values = match field {
        Field::Metric => &map.metric,
        Field::DqOverQ => &map.dq_over_q,
    };
    let usable = |i: usize, j: usize| {
        let k = map.index(i, j);
        values[k].is_finite() && (field == Field::DqOverQ || map.valid[k])
    };
    let v = |i: usize, j: usize| values[map.index(i, j)];

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols.saturating_sub(1) {
            if !(usable(i, j) && usable(i, j + 1) && usable(i + 1, j) && usable(i + 1, j + 1)) {
                continue;
            }
            let corners = [v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j)];
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (b, c)| acc | (u8::from(*c >= level) << b));
            let bottom = Edge::H(i, j);
            let right = Edge::V(i, j + 1);
            let top = Edge::H(i + 1, j);
            let left = Edge::V(i, j);
            let centre_in = corners.iter().sum::<f64>() / 4.0 >= level;
            let pairs: &[(Edge, Edge)] = match case {
                1 | 14 => &[(left, bottom)],
                2 | 13 => &[(bottom, right)],
                3 | 12 => &[(left, right)],
                4 | 11 => &[(right, top)],
                6 | 9 => &[(bottom, top)],
                7 | 8 => &[(left, top)],
                5 if centre_in => &[(bottom, right), (left, top)],
                5 => &[(left, bottom), (right, top)],
                10 if centre_in => &[(left, bottom), (right, top)],
                10 => &[(bottom, right), (left, top)],
                _ => &[],
            };
            segments.extend_from_slice(pairs);
        }
    }

    let point = |e: Edge| -> ContourPoint {
        let (a, b) = match e {
            Edge::H(i, j) => (map.index(i, j), map.index(i, j + 1)),
            Edge::V(i, j) => (map.index(i, j), map.index(i + 1, j)),
        };
        let t = (level - values[a]) / (values[b] - values[a]);
        let lerp = |x: f64, y: f64| x + t * (y - x);
        let (ra, ca) = (a / cols, a % cols);
        let (rb, cb) = (b / cols, b % cols);
        ContourPoint {
            exciton_fraction: lerp(map.exciton_fraction[a], map.exciton_fraction[b]),
            sigma_ratio: lerp(map.sigma_ratios[ra], map.sigma_ratios[rb]),
            q: lerp(map.q_grid[ca], map.q_grid[cb]),
            dq_over_q: lerp(map.dq_over_q[a], map.dq_over_q[b]),
        }
    };

    Contour {
        field,
        level,
        polylines: chain(&segments)
            .into_iter()
            .map(|edges| edges.into_iter().map(point).collect())
            .collect(),
    }
}

/// Joins segments sharing an edge into polylines: open chains first, then loops.
fn chain(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut at: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(s);
        at.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: Edge, first: usize, used: &mut Vec<bool>| {
        let mut line = vec![start];
        let mut cur = start;
        let mut seg = Some(first);
        while let Some(s) = seg {
            used[s] = true;
            let (a, b) = segments[s];
            cur = if a == cur { b } else { a };
            line.push(cur);
            seg = at[&cur].iter().copied().find(|&t| !used[t]);
        }
        line
    };
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for end in [segments[s].0, segments[s].1] {
            if at[&end].len() == 1 && !used[s] {
                out.push(walk(end, s, &mut used));
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(segments[s].0, s, &mut used));
        }
    }
    out
}

/// Least-squares exponent `s` in `P_M ∝ (σ/Ω_R)^s` over contour points with positive
/// coordinates and `δq/q < 1`.
pub fn crossover_slope(points: &[ContourPoint]) -> Result<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.exciton_fraction > 0.0 && p.sigma_ratio > 0.0 && p.dq_over_q < 1.0)
        .map(|p| (p.sigma_ratio.ln(), p.exciton_fraction.ln()))
        .collect();
    if usable.len() < 5 {
        return Err(Error::InsufficientPoints {
            needed: 5,
            got: usable.len(),
        });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidParameter(
            "contour points share a single σ/Ω_R; slope undefined".into(),
        ));
    }
    Ok(sxy / sxx)
}

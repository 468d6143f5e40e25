use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Sampled photon band with a monotone piecewise-cubic Hermite interpolant.
///
/// Node slopes follow Fritsch–Carlson: a weighted harmonic mean of the adjacent secants
/// inside, a shape-preserving three-point formula at the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDispersion {
    q: Vec<f64>,
    e: Vec<f64>,
    slope: Vec<f64>,
}

impl TabulatedDispersion {
    /// Builds the interpolant; `q` and `E` must both be strictly increasing.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InsufficientPoints {
                needed: 2,
                got: samples.len(),
            });
        }
        for (i, &(q, e)) in samples.iter().enumerate() {
            if !(q.is_finite() && e.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "sample {i} is not finite: ({q}, {e})"
                )));
            }
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidParameter(format!(
                    "q must be strictly increasing (sample {})",
                    i + 1
                )));
            }
            if !(w[1].1 > w[0].1) {
                return Err(Error::InvalidParameter(format!(
                    "E must be strictly increasing (sample {})",
                    i + 1
                )));
            }
        }
        let q: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let e: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let slope = pchip_slopes(&q, &e);
        Ok(Self { q, e, slope })
    }

    /// Parses two whitespace-separated columns `q_per_micron E_eV`; `#` starts a comment line.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut samples = Vec::new();
        let mut last: Option<(usize, f64, f64)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                source_name: source_name.to_string(),
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected 2 columns, found {}", fields.len())));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                match s.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(err(format!("{what} is not a finite number: {s:?}"))),
                }
            };
            let q = parse(fields[0], "q")?;
            let e = parse(fields[1], "E")?;
            if let Some((prev_line, pq, pe)) = last {
                if !(q > pq) {
                    return Err(err(format!(
                        "q = {q} does not increase past {pq} (line {prev_line})"
                    )));
                }
                if !(e > pe) {
                    return Err(err(format!(
                        "E = {e} does not increase past {pe} (line {prev_line})"
                    )));
                }
            }
            last = Some((line_no, q, e));
            samples.push((q, e));
        }
        if samples.len() < 2 {
            return Err(Error::Parse {
                source_name: source_name.to_string(),
                line: text.lines().count(),
                message: format!("need at least 2 samples, found {}", samples.len()),
            });
        }
        Self::new(&samples)
    }

    /// Reads and parses a dispersion file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingDispersionFile(path.to_path_buf()))
            }
            Err(e) => return Err(e.into()),
        };
        Self::parse(&text, &path.display().to_string())
    }

    /// Writes the samples back in the format accepted by [`parse`](Self::parse).
    pub fn serialize(&self) -> String {
        let mut out = String::from("# q_per_micron  E_eV\n");
        for (q, e) in self.q.iter().zip(&self.e) {
            let _ = writeln!(out, "{q:.16e} {e:.16e}");
        }
        out
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.q.iter().copied().zip(self.e.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn q_min(&self) -> f64 {
        self.q[0]
    }

    pub fn q_max(&self) -> f64 {
        self.q[self.q.len() - 1]
    }

    /// Interpolated energy; no extrapolation outside the sampled range.
    pub fn energy(&self, q: f64) -> Result<f64> {
        if !(q >= self.q_min() && q <= self.q_max()) {
            return Err(Error::OutOfRange {
                q,
                min: self.q_min(),
                max: self.q_max(),
            });
        }
        let k = match self.q.binary_search_by(|p| p.total_cmp(&q)) {
            Ok(i) => return Ok(self.e[i]),
            Err(i) => i - 1,
        };
        let h = self.q[k + 1] - self.q[k];
        let t = (q - self.q[k]) / h;
        let (e0, e1) = (self.e[k], self.e[k + 1]);
        let (d0, d1) = (self.slope[k] * h, self.slope[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * e0 + h10 * d0 + h01 * e1 + h11 * d1)
    }

    /// Wave vector where the interpolant reaches `e`, if inside the table.
    pub fn wavevector_at(&self, e: f64) -> Option<f64> {
        let last = self.e.len() - 1;
        if !(e >= self.e[0] && e <= self.e[last]) {
            return None;
        }
        let k = match self.e.binary_search_by(|p| p.total_cmp(&e)) {
            Ok(i) => return Some(self.q[i]),
            Err(i) => i - 1,
        };
        let (mut lo, mut hi) = (self.q[k], self.q[k + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.energy(mid).ok()? < e {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = y
        .windows(2)
        .zip(&h)
        .map(|(w, h)| (w[1] - w[0]) / h)
        .collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b <= 0.0 {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CavityDispersion;
    use proptest::prelude::*;

    fn table() -> TabulatedDispersion {
        TabulatedDispersion::new(&[(0.0, 1.0), (1.0, 1.5), (2.0, 1.6), (4.0, 3.0), (5.0, 3.01)])
            .unwrap()
    }

    #[test]
    fn reproduces_nodes() {
        let t = table();
        for (q, e) in t.clone().samples() {
            assert_eq!(t.energy(q).unwrap(), e);
        }
    }

    #[test]
    fn midpoints_are_bracketed() {
        let t = table();
        let nodes: Vec<_> = t.samples().collect();
        for w in nodes.windows(2) {
            let v = t.energy(0.5 * (w[0].0 + w[1].0)).unwrap();
            assert!(v >= w[0].1 && v <= w[1].1);
        }
    }

    #[test]
    fn refuses_extrapolation() {
        let t = table();
        assert!(matches!(t.energy(-0.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.energy(5.1), Err(Error::OutOfRange { .. })));
        assert!(t.energy(f64::NAN).is_err());
    }

    #[test]
    fn resampled_cavity_band_interpolates_to_micro_ev() {
        let c = CavityDispersion::new(0.157, 0.667, 1).unwrap();
        let samples: Vec<_> = (0..=600)
            .map(|i| (i as f64 * 0.05, c.energy(i as f64 * 0.05)))
            .collect();
        let t = TabulatedDispersion::new(&samples).unwrap();
        let worst = (0..=30_000)
            .map(|i| {
                let q = i as f64 * 1e-3;
                (t.energy(q).unwrap() - c.energy(q)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "# header\n0 1\n1 2\n\n1 3\n";
        match TabulatedDispersion::parse(text, "band.dat") {
            Err(Error::Parse {
                line, source_name, ..
            }) => {
                assert_eq!(line, 5);
                assert_eq!(source_name, "band.dat");
            }
            other => panic!("{other:?}"),
        }
        let text = "0 1\n1 x\n";
        assert!(matches!(
            TabulatedDispersion::parse(text, "b"),
            Err(Error::Parse { line: 2, .. })
        ));
        let text = "0 1 2\n";
        assert!(matches!(
            TabulatedDispersion::parse(text, "b"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn missing_file_is_reported() {
        let r = TabulatedDispersion::from_file(Path::new("/definitely/not/here.dat"));
        assert!(matches!(r, Err(Error::MissingDispersionFile(_))));
    }

    #[test]
    fn wavevector_inverts_energy() {
        let t = table();
        let q = t.wavevector_at(2.0).unwrap();
        assert!((t.energy(q).unwrap() - 2.0).abs() < 1e-12);
        assert!(t.wavevector_at(0.5).is_none());
    }

    proptest! {
        #[test]
        fn monotone_between_nodes(steps in prop::collection::vec((0.01f64..2.0, 1e-4f64..1.0), 3..30)) {
            let mut q = 0.0;
            let mut e = 0.1;
            let mut samples = vec![(q, e)];
            for (dq, de) in steps {
                q += dq;
                e += de;
                samples.push((q, e));
            }
            let t = TabulatedDispersion::new(&samples).unwrap();
            let mut prev = f64::NEG_INFINITY;
            let n = 2000;
            for i in 0..=n {
                let x = (q * i as f64 / n as f64).min(q);
                let v = t.energy(x).unwrap();
                prop_assert!(v >= prev);
                prev = v;
            }
        }

        #[test]
        fn serialize_round_trip_is_idempotent(steps in prop::collection::vec((1e-3f64..5.0, 1e-6f64..0.1), 1..40)) {
            let mut samples = vec![(0.0, 0.05)];
            for (dq, de) in steps {
                let (q, e) = *samples.last().unwrap();
                samples.push((q + dq, e + de));
            }
            let t = TabulatedDispersion::new(&samples).unwrap();
            let once = TabulatedDispersion::parse(&t.serialize(), "mem").unwrap();
            prop_assert_eq!(&once, &t);
            prop_assert_eq!(once.serialize(), t.serialize());
        }
    }
}

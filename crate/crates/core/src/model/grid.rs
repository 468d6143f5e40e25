use std::fmt;
use std::str::FromStr;

use super::{Dispersion, SystemConfig};
use crate::error::{Error, Result};

/// Evenly spaced wave-vector grid, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl QGrid {
    pub const DEFAULT_COUNT: usize = 400;
    pub const DEFAULT_MAX: f64 = 30.0;

    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "q range must be finite and non-negative, got {min}:{max}"
            )));
        }
        if count < 2 || !(max > min) {
            return Err(Error::InvalidParameter(format!(
                "q grid needs max > min and at least 2 points, got {min}:{max}:{count}"
            )));
        }
        Ok(Self { min, max, count })
    }

    /// 400 points on `[0, 30]` μm⁻¹, or on the table range for a tabulated band.
    pub fn default_for(cfg: &SystemConfig) -> Self {
        let (min, max) = match cfg.dispersion() {
            Dispersion::Cavity(_) => (0.0, Self::DEFAULT_MAX),
            Dispersion::Tabulated(t) => (t.q_min(), t.q_max()),
        };
        Self {
            min,
            max,
            count: Self::DEFAULT_COUNT,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        let step = (self.max - self.min) / n as f64;
        (0..self.count)
            .map(|i| {
                if i == n {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for QGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::InvalidParameter(format!(
                "expected min:max:count, got '{s}'"
            )));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad number '{t}' in q grid '{s}'")))
        };
        let count = c
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad count '{c}' in q grid '{s}'")))?;
        QGrid::new(num(a)?, num(b)?, count)
    }
}

impl fmt::Display for QGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

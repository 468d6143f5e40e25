use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dataset serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!(
                "format must be csv or json, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// 17 significant digits, dot decimal separator regardless of locale.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A float that serializes as a 17-digit JSON number, or `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_number(self.0))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match self {
            Cell::Num(x) => *x,
            Cell::Int(i) => *i as f64,
            Cell::Bool(b) => f64::from(u8::from(*b)),
        }
    }

    pub fn as_bool(&self) -> bool {
        match self {
            Cell::Bool(b) => *b,
            other => other.as_f64() != 0.0,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format_number(*x),
            Cell::Num(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Column-named rectangular dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<Vec<&Cell>> {
        let k = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))?;
        Ok(self.rows.iter().map(|r| &r[k]).collect())
    }

    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self.column(name)?.into_iter().map(Cell::as_f64).collect())
    }

    pub fn bools(&self, name: &str) -> Result<Vec<bool>> {
        Ok(self.column(name)?.into_iter().map(Cell::as_bool).collect())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Json => {
                let cols: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| serde_json::to_string(c).expect("string serializes"))
                    .collect();
                out.push_str(&format!(
                    "{{\n  \"columns\": [{}],\n  \"rows\": [",
                    cols.join(", ")
                ));
                for (i, row) in self.rows.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(Cell::json).collect();
                    out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
                    out.push_str(&cells.join(", "));
                    out.push(']');
                }
                out.push_str(if self.rows.is_empty() {
                    "]\n}\n"
                } else {
                    "\n  ]\n}\n"
                });
            }
        }
        out
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the file name.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<String> {
        let name = format!("{stem}.{}", format.extension());
        fs::write(dir.join(&name), self.render(format))?;
        Ok(name)
    }

    pub fn parse(text: &str, format: Format, source: &str) -> Result<Self> {
        match format {
            Format::Csv => parse_csv(text, source),
            Format::Json => parse_json(text, source),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => {
                return Err(Error::Schema(format!(
                    "{}: dataset must end in .csv or .json",
                    path.display()
                )))
            }
        };
        let text = fs::read_to_string(path)?;
        Table::parse(&text, format, &path.display().to_string())
    }
}

fn parse_cell(token: &str, source: &str, line: usize) -> Result<Cell> {
    match token {
        "true" => Ok(Cell::Bool(true)),
        "false" => Ok(Cell::Bool(false)),
        "NaN" => Ok(Cell::Num(f64::NAN)),
        _ => {
            if let Ok(i) = token.parse::<i64>() {
                Ok(Cell::Int(i))
            } else {
                token
                    .parse::<f64>()
                    .map(Cell::Num)
                    .map_err(|_| Error::Parse {
                        source_name: source.into(),
                        line,
                        message: format!("not a number: '{token}'"),
                    })
            }
        }
    }
}

fn parse_csv(text: &str, source: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Schema(format!("{source}: empty dataset")))?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let cells = line
            .split(',')
            .map(|t| parse_cell(t, source, k + 2))
            .collect::<Result<Vec<_>>>()?;
        if cells.len() != columns.len() {
            return Err(Error::Schema(format!(
                "{source}: line {} has {} fields, header has {}",
                k + 2,
                cells.len(),
                columns.len()
            )));
        }
        rows.push(cells);
    }
    Ok(Table { columns, rows })
}

fn parse_json(text: &str, source: &str) -> Result<Table> {
    let bad = |m: &str| Error::Schema(format!("{source}: {m}"));
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
    let columns: Vec<String> = v["columns"]
        .as_array()
        .ok_or_else(|| bad("missing 'columns'"))?
        .iter()
        .map(|c| {
            c.as_str()
                .map(str::to_string)
                .ok_or_else(|| bad("non-string column name"))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for r in v["rows"].as_array().ok_or_else(|| bad("missing 'rows'"))? {
        let r = r.as_array().ok_or_else(|| bad("row is not an array"))?;
        if r.len() != columns.len() {
            return Err(bad("row length differs from column count"));
        }
        let cells = r
            .iter()
            .map(|c| match c {
                serde_json::Value::Null => Ok(Cell::Num(f64::NAN)),
                serde_json::Value::Bool(b) => Ok(Cell::Bool(*b)),
                serde_json::Value::Number(n) => Ok(match n.as_i64() {
                    Some(i) => Cell::Int(i),
                    None => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                }),
                _ => Err(bad("unexpected cell type")),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(cells);
    }
    Ok(Table { columns, rows })
}

/// Creates the output directory if needed.
pub fn prepare_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

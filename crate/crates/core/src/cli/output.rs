//! Result tables and their CSV / JSON encodings.
//!
//! Floats are written in their shortest round-tripping decimal form, so a
//! JSON results file read back with [`Results::from_json`] holds the same
//! bit patterns.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::{Format, SCHEMA_VERSION};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Bitwise comparison for floats.
    pub fn identical(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Float(a), Cell::Float(b)) => a.to_bits() == b.to_bits(),
            _ => self == other,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub schema_version: u32,
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, f64>,
}

impl Results {
    pub fn new(command: &str, columns: Vec<String>) -> Self {
        Self { schema_version: SCHEMA_VERSION, command: command.into(), columns, rows: Vec::new(), summary: BTreeMap::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSystem(format!("results file: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidSystem(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidSystem(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    /// Same shape and bitwise-equal cells.
    pub fn identical(&self, other: &Results) -> bool {
        self.command == other.command
            && self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y)))
            && self.summary.len() == other.summary.len()
            && self.summary.iter().zip(&other.summary).all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        out.write_all(self.render(format)?.as_bytes())
            .map_err(|e| Error::InvalidSystem(format!("write failed: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_bitwise() {
        let mut r = Results::new("spectrum", vec!["x".into(), "n".into(), "ok".into(), "err".into()]);
        for x in [0.1, 1.0 / 3.0, -2.25, 1e-300, 5e-324, f64::MAX, -0.0] {
            r.push(vec![x.into(), 7usize.into(), true.into(), Cell::Null]);
        }
        r.summary.insert("peak".into(), std::f64::consts::PI);
        let back = Results::from_json(&r.to_json()).unwrap();
        assert!(r.identical(&back));
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn csv_has_header_and_plain_cells() {
        let mut r = Results::new("scatter", vec!["lambda [1/length^2]".into(), "note".into()]);
        r.push(vec![(-1.5).into(), "a, b".into()]);
        let text = r.to_csv().unwrap();
        assert_eq!(text, "lambda [1/length^2],note\n-1.5,\"a, b\"\n");
    }
}

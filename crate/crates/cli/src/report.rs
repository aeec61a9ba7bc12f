use std::fmt::Write as _;

use glspace_core::ReportRecord;
use serde_json::{json, Value};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Self::Empty, Self::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

/// 17 significant digits, so every f64 round-trips.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON has no infinities; they are spelled out as strings.
pub fn json_float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_float(x))
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Num(x) => format_float(*x),
            Self::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Self::Text(s) => s.clone(),
            Self::Flag(b) => b.to_string(),
            Self::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num(x) => json_float(*x),
            Self::Text(s) => json!(s),
            Self::Flag(b) => json!(b),
            Self::Empty => Value::Null,
        }
    }
}

/// What a command hands back for writing.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Command-specific summary object.
    pub result: Value,
    pub records: Vec<ReportRecord>,
    /// Extra `# key: value` lines for CSV output.
    pub notes: Vec<(String, String)>,
    pub pass: bool,
    pub summary: String,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            result: Value::Null,
            records: Vec::new(),
            notes: Vec::new(),
            pass: true,
            summary: String::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        let cfg = serde_json::to_string(config).expect("config serializes");
        let _ = writeln!(out, "# command: {}", config.command);
        let _ = writeln!(out, "# seed: {}", config.seed);
        let _ = writeln!(out, "# config: {cfg}");
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "# pass: {}", self.pass);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "command": config.command,
            "seed": config.seed,
            "config": config,
            "pass": self.pass,
            "summary": self.summary,
            "result": self.result,
            "columns": self.columns,
            "rows": rows,
            "records": self.records,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        for x in [0.364696_f64, 1e-300, std::f64::consts::PI] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}

//! CSV and JSON rendering, and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use ppm_holevo::DiffusionStrength;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Significant digits of every real printed to CSV.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Kappa(DiffusionStrength),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_g(*v, CSV_DIGITS),
            Cell::Kappa(k) if k.is_infinite() => "inf".to_string(),
            Cell::Kappa(k) => format_g(k.value(), CSV_DIGITS),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Real(v) => real(*v),
            Cell::Kappa(k) => kappa(*k),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// A finite real, or `null`.
pub fn real(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn kappa(k: DiffusionStrength) -> Value {
    serde_json::to_value(k).expect("kappa serializes")
}

/// `%g`-style formatting: `digits` significant digits, trailing zeros
/// dropped, scientific notation outside `1e-5 <= |v| < 10^digits`.
pub fn format_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One command's result: a table for CSV plus extra JSON members.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub extra: Map<String, Value>,
}

impl Document {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Document {
            command,
            columns,
            rows: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"schema_version": 1, "command": ..., "columns": [...], "rows": [{...}], ...extra}`.
    pub fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        top.insert("command".into(), Value::from(self.command));
        top.insert(
            "columns".into(),
            Value::from(
                self.columns
                    .iter()
                    .map(|c| Value::from(*c))
                    .collect::<Vec<_>>(),
            ),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        top.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            top.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json renders");
        s.push('\n');
        s
    }
}

/// Writes to stdout, or to `path` through a temporary file in the same
/// directory that is renamed into place.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

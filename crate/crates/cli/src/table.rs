//! Output model shared by every subcommand: comment-line metadata, a
//! header row, typed cells. One writer per format so runs with the same
//! inputs produce byte-identical files.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// 12 significant digits for every float the tool emits. Wide enough to
/// compare runs across rebuilds, narrow enough to hide the last-bit noise
/// of reassociated parallel sums.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.11e}")
}

#[derive(Debug, Clone)]
pub enum Cell {
    U(u64),
    F(f64),
    S(String),
    Empty,
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::U(u64::from(v))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map(Cell::F).unwrap_or(Cell::Empty)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => sig12(*v),
            Cell::S(v) => v.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U(v) => json!(*v),
            Cell::F(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::S(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Table {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn meta_f(&mut self, key: &str, value: f64) {
        self.meta(key, sig12(value));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in {}", self.command);
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# pleijel-lab v{} schema=1", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command={}", self.command);
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        json!({
            "tool": "pleijel-lab",
            "version": env!("CARGO_PKG_VERSION"),
            "schema": 1,
            "command": self.command,
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect::<Vec<_>>(),
        })
    }
}

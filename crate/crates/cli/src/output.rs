//! Self-describing CSV and JSON tables.

use serde_json::{Map, Value};

use crate::config::Format;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
    /// Quantity not defined for this row.
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            _ => None,
        }
    }
}

/// `%.12g`-style rendering: fixed notation for moderate exponents, trailing
/// zeros trimmed, scientific otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Values of a column; `None` for cells that are not numbers.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        let i = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }
}

/// One command's output with its provenance header.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub notes: Vec<String>,
    pub table: Table,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# coherent-id {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# config_sha256: {}\n", self.config_hash));
        out.push_str(&format!("# seed: {}\n", self.seed));
        for n in &self.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        out.push_str(&self.table.columns.join(","));
        out.push('\n');
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.table.columns.iter().zip(row) {
                    obj.insert((*c).to_owned(), json_cell(v));
                }
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config_sha256": self.config_hash,
            "seed": self.seed,
            "notes": self.notes,
            "columns": self.table.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Num(x) => format_number(*x),
        Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
        Cell::Text(t) => t.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(i) => Value::from(*i),
        // Non-finite values have no JSON number; keep the CSV spelling.
        Cell::Num(x) if !x.is_finite() => Value::from(format_number(*x)),
        Cell::Num(x) => Value::from(format_number(*x).parse::<f64>().expect("round trip")),
        Cell::Text(t) => Value::from(t.clone()),
        Cell::Bool(b) => Value::from(*b),
        Cell::Empty => Value::Null,
    }
}

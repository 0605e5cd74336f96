use std::collections::BTreeMap;
use std::fmt::Write as _;

use cotzeta::{PiValue, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Coeff {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Exact {
    pub d: Value,
    pub pi_power: i32,
    pub coeff: Coeff,
}

impl Exact {
    pub fn from_pi_value(v: &PiValue) -> Self {
        Self {
            d: int_json(v.coeff.d()),
            pi_power: v.pi_power,
            coeff: Coeff {
                a: ratio_string(v.coeff.a()),
                b: ratio_string(v.coeff.b()),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckOut {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOut {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// The machine-readable record of one run.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub input: BTreeMap<String, Value>,
    pub exact: Option<Exact>,
    pub decimal: Option<String>,
    pub precision_bits: u32,
    pub checks: Vec<CheckOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<BTreeMap<String, Value>>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

/// Everything a command produces; rendered once in the requested format.
#[derive(Debug, Clone)]
pub struct Report {
    pub envelope: Envelope,
    pub header: Vec<String>,
    pub table: Vec<Vec<String>>,
    pub text: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: BTreeMap<String, Value>, prec: u32) -> Self {
        Self {
            envelope: Envelope {
                command: command.to_string(),
                input,
                exact: None,
                decimal: None,
                precision_bits: prec,
                checks: Vec::new(),
                rows: Vec::new(),
                details: Value::Null,
            },
            header: Vec::new(),
            table: Vec::new(),
            text: Vec::new(),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn check(&mut self, c: CheckOut) {
        self.envelope.checks.push(c);
    }

    pub fn set_header(&mut self, cols: &[&str]) {
        self.header = cols.iter().map(|s| s.to_string()).collect();
    }

    /// Adds a row to both the CSV table and the JSON `rows`, using the header
    /// as keys.
    pub fn row(&mut self, cells: Vec<String>) {
        let obj = self
            .header
            .iter()
            .zip(&cells)
            .map(|(k, v)| (k.clone(), cell_json(v)))
            .collect();
        self.envelope.rows.push(obj);
        self.table.push(cells);
    }

    pub fn all_pass(&self) -> bool {
        self.envelope.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope).expect("envelope serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        if self.header.is_empty() {
            out.push_str("name,pass,detail\n");
            for c in &self.envelope.checks {
                let _ = writeln!(out, "{},{},{}", csv_cell(&c.name), c.pass, csv_cell(&c.detail));
            }
            return out;
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        if !self.envelope.rows.is_empty() {
            let widths: Vec<usize> = (0..self.header.len())
                .map(|i| {
                    self.table
                        .iter()
                        .map(|r| r[i].len())
                        .chain([self.header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let fmt_row = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", fmt_row(&self.header));
            for row in &self.table {
                let _ = writeln!(out, "{}", fmt_row(row));
            }
        }
        for c in &self.envelope.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "{mark}  {}", c.name);
            } else {
                let _ = writeln!(out, "{mark}  {}: {}", c.name, c.detail);
            }
        }
        out
    }
}

/// An integer as a JSON number when it fits in `i64`, else as a string.
pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

/// `num/den`, always with an explicit denominator.
pub fn ratio_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn cell_json(s: &str) -> Value {
    match s.parse::<i64>() {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(s),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

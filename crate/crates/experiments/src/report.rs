use std::cmp::Ordering;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::config::{RunConfig, VariantName};
use crate::error::Result;
use crate::svg::Plot;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn cmp_key(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Float(a), Value::Float(b)) => a.total_cmp(b),
            (Value::Text(a), Value::Text(b)) => a.cmp(b),
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            _ => self.to_string().cmp(&other.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) if x.is_infinite() => f.write_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Value::Float(x) => write!(f, "{x:.14e}"),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<u32> for Value {
    fn from(i: u32) -> Self {
        Value::Int(i64::from(i))
    }
}

impl From<i32> for Value {
    fn from(i: i32) -> Self {
        Value::Int(i64::from(i))
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Reported but never fails the run.
    pub informational: bool,
    pub detail: String,
}

impl Check {
    pub fn assert(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_owned(), passed, informational: false, detail }
    }

    pub fn info(name: &str, detail: String) -> Self {
        Self { name: name.to_owned(), passed: true, informational: true, detail }
    }

    pub fn within(name: &str, value: f64, range: [f64; 2]) -> Self {
        Self::assert(
            name,
            (range[0]..=range[1]).contains(&value),
            format!("{value:.6} in [{}, {}]", range[0], range[1]),
        )
    }

    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::assert(name, value <= bound, format!("{value:.3e} <= {bound:.3e}"))
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self::assert(name, value >= bound, format!("{value:.6} >= {bound}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let tag = match (self.informational, self.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub id: &'static str,
    pub params: Vec<(String, Value)>,
    pub columns: Vec<String>,
    /// Leading columns that identify a row; rows are sorted by them.
    pub key_columns: usize,
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub plot: Option<Plot>,
}

impl ExperimentReport {
    pub fn new(id: &'static str, cfg: &RunConfig, columns: &[&str], key_columns: usize) -> Self {
        Self {
            id,
            params: parameter_tuple(cfg),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            key_columns,
            rows: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            plot: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.params.push((name.to_owned(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.id);
        self.rows.push(row);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.passed)
    }

    pub fn sort_rows(&mut self) {
        let key = self.key_columns;
        self.rows.sort_by(|a, b| {
            a[..key]
                .iter()
                .zip(&b[..key])
                .map(|(x, y)| x.cmp_key(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
    }

    /// Values of a named column in row order.
    pub fn column(&self, name: &str) -> Option<Vec<Value>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].clone()).collect())
    }

    pub fn float_column(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.iter().map(Value::as_f64).collect()
    }

    pub fn csv_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.csv", self.id))
    }

    /// Writes the rows, each prefixed by the parameter tuple.
    pub fn write_csv(&self, dir: &Path) -> Result<PathBuf> {
        let path = self.csv_path(dir);
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_path(&path)?;
        let header = self.params.iter().map(|(n, _)| n.as_str()).chain(self.columns.iter().map(String::as_str));
        w.write_record(header)?;
        let mut sorted = self.clone();
        sorted.sort_rows();
        for row in &sorted.rows {
            let record = self.params.iter().map(|(_, v)| v).chain(row).map(Value::to_string);
            w.write_record(record)?;
        }
        w.flush()?;
        Ok(path)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("[{}] {}\n", self.id, if self.passed() { "PASS" } else { "FAIL" });
        for c in &self.checks {
            out.push_str(&format!("  {c}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn parameter_tuple(cfg: &RunConfig) -> Vec<(String, Value)> {
    let variant = match cfg.model.variant {
        VariantName::Gchn => "gchn",
        VariantName::Dp => "dp",
    };
    vec![
        ("N".into(), cfg.grid.n.into()),
        ("M".into(), Value::Int(cfg.grid.m)),
        ("k".into(), cfg.model.k.into()),
        ("variant".into(), variant.into()),
        ("s".into(), cfg.besov.s.into()),
        ("p".into(), cfg.besov.p.into()),
        ("N_modes".into(), cfg.n_modes().into()),
        ("epsilon".into(), cfg.sweep.epsilon.into()),
        ("seed".into(), Value::Int(cfg.seed as i64)),
    ]
}

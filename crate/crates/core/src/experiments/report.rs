use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// A parameter value in a report row.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<i32> for Param {
    fn from(v: i32) -> Self {
        Self::Int(v.into())
    }
}

impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

/// Whether a row is checked, and if so how it came out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Reported for context; not part of the pass/fail verdict.
    Info,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment_id: String,
    pub params: BTreeMap<String, Param>,
    pub measured: BTreeMap<String, f64>,
    pub outcome: Outcome,
}

impl Row {
    pub fn new(experiment_id: impl Into<String>) -> Self {
        Self {
            experiment_id: experiment_id.into(),
            params: BTreeMap::new(),
            measured: BTreeMap::new(),
            outcome: Outcome::Info,
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<Param>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn measure(mut self, name: &str, value: f64) -> Self {
        self.measured.insert(name.to_string(), value);
        self
    }

    pub fn check(mut self, ok: bool) -> Self {
        self.outcome = Outcome::from_bool(ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<Row>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(config_hash: String) -> Self {
        Self {
            rows: Vec::new(),
            provenance: Provenance {
                config_hash,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(Row::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.passed())
    }

    /// Rows whose id starts with `prefix`.
    pub fn rows_with<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Row> {
        self.rows.iter().filter(move |r| r.experiment_id.starts_with(prefix))
    }

    pub fn extend(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
    }

    /// The CSV text: `experiment_id`, every parameter name, every measured
    /// name (each group sorted), then `pass`. Cells a row lacks are empty.
    pub fn to_csv(&self) -> String {
        let params: BTreeSet<&str> = self.rows.iter().flat_map(|r| r.params.keys().map(String::as_str)).collect();
        let measured: BTreeSet<&str> = self.rows.iter().flat_map(|r| r.measured.keys().map(String::as_str)).collect();
        let mut out = String::new();
        let header: Vec<String> = std::iter::once("experiment_id".to_string())
            .chain(params.iter().map(|p| escape(p)))
            .chain(measured.iter().map(|m| escape(m)))
            .chain(std::iter::once("pass".to_string()))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![escape(&row.experiment_id)];
            for p in &params {
                cells.push(row.params.get(*p).map(format_param).unwrap_or_default());
            }
            for m in &measured {
                cells.push(row.measured.get(*m).map(|v| format_float(*v)).unwrap_or_default());
            }
            cells.push(row.outcome.label().to_string());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, so every `f64` round-trips.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn format_param(p: &Param) -> String {
    match p {
        Param::Int(i) => i.to_string(),
        Param::Float(f) => format_float(*f),
        Param::Text(s) => escape(s),
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        let mut out = String::from("\"");
        for c in s.chars() {
            if c == '"' {
                out.push('"');
            }
            out.push(c);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

/// Writes [`ExperimentReport::to_csv`] to `path`.
pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One line per row, for terminals.
pub fn summary(report: &ExperimentReport) -> String {
    let mut s = String::new();
    for row in &report.rows {
        let _ = write!(s, "{:<5} {}", row.outcome.label(), row.experiment_id);
        for (k, v) in &row.params {
            let _ = write!(s, " {k}={}", format_param(v));
        }
        for (k, v) in &row.measured {
            let _ = write!(s, " {k}={v:.4e}");
        }
        s.push('\n');
    }
    s
}

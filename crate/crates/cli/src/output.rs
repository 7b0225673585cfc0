//! Result tables, cell statuses, atomic file writes and the run manifest.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Exploratory,
    /// Hypotheses unmet or the case is not covered; the reason goes to `note`.
    Skipped(&'static str),
}

impl Status {
    pub fn label(&self) -> String {
        match self {
            Self::Pass => "pass".into(),
            Self::Fail => "fail".into(),
            Self::Exploratory => "exploratory".into(),
            Self::Skipped(why) => format!("skipped({why})"),
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    /// Status for a library error: unmet hypotheses and unsupported cases are
    /// skipped, anything else is a failure.
    pub fn from_error(e: &splinewidth::Error) -> Self {
        use splinewidth::Error as E;
        match e {
            E::Hypothesis(_) => Self::Skipped("hypothesis"),
            E::Unsupported(_) | E::EmptySpace { .. } | E::InvalidSpace(_) | E::DerivativeOrder { .. } => Self::Skipped("unsupported"),
            _ => Self::Fail,
        }
    }

    /// Combined status of several rows: any failure fails, any pass passes.
    pub fn combine<'a>(all: impl IntoIterator<Item = &'a Status>) -> Status {
        let all: Vec<&Status> = all.into_iter().collect();
        for s in [Status::Fail, Status::Pass, Status::Exploratory] {
            if all.iter().any(|x| **x == s) {
                return s;
            }
        }
        all.first().map(|s| (*s).clone()).unwrap_or(Status::Exploratory)
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Self::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Self::Empty, Self::Float)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Self::Text(v.into())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

impl From<&Status> for Value {
    fn from(v: &Status) -> Self {
        Self::Text(v.label())
    }
}

/// 17 significant digits, so every value round-trips.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(v: &Value, out: &mut String) {
    match v {
        Value::Int(i) => write!(out, "{i}").unwrap(),
        Value::Float(x) => out.push_str(&format_float(*x)),
        Value::Text(s) if s.contains([',', '"', '\n']) => {
            out.push('"');
            out.push_str(&s.replace('"', "\"\""));
            out.push('"');
        }
        Value::Text(s) => out.push_str(s),
        Value::Empty => {}
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&'static str]) -> Self {
        Self { name: name.into(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                csv_field(v, &mut s);
            }
            s.push('\n');
        }
        s
    }
}

/// A line plot drawn from columns of one table, one polyline per value of
/// the `series` column.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub name: String,
    pub table: String,
    pub x: String,
    pub y: String,
    pub series: Vec<String>,
    pub log_y: bool,
    pub title: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub cell: String,
    pub status: String,
}

/// Everything one subcommand produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub plots: Vec<PlotSpec>,
    pub summary: serde_json::Value,
    pub cells: Vec<(String, Status)>,
}

impl Outcome {
    pub fn failed(&self) -> bool {
        self.cells.iter().any(|(_, s)| *s == Status::Fail)
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    tool: &'static str,
    version: &'static str,
    config_sha256: String,
    threads: usize,
    wall_time_s: f64,
    counts: std::collections::BTreeMap<String, usize>,
    cells: Vec<CellRecord>,
    files: Vec<String>,
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path)
}

pub struct RunInfo<'a> {
    pub subcommand: &'a str,
    pub config_text: &'a str,
    pub threads: usize,
    pub wall_time_s: f64,
}

/// Writes CSVs, SVGs, the JSON summary and the manifest; returns the paths.
pub fn write_outcome(dir: &Path, outcome: &Outcome, info: &RunInfo) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut emit = |name: String, bytes: &[u8]| -> std::io::Result<()> {
        let path = dir.join(&name);
        write_atomic(&path, bytes)?;
        files.push(name);
        Ok(())
    };
    for t in &outcome.tables {
        emit(format!("{}.csv", t.name), t.to_csv().as_bytes())?;
    }
    for p in &outcome.plots {
        let table = outcome.tables.iter().find(|t| t.name == p.table).expect("plot of a known table");
        // drawn from the CSV text so the figure can be regenerated offline
        match crate::svg::plot_csv(&table.to_csv(), p) {
            Ok(svg) => emit(format!("{}.svg", p.name), svg.as_bytes())?,
            Err(e) => eprintln!("warning: plot {} not written: {e}", p.name),
        }
    }
    let summary = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    emit(format!("{}_summary.json", info.subcommand), summary.as_bytes())?;

    let mut counts = std::collections::BTreeMap::new();
    for (_, s) in &outcome.cells {
        *counts.entry(s.label()).or_insert(0) += 1;
    }
    let manifest = Manifest {
        subcommand: info.subcommand,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: hex(&Sha256::digest(info.config_text.as_bytes())),
        threads: info.threads,
        wall_time_s: info.wall_time_s,
        counts,
        cells: outcome.cells.iter().map(|(c, s)| CellRecord { cell: c.clone(), status: s.label() }).collect(),
        files: files.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(&dir.join("manifest.json"), text.as_bytes())?;
    files.push("manifest.json".into());
    Ok(files.into_iter().map(|f| dir.join(f)).collect())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

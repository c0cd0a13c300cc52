use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::basis::ConstantEstimate;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

/// One pass/fail line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Positive when the check holds.
    pub margin: f64,
    pub detail: String,
}

impl Check {
    /// `value <= bound + tol`.
    pub fn at_most(name: &str, value: f64, bound: f64, tol: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: value <= bound + tol,
            margin: bound - value,
            detail: detail.into(),
        }
    }

    pub fn at_least(name: &str, value: f64, bound: f64, tol: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: value + tol >= bound,
            margin: value - bound,
            detail: detail.into(),
        }
    }

    pub fn flag(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            margin: if pass { 1.0 } else { -1.0 },
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Seconds since the epoch. The only field that differs between reruns.
    pub timestamp: u64,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub truncation: Option<usize>,
    pub estimates: BTreeMap<String, ConstantEstimate>,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>, tolerances: Tolerances, truncation: Option<usize>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            seed,
            tolerances,
            truncation,
            estimates: BTreeMap::new(),
            checks: Vec::new(),
            data: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn estimate(&mut self, name: &str, e: ConstantEstimate) {
        self.estimates.insert(name.into(), e);
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.pass;
        self.checks.push(c);
    }

    pub fn data<T: Serialize>(&mut self, key: &str, v: &T) {
        let v = serde_json::to_value(v).expect("report data serializes");
        self.data.insert(key.into(), v);
    }
}

/// A CSV file to emit next to the report.
pub struct Table {
    pub name: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&str]) -> Self {
        Table {
            name,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
}

/// Writes `report.json` and every table into `dir`; returns the files written.
pub fn emit_report(dir: &Path, report: &Report, tables: &[Table]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    written.push(path);
    for t in tables {
        let path = dir.join(t.name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        w.write_record(&t.header).map_err(|e| io_err(&path, e))?;
        for r in &t.rows {
            w.write_record(r).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

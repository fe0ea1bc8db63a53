//! JSON report and CSV tables.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use toeplitz_triples::report::ContextValue;
use toeplitz_triples::{BoundReport, Extended};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub paper_anchor: String,
    pub lhs: Extended,
    pub rhs: Extended,
    pub slack: Extended,
    pub pass: bool,
    pub context: BTreeMap<String, ContextValue>,
}

impl Entry {
    /// Copies a check, tagging its context with the experiment it came from.
    pub fn from_report(r: BoundReport, experiment: &str, index: usize) -> Self {
        let mut context = r.context;
        context.insert("experiment".into(), ContextValue::Text(experiment.into()));
        context.insert("experiment_index".into(), ContextValue::Integer(index as i64));
        context.insert("tolerance".into(), ContextValue::Number(Extended::from_f64(r.tolerance)));
        Entry {
            name: r.name,
            paper_anchor: r.anchor,
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            pass: r.pass,
            context,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario_hash: String,
    pub seed: u64,
    pub results: Vec<Entry>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.results.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn scenario_hash(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// A named CSV table produced by one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(dir.join(&self.file_name))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }
}

/// Formats a float with '.' as the decimal separator and `inf` for infinity.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

pub fn write_report(dir: &Path, report: &Report, tables: &[Table]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::File::create(dir.join("report.json"))?;
    f.write_all(report.to_json().as_bytes())?;
    for t in tables {
        t.write_to(dir)?;
    }
    Ok(())
}

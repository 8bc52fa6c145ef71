use std::fmt::Write as _;
use std::path::Path;

use super::ComparisonReport;
use crate::error::{Error, Result};
use crate::factorize::FactorizationResult;

// Numbers are written with Rust's shortest round-trip formatting, so every
// file re-parses to the exact in-memory values.

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// `day_index,basis_0,…,basis_{k-1}`, one row per day.
pub fn export_basis_vectors(result: &FactorizationResult, day_axis: &[u32], path: impl AsRef<Path>) -> Result<()> {
    let w = &result.w;
    if w.rows() != day_axis.len() {
        return Err(Error::Dimension(format!(
            "basis has {} rows, day axis {} entries",
            w.rows(),
            day_axis.len()
        )));
    }
    let mut out = String::from("day_index");
    for j in 0..w.cols() {
        write!(out, ",basis_{j}").unwrap();
    }
    out.push('\n');
    for (r, day) in day_axis.iter().enumerate() {
        write!(out, "{day}").unwrap();
        for x in w.row(r) {
            write!(out, ",{x}").unwrap();
        }
        out.push('\n');
    }
    write_file(path.as_ref(), &out)
}

/// `method,cluster_index,count` for every method that ran.
pub fn export_assignment_histogram(report: &ComparisonReport, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("method,cluster_index,count\n");
    for m in &report.methods {
        if let Some(h) = m.histogram() {
            for (j, count) in h.iter().enumerate() {
                writeln!(out, "{},{j},{count}", m.method).unwrap();
            }
        }
    }
    write_file(path.as_ref(), &out)
}

/// `player_id,cluster_index`.
pub fn export_labels(player_ids: &[String], labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Format {
        path: path.to_owned(),
        message: e.to_string(),
    };
    writer.write_record(["player_id", "cluster_index"]).map_err(io)?;
    for (id, label) in player_ids.iter().zip(labels) {
        writer.write_record([id.as_str(), &label.to_string()]).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Format {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn write_report_json(report: &ComparisonReport, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Format {
        path: path.as_ref().to_owned(),
        message: e.to_string(),
    })?;
    text.push('\n');
    write_file(path.as_ref(), &text)
}

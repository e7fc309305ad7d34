//! CSV persistence for traces, particle snapshots and LASSO design data.
//!
//! Floats are written with 17 significant digits so that a write/read cycle
//! reproduces every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const TRACE_HEADER: &str = "iter,gamma,ksd2,mean_grad_norm,elapsed_ms";

/// Diagnostics for one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub gamma: f64,
    pub ksd2: f64,
    pub mean_grad_norm: f64,
    pub elapsed_ms: f64,
}

#[inline]
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_to_csv(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.iter,
            fmt_f64(r.gamma),
            fmt_f64(r.ksd2),
            fmt_f64(r.mean_grad_norm),
            fmt_f64(r.elapsed_ms)
        );
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == TRACE_HEADER => {}
        other => {
            return Err(Error::Argument(format!(
                "trace header mismatch: expected {TRACE_HEADER:?}, got {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Argument(format!("trace line {}: expected 5 fields", i + 2)));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Argument(format!("trace line {}: {e}", i + 2)))
            };
            Ok(TraceRecord {
                iter: fields[0]
                    .trim()
                    .parse()
                    .map_err(|e| Error::Argument(format!("trace line {}: {e}", i + 2)))?,
                gamma: num(fields[1])?,
                ksd2: num(fields[2])?,
                mean_grad_norm: num(fields[3])?,
                elapsed_ms: num(fields[4])?,
            })
        })
        .collect()
}

/// One row per particle, `d` comma-separated columns, no header.
pub fn particles_to_csv(positions: &[f64], d: usize) -> String {
    let mut out = String::new();
    for row in positions.chunks_exact(d) {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn snapshot_name(iter: usize) -> String {
    format!("particles_{iter:06}.csv")
}

/// Row-major matrix from a headerless comma-separated file.
/// Returns `(values, rows, cols)`.
pub fn read_matrix_csv(path: &Path) -> Result<(Vec<f64>, usize, usize)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(&text).map_err(|msg| Error::Argument(format!("{}: {msg}", path.display())))
}

pub(crate) fn parse_matrix_csv(text: &str) -> std::result::Result<(Vec<f64>, usize, usize), String> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(format!("line {}: expected {c} columns, got {}", i + 1, row.len()))
            }
            _ => {}
        }
        values.extend(row);
        rows += 1;
    }
    match cols {
        Some(c) => Ok((values, rows, c)),
        None => Err("empty matrix".into()),
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn ensure_dir(path: &Path) -> Result<PathBuf> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

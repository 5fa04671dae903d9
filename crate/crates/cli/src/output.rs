//! Trace CSV, summary CSV and the plain-text table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fracprog::{IterRecord, SolverTrace};

use crate::CliError;

pub const TRACE_HEADER: &str = "iter,objective,surrogate,aux_norm,elapsed_ms";
pub const SUMMARY_HEADER: &str = "seed,method,value,iterations,status,detail";

/// Final result of one method on one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub seed: u64,
    pub method: String,
    pub value: f64,
    /// `None` for baselines and oracles.
    pub iterations: Option<usize>,
    pub status: String,
    /// Space-separated `key=value` pairs; list items are joined by `;`.
    pub detail: String,
}

/// Shortest scientific form that parses back to the same bits.
pub fn sci(v: f64) -> String {
    format!("{v:e}")
}

pub fn sci_list(values: &[f64]) -> String {
    values.iter().map(|v| sci(*v)).collect::<Vec<_>>().join(";")
}

pub fn render_trace(trace: &SolverTrace) -> String {
    let mut out = String::new();
    if !trace.variant.is_monotone() {
        let _ = writeln!(out, "# variant={} exempt from the monotone check", trace.variant);
    }
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(out, "{},{},{},{},{}", r.iter, sci(r.objective), sci(r.surrogate), sci(r.aux_norm), sci(r.elapsed_ms));
    }
    out
}

pub fn emit_trace_csv(trace: &SolverTrace, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_trace(trace)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Reads a trace CSV back; `#` lines are skipped and the header must match.
pub fn parse_trace_csv(text: &str) -> Result<Vec<IterRecord>, CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some(TRACE_HEADER) {
        return Err(CliError::Config("trace CSV header mismatch".into()));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = || CliError::Config(format!("malformed trace row {}: `{line}`", n + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(IterRecord {
                iter: f[0].parse().map_err(|_| bad())?,
                objective: num(f[1])?,
                surrogate: num(f[2])?,
                aux_norm: num(f[3])?,
                elapsed_ms: num(f[4])?,
            })
        })
        .collect()
}

pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let iters = r.iterations.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{iters},{},{}", r.seed, r.method, sci(r.value), r.status, r.detail);
    }
    out
}

/// Fixed-width table with six significant digits.
pub fn render_table(title: &str, rows: &[SummaryRow]) -> String {
    let head = ["seed", "method", "value", "iters", "status"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.seed.to_string(),
                r.method.clone(),
                format!("{:.6e}", r.value),
                r.iterations.map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
                r.status.clone(),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |items: [&str; 5]| -> String {
        let parts: Vec<String> = items.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = format!("{title}\n{}\n", line(head));
    let _ = writeln!(out, "{}", width.map(|w| "-".repeat(w)).join("  "));
    for row in &cells {
        let _ = writeln!(out, "{}", line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
    }
    out
}

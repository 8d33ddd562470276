use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{BenchRow, ScalingReport};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "problem,algorithm,n,delta,cost,wall_seconds,answer,seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::UnsupportedCombination(format!("unknown format '{s}'"))),
        }
    }
}

/// Serializes a report. Floats use the shortest round-trip representation,
/// so output depends only on the report's values.
pub fn render(report: &ScalingReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &report.rows {
                let delta = r.delta.map(|d| d.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{:?},{:?},{},{}",
                    report.problem, report.algorithm, r.n, delta, r.cost, r.wall_seconds, r.answer, r.seed
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

/// Writes the rendered report to `path`.
pub fn report_emit(report: &ScalingReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads rows back from CSV and refits. Problem and algorithm come from the
/// first row; an empty body yields an empty report.
pub fn parse_csv(text: &str) -> Result<ScalingReport> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::parse(1, "missing CSV header")),
    }
    let mut problem = String::new();
    let mut algorithm = String::new();
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::parse(lineno, format!("expected 8 fields, found {}", f.len())));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::parse(lineno, format!("bad {what} '{s}'")))
        };
        if rows.is_empty() {
            problem = f[0].to_string();
            algorithm = f[1].to_string();
        }
        rows.push(BenchRow {
            n: f[2].parse().map_err(|_| Error::parse(lineno, format!("bad n '{}'", f[2])))?,
            delta: if f[3].is_empty() {
                None
            } else {
                Some(f[3].parse().map_err(|_| Error::parse(lineno, format!("bad delta '{}'", f[3])))?)
            },
            cost: num(f[4], "cost")?,
            wall_seconds: num(f[5], "wall_seconds")?,
            answer: f[6].parse().map_err(|_| Error::parse(lineno, format!("bad answer '{}'", f[6])))?,
            seed: f[7].parse().map_err(|_| Error::parse(lineno, format!("bad seed '{}'", f[7])))?,
        });
    }
    Ok(ScalingReport::new(&problem, &algorithm, rows))
}

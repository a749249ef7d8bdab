//! CSV output. Floats use Rust's shortest round-trip `{:e}` form and missing
//! values are empty fields, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::Problem;
use crate::error::HarnessError;
use crate::experiment::{ExperimentOutput, ResultRow, Series, SummaryRow};

pub const RESULTS_HEADER: &str = "problem,solver,seed,rel_err_stop,rel_err_best,k_stop,stopO,stopOvar3,wall_ms";
pub const SERIES_HEADER: &str = "iter,rel_err,rel_res";
pub const SUMMARY_HEADER: &str = "solver,runs,rel_err_stop,rel_err_best,k_stop,stopO,stopOvar3";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_e(v: Option<f64>) -> String {
    v.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:e},{:e},{},{},{},{:e}",
            r.problem.tag(),
            r.solver.tag(),
            r.seed,
            r.rel_err_stop,
            r.rel_err_best,
            opt(r.k_stop),
            opt(r.stop_o),
            opt(r.stop_o_var3),
            r.wall_ms
        );
    }
    out
}

pub fn series_csv(series: &Series) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for (k, res) in series.rel_res.iter().enumerate() {
        let _ = writeln!(out, "{k},{},{res:e}", opt_e(series.rel_err.get(k).copied()));
    }
    out
}

pub fn summary_csv(summary: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for s in summary {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{},{},{}",
            s.solver.tag(),
            s.runs,
            s.rel_err_stop,
            s.rel_err_best,
            opt_e(s.k_stop),
            opt_e(s.stop_o),
            opt_e(s.stop_o_var3)
        );
    }
    out
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<(), HarnessError> {
    fs::write(path, results_csv(rows)).map_err(|e| HarnessError::io(path, e))
}

pub fn emit_convergence_series(series: &Series, path: &Path) -> Result<(), HarnessError> {
    fs::write(path, series_csv(series)).map_err(|e| HarnessError::io(path, e))
}

/// Writes `results.csv`, `summary.csv` and, when requested, one
/// `conv_<problem>_<solver>_<seed>.csv` per cell. Returns the files written.
pub fn write_outputs(
    out: &ExperimentOutput,
    problem: Problem,
    dir: &Path,
    convergence: bool,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = vec![dir.join("results.csv"), dir.join("summary.csv")];
    emit_csv(&out.rows, &written[0])?;
    fs::write(&written[1], summary_csv(&out.summary)).map_err(|e| HarnessError::io(&written[1], e))?;
    if convergence {
        for s in &out.series {
            let path = dir.join(format!("conv_{}_{}_{}.csv", problem.tag(), s.solver.tag(), s.seed));
            emit_convergence_series(s, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn field_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Csv { line, message: message.into() }
}

fn parse_opt<T: std::str::FromStr>(s: &str, line: usize) -> Result<Option<T>, HarnessError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| field_err(line, format!("bad field '{s}'")))
}

fn parse_req<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, HarnessError> {
    parse_opt(s, line)?.ok_or_else(|| field_err(line, "missing field"))
}

/// Reads a results file written by [`emit_csv`].
pub fn parse_results(text: &str) -> Result<Vec<ResultRow>, HarnessError> {
    let mut lines = text.lines();
    if lines.next() != Some(RESULTS_HEADER) {
        return Err(field_err(1, "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let line = i + 2;
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 9 {
                return Err(field_err(line, format!("expected 9 fields, found {}", f.len())));
            }
            Ok(ResultRow {
                problem: f[0].parse().map_err(|m: String| field_err(line, m))?,
                solver: f[1].parse().map_err(|m: String| field_err(line, m))?,
                seed: parse_req(f[2], line)?,
                rel_err_stop: parse_req(f[3], line)?,
                rel_err_best: parse_req(f[4], line)?,
                k_stop: parse_opt(f[5], line)?,
                stop_o: parse_opt(f[6], line)?,
                stop_o_var3: parse_opt(f[7], line)?,
                wall_ms: parse_req(f[8], line)?,
            })
        })
        .collect()
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>, HarnessError> {
    parse_results(&fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?)
}

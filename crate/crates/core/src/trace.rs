//! Per-checkpoint metrics and their CSV serialization.
//!
//! The CSV layout is fixed:
//!
//! ```text
//! iter,grad_evals,a,b,potential,grad_x_norm,grad_y_norm,dist_to_saddle_sq
//! ```
//!
//! Optional metrics (`a`, `b`, `potential` on problems without exact `g`/`g*`,
//! `dist_to_saddle_sq` without a stored saddle) serialize as empty fields.
//! Floats are written with 17 significant digits so a written trace re-parses
//! bit-exactly.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};

pub const TRACE_CSV_HEADER: &str =
    "iter,grad_evals,a,b,potential,grad_x_norm,grad_y_norm,dist_to_saddle_sq";

/// Metrics for one checkpoint of a solver run.
///
/// `grad_evals` counts component-gradient evaluations consumed by the
/// algorithm itself (a full gradient on an `n`-component problem counts `n`;
/// diagnostics are free). Dividing by `n` gives full-gradient equivalents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: u64,
    pub grad_evals: u64,
    /// `g(x_t) - g*`, when the problem has an exact `g` and `g*`.
    pub a: Option<f64>,
    /// `g(x_t) - f(x_t, y_t)`, under the same condition.
    pub b: Option<f64>,
    /// `a + weight * b`.
    pub potential: Option<f64>,
    pub grad_x_norm: f64,
    pub grad_y_norm: f64,
    /// Squared distance to the problem's stored saddle point, if any.
    pub dist_to_saddle_sq: Option<f64>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn parse_opt(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|e| Error::CsvFormat(format!("bad float `{field}`: {e}")))
}

fn parse_f64(field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|e| Error::CsvFormat(format!("bad float `{field}`: {e}")))
}

fn parse_u64(field: &str) -> Result<u64> {
    field
        .parse::<u64>()
        .map_err(|e| Error::CsvFormat(format!("bad integer `{field}`: {e}")))
}

pub fn write_trace_csv<W: Write>(mut w: W, trace: &[TraceRecord]) -> Result<()> {
    writeln!(w, "{TRACE_CSV_HEADER}")?;
    for r in trace {
        writeln!(
            w,
            "{},{},{},{},{},{:.16e},{:.16e},{}",
            r.iter,
            r.grad_evals,
            fmt_opt(r.a),
            fmt_opt(r.b),
            fmt_opt(r.potential),
            r.grad_x_norm,
            r.grad_y_norm,
            fmt_opt(r.dist_to_saddle_sq),
        )?;
    }
    Ok(())
}

pub fn read_trace_csv<R: Read>(r: R) -> Result<Vec<TraceRecord>> {
    let mut lines = BufReader::new(r).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CsvFormat("empty trace file".into()))??;
    if header.trim_end() != TRACE_CSV_HEADER {
        return Err(Error::CsvFormat(format!("unexpected header `{header}`")));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::CsvFormat(format!(
                "expected 8 fields, got {} in `{line}`",
                fields.len()
            )));
        }
        out.push(TraceRecord {
            iter: parse_u64(fields[0])?,
            grad_evals: parse_u64(fields[1])?,
            a: parse_opt(fields[2])?,
            b: parse_opt(fields[3])?,
            potential: parse_opt(fields[4])?,
            grad_x_norm: parse_f64(fields[5])?,
            grad_y_norm: parse_f64(fields[6])?,
            dist_to_saddle_sq: parse_opt(fields[7])?,
        });
    }
    Ok(out)
}

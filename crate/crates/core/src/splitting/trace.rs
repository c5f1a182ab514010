use std::io::{self, Write};

use super::engine::Status;
use crate::operators::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub x: Vector,
    pub u: Vector,
    pub v: Vector,
    /// `‖w_k‖ = ‖v_k − u_k‖`.
    pub residual: f64,
    pub shadow_error: Option<f64>,
}

/// Iteration history. `records` is empty when recording was switched off;
/// the counters and final values are always filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    /// Steps evaluated; a run stopping at `u_k` reports `k + 1`.
    pub iterations: usize,
    pub status: Status,
    pub final_residual: f64,
    pub final_shadow_error: Option<f64>,
}

impl Default for Trace {
    fn default() -> Self {
        Trace {
            records: Vec::new(),
            iterations: 0,
            status: Status::MaxIterations,
            final_residual: f64::NAN,
            final_shadow_error: None,
        }
    }
}

impl Trace {
    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.residual)
    }

    /// Writes `k,residual,shadow_error` rows; `shadow_error` is empty without a reference.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,residual,shadow_error")?;
        for r in &self.records {
            match r.shadow_error {
                Some(e) => writeln!(out, "{},{},{}", r.k, fmt_f64(r.residual), fmt_f64(e))?,
                None => writeln!(out, "{},{},", r.k, fmt_f64(r.residual))?,
            }
        }
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

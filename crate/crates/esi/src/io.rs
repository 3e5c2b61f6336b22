//! CSV writers for traces, landscape scans, and iteration logs.
//!
//! All numeric cells carry 17 significant digits, enough for every `f64`
//! to survive a parse round trip, and the writers are deterministic: the
//! same inputs always produce the same bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::optimize::IterationLog;
use crate::signal::{SampledWavelet, Trace};
use crate::Result;

/// One `f64` at full precision (17 significant digits).
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a trace as `t,value` rows.
pub fn write_trace_csv(path: &Path, trace: &Trace) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,value")?;
    for (i, v) in trace.samples().iter().enumerate() {
        writeln!(out, "{},{}", fmt_full(trace.grid().t(i)), fmt_full(*v))?;
    }
    out.flush()?;
    Ok(())
}

/// Write a sampled wavelet as `t,value` rows on its lag axis.
pub fn write_wavelet_csv(path: &Path, w: &SampledWavelet) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,value")?;
    for (i, v) in w.samples().iter().enumerate() {
        writeln!(out, "{},{}", fmt_full(w.lag_grid().t(i)), fmt_full(*v))?;
    }
    out.flush()?;
    Ok(())
}

/// One scanned slowness with the three objective values and the gradient.
/// Cells for objectives that were not requested hold NaN.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub m: f64,
    pub e_restricted: f64,
    pub e_reduced_fwi: f64,
    pub j_reduced_esi: f64,
    pub grad_j: f64,
}

/// Objective landscape sampled over a slowness grid at one penalty weight.
#[derive(Debug, Clone)]
pub struct ScanTable {
    pub alpha: f64,
    pub lambda: f64,
    pub rows: Vec<ScanRow>,
}

pub fn write_scan_csv(path: &Path, scan: &ScanTable) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "m,e_restricted,e_reduced_fwi,j_reduced_esi,grad_j")?;
    for row in &scan.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_full(row.m),
            fmt_full(row.e_restricted),
            fmt_full(row.e_reduced_fwi),
            fmt_full(row.j_reduced_esi),
            fmt_full(row.grad_j)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Write an iteration log in the layout of the published tables; the
/// iteration counter restarts at each phase change.
pub fn write_log_csv(path: &Path, log: &IterationLog) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "phase,iter,alpha,g,e,m,j,grad")?;
    let mut prev_phase = None;
    let mut iter = 0usize;
    for (phase, rec) in log.entries() {
        iter = if prev_phase == Some(*phase) { iter + 1 } else { 1 };
        prev_phase = Some(*phase);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            phase.as_str(),
            iter,
            fmt_full(rec.alpha),
            fmt_full(rec.g),
            fmt_full(rec.e),
            fmt_full(rec.m),
            fmt_full(rec.j),
            fmt_full(rec.dj_dm)
        )?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trips() {
        for &x in &[
            0.1,
            -0.0,
            1.0 / 3.0,
            std::f64::consts::TAU,
            1.6e-19,
            -f64::MIN_POSITIVE,
            f64::MAX,
        ] {
            let s = fmt_full(x);
            let back: f64 = s.parse().unwrap();
            assert!(back == x, "{x} -> {s} -> {back}");
        }
    }
}

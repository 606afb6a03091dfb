//! CSV trace files, one row per accepted FISTA step.

use std::io::Write;
use std::path::Path;

use freefista::TraceRecord;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const HEADER: &str = "algo,restart,global_iter,backtracks,tau,L_est,kappa_est,n_j,F_value,g_norm,time_s";

/// A trace row as stored on disk. `kappa_est` and `g_norm` are `NaN` except
/// on the last step of a restart block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub algo: String,
    pub restart: usize,
    pub global_iter: usize,
    pub backtracks: usize,
    pub tau: f64,
    #[serde(rename = "L_est")]
    pub l_est: f64,
    pub kappa_est: f64,
    pub n_j: usize,
    #[serde(rename = "F_value")]
    pub f_value: f64,
    pub g_norm: f64,
    pub time_s: f64,
}

impl From<&TraceRecord<f64>> for CsvRow {
    fn from(r: &TraceRecord<f64>) -> Self {
        Self {
            algo: r.algo.name().into(),
            restart: r.restart,
            global_iter: r.global_iter,
            backtracks: r.backtracks,
            tau: r.tau,
            l_est: r.l_est,
            kappa_est: r.kappa_est,
            n_j: r.n_j,
            f_value: r.f_value,
            g_norm: r.g_norm,
            time_s: r.time_s,
        }
    }
}

/// Writes the header and rows; the header is written even for an empty trace.
pub fn write_trace_to<W: Write>(out: W, trace: &[TraceRecord<f64>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER.split(','))?;
    for rec in trace {
        w.serialize(CsvRow::from(rec))?;
    }
    w.flush().map_err(|e| HarnessError::io("<trace>", e))
}

pub fn write_trace(path: &Path, trace: &[TraceRecord<f64>]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_trace_to(std::io::BufWriter::new(file), trace)
}

pub fn read_trace(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<_> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != HEADER {
        return Err(HarnessError::Format {
            path: path.to_path_buf(),
            message: format!("unexpected trace header '{}'", header.join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use freefista::Algorithm;

    #[test]
    fn header_and_nan_round_trip() {
        let rec = TraceRecord {
            algo: Algorithm::FreeFista,
            restart: 1,
            global_iter: 1,
            backtracks: 2,
            tau: 0.125,
            l_est: 8.0,
            kappa_est: f64::NAN,
            n_j: 14,
            f_value: -1.5,
            g_norm: f64::NAN,
            time_s: 0.001,
            step_norm: 0.3,
        };
        let mut buf = Vec::new();
        write_trace_to(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HEADER));
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), 11);
        assert!(row.starts_with("free-fista,1,1,2,0.125,8.0,NaN,14,-1.5,NaN,"), "{row}");
    }
}

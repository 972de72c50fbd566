//! Bench tables as CSV.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One solver run. `total_length` and `guarantee` are exact rationals as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub file: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub case_leaf: u8,
    pub algorithm: String,
    pub mode: String,
    /// `solved`, `infeasible`, `refused` or `error`.
    pub status: String,
    pub total_length: Option<String>,
    pub guarantee: Option<String>,
    pub elapsed_ms: u64,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidInstance(format!("csv: {other:?}")),
    }
}

pub fn write_bench_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(csv_err)).collect()
}

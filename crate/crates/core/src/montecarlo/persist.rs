//! Results files: one JSON object per run appended to a JSON-lines file,
//! and a CSV table for plotting.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Estimate;
use crate::error::Result;

/// A JSON-lines entry: the estimate plus how long it took.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(flatten)]
    pub estimate: Estimate,
    pub wall_time_ms: u64,
}

pub fn append_jsonl(path: &Path, estimate: &Estimate, wall_time_ms: u64) -> Result<()> {
    let rec = RunRecord { estimate: estimate.clone(), wall_time_ms };
    let mut line = serde_json::to_string(&rec)?;
    line.push('\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(line.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    k: Option<usize>,
    trials: u64,
    hits: u64,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    p_bound: Option<f64>,
    seed: u64,
}

/// Append one row, writing the header first if the file is new or empty.
pub fn append_csv(path: &Path, estimate: &Estimate) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(f);
    let e = estimate;
    w.serialize(CsvRow {
        n: e.n,
        k: e.k,
        trials: e.trials,
        hits: e.hits,
        p_hat: e.p_hat,
        ci_low: e.ci_low,
        ci_high: e.ci_high,
        p_bound: e.p_bound,
        seed: e.seed,
    })
    .map_err(|err| std::io::Error::other(err.to_string()))?;
    w.flush()?;
    Ok(())
}

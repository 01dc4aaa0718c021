//! Checkpoint records and their CSV form.

use std::io::{self, Write};

pub const CSV_HEADER: &str =
    "event,dsize,csize,dtsize,lvl_changes,d_changes,dt_adds,ns_mean,ns_p99,opt,ratio";

/// State at one checkpoint. Counters are cumulative; timings cover the
/// updates since the previous checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    /// Number of events applied so far.
    pub event: usize,
    pub dsize: usize,
    pub csize: usize,
    pub dtsize: usize,
    pub lvl_changes: u64,
    pub d_changes: u64,
    pub dt_adds: u64,
    pub ns_mean: f64,
    pub ns_p99: u64,
    /// Exact optimum, when the instance is small enough to solve.
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
}

impl MetricsRecord {
    pub fn csv_line(&self) -> String {
        let opt = self.opt.map(|o| o.to_string()).unwrap_or_default();
        let ratio = self.ratio.map(|r| format!("{r:.4}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{:.1},{},{},{}",
            self.event,
            self.dsize,
            self.csize,
            self.dtsize,
            self.lvl_changes,
            self.d_changes,
            self.dt_adds,
            self.ns_mean,
            self.ns_p99,
            opt,
            ratio
        )
    }

    /// Same record with the wall-clock fields zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self {
            ns_mean: 0.0,
            ns_p99: 0,
            ..self.clone()
        }
    }
}

pub fn write_csv<W: Write>(mut out: W, records: &[MetricsRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    out.flush()
}

/// Mean and 99th percentile (nearest rank) of a batch of durations.
pub fn timing_stats(ns: &mut [u64]) -> (f64, u64) {
    if ns.is_empty() {
        return (0.0, 0);
    }
    ns.sort_unstable();
    let mean = ns.iter().map(|&x| x as f64).sum::<f64>() / ns.len() as f64;
    let rank = (ns.len() * 99).div_ceil(100).max(1);
    (mean, ns[rank - 1])
}

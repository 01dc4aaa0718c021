//! Trace replay with periodic oracle checks.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::graph::{DynGraph, GraphError, VertexId};
use crate::oracle::{self, OracleReport, EXACT_CDS_CAP, EXACT_DS_CAP};
use crate::trace::{
    generate_trace, parse_trace, serialize_trace, GenerateError, ParseError, UpdateTrace,
};

use super::config::{RunConfig, TraceSource};
use super::metrics::{timing_stats, write_csv, MetricsRecord};
use super::solver::{make_solver, Churn, DynamicSolver, SolverError, SolverKind};

/// Checkpoint spacing when no oracle schedule is set.
pub const RECORD_EVERY: usize = 100;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("event {event}: {source}")]
    Graph {
        event: usize,
        #[source]
        source: GraphError,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// First failed checkpoint of a run.
#[derive(Debug)]
pub struct Violation {
    /// Number of events applied when the failure showed.
    pub event: usize,
    pub report: OracleReport,
    /// Set when the solver itself gave up instead of an oracle failing.
    pub error: Option<SolverError>,
    pub snapshot: Option<PathBuf>,
}

impl Violation {
    /// One-line summary naming the event, the failed checks and the snapshot.
    pub fn summary(&self) -> String {
        let mut s = format!("violation after event {}", self.event);
        if let Some(e) = &self.error {
            let _ = write!(s, ": solver error: {e}");
        } else {
            let _ = write!(s, ": {}", self.report.failed_checks().join(", "));
            if let Some(first) = self.report.details.first() {
                let _ = write!(s, " ({first})");
            }
        }
        if let Some(p) = &self.snapshot {
            let _ = write!(s, "; snapshot {}", p.display());
        }
        s
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub events: usize,
    pub records: Vec<MetricsRecord>,
    pub violation: Option<Violation>,
    pub final_ds: Vec<VertexId>,
    pub final_connectors: Vec<VertexId>,
    pub churn: Churn,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.violation.is_some() {
            1
        } else {
            0
        }
    }
}

pub fn load_trace(cfg: &RunConfig) -> Result<UpdateTrace, HarnessError> {
    match &cfg.source {
        TraceSource::File(path) => {
            let bytes = fs::read(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            parse_trace(&bytes).map_err(|source| HarnessError::Parse {
                path: path.clone(),
                source,
            })
        }
        TraceSource::Gen(g) => Ok(generate_trace(
            g.n,
            g.steps,
            g.pdel,
            g.seed.unwrap_or(cfg.seed),
        )?),
    }
}

/// Loads the configured trace, replays it and writes the metrics file.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, HarnessError> {
    let trace = load_trace(cfg)?;
    let outcome = run_trace(cfg, &trace)?;
    if let Some(path) = &cfg.metrics {
        let io_err = |source| HarnessError::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        write_csv(io::BufWriter::new(file), &outcome.records).map_err(io_err)?;
    }
    Ok(outcome)
}

/// `|D| <= 2^10 log2(n) OPT_DS`, checked exactly.
pub fn within_ds_bound(n: usize, size: usize, opt: usize) -> bool {
    size as f64 <= 1024.0 * (n as f64).log2() * opt as f64
}

/// `|D̃| <= 3 * 2^10 log2(n) OPT_CDS`, checked exactly.
pub fn within_cds_bound(n: usize, size: usize, opt: usize) -> bool {
    size as f64 <= 3.0 * 1024.0 * (n as f64).log2() * opt as f64
}

/// Exact optimum of the problem `kind` approximates, if small enough.
pub fn exact_optimum(kind: SolverKind, g: &DynGraph) -> Option<usize> {
    if kind.is_cds() {
        if g.n() > EXACT_CDS_CAP {
            return None;
        }
        oracle::exact_min_cds(g).ok().map(|(k, _)| k)
    } else {
        if g.n() > EXACT_DS_CAP {
            return None;
        }
        oracle::exact_min_ds(g).ok().map(|(k, _)| k)
    }
}

/// Replays `trace` under `cfg`'s solver, verification schedule and backend.
pub fn run_trace(cfg: &RunConfig, trace: &UpdateTrace) -> Result<RunOutcome, HarnessError> {
    let mut g = DynGraph::new(trace.n);
    let mut solver = make_solver(cfg.solver, trace.n, cfg.backend);
    let mut records = Vec::new();
    let mut window: Vec<u64> = Vec::new();
    let record_every = if cfg.verify_every > 0 {
        cfg.verify_every
    } else {
        RECORD_EVERY
    };
    let mut violation = None;

    for (i, e) in trace.events.iter().enumerate() {
        let done = i + 1;
        g.apply(e).map_err(|source| HarnessError::Graph {
            event: done,
            source,
        })?;
        let start = Instant::now();
        let res = solver.apply(&g, e);
        window.push(start.elapsed().as_nanos() as u64);
        if let Err(err) = res {
            let snapshot = dump_failure(
                cfg,
                trace,
                done,
                &g,
                solver.as_ref(),
                &OracleReport::default(),
            );
            violation = Some(Violation {
                event: done,
                report: OracleReport::default(),
                error: Some(err),
                snapshot,
            });
            break;
        }

        let verify = cfg.verify_every > 0 && done % cfg.verify_every == 0;
        let last = done == trace.events.len();
        if !(verify || last || done % record_every == 0) {
            continue;
        }
        let record = checkpoint(solver.as_ref(), &g, done, &mut window);
        let mut report = if verify {
            solver.verify(&g)
        } else {
            OracleReport::default()
        };
        if verify {
            check_ratio(cfg.solver, &g, &record, &mut report);
        }
        records.push(record);
        if !report.ok() {
            let snapshot = dump_failure(cfg, trace, done, &g, solver.as_ref(), &report);
            violation = Some(Violation {
                event: done,
                report,
                error: None,
                snapshot,
            });
            break;
        }
    }

    Ok(RunOutcome {
        events: trace.events.len(),
        records,
        violation,
        final_ds: solver.dominating_set(),
        final_connectors: solver.connectors(),
        churn: solver.churn(),
    })
}

fn checkpoint(
    s: &dyn DynamicSolver,
    g: &DynGraph,
    event: usize,
    window: &mut Vec<u64>,
) -> MetricsRecord {
    let (ns_mean, ns_p99) = timing_stats(window);
    window.clear();
    let (dsize, csize) = (s.dominating_set().len(), s.connectors().len());
    let churn = s.churn();
    let opt = exact_optimum(s.kind(), g);
    let size = if s.kind().is_cds() {
        dsize + csize
    } else {
        dsize
    };
    MetricsRecord {
        event,
        dsize,
        csize,
        dtsize: dsize + csize,
        lvl_changes: churn.level_changes,
        d_changes: churn.d_changes,
        dt_adds: churn.dt_adds,
        ns_mean,
        ns_p99,
        opt,
        ratio: opt.filter(|&o| o > 0).map(|o| size as f64 / o as f64),
    }
}

fn check_ratio(kind: SolverKind, g: &DynGraph, r: &MetricsRecord, report: &mut OracleReport) {
    let Some(opt) = r.opt else { return };
    let n = g.n();
    let ok = match kind {
        SolverKind::Minimal => r.dsize >= opt,
        SolverKind::Mds => r.dsize >= opt && within_ds_bound(n, r.dsize, opt),
        SolverKind::CdsSlow | SolverKind::CdsFast => {
            r.dtsize >= opt && within_cds_bound(n, r.dtsize, opt)
        }
    };
    if !ok {
        report.ratio_ok = false;
        report.details.push(oracle::Diagnostic {
            check: "ratio",
            vertex: 0,
            level: 0,
            value: opt as i64,
        });
    }
}

/// Text form of a failing state. Lines are `key values...`; solver-specific
/// lines (`pair dominant level : dom...`, `nd v : ...`, `nc v value`) follow
/// the common ones.
pub fn snapshot_text(
    event: usize,
    g: &DynGraph,
    solver: &dyn DynamicSolver,
    report: &OracleReport,
) -> String {
    let join = |v: &[VertexId]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "solver {}", solver.kind());
    let _ = writeln!(out, "event {event}");
    let _ = writeln!(out, "failed {}", report.failed_checks().join(" "));
    for d in &report.details {
        let _ = writeln!(out, "diag {d}");
    }
    let _ = writeln!(out, "n {}", g.n());
    let mut edges: Vec<_> = g.edges().collect();
    edges.sort_unstable();
    for (u, v) in edges {
        let _ = writeln!(out, "edge {u} {v}");
    }
    let _ = writeln!(out, "D {}", join(&solver.dominating_set()));
    let _ = writeln!(out, "C {}", join(&solver.connectors()));
    solver.dump(&mut out);
    out
}

/// Writes `<stem>.snap` and the replayable trace prefix `<stem>.trace`.
fn dump_failure(
    cfg: &RunConfig,
    trace: &UpdateTrace,
    event: usize,
    g: &DynGraph,
    solver: &dyn DynamicSolver,
    report: &OracleReport,
) -> Option<PathBuf> {
    let dir = cfg.snapshot_dir.clone().unwrap_or_else(std::env::temp_dir);
    let stem = format!("dyndom-{}-{}-{}", cfg.solver, std::process::id(), event);
    let snap = dir.join(format!("{stem}.snap"));
    let prefix = UpdateTrace {
        n: trace.n,
        events: trace.events[..event].to_vec(),
    };
    let write = |p: &Path, s: &str| fs::create_dir_all(&dir).and_then(|_| fs::write(p, s));
    write(&snap, &snapshot_text(event, g, solver, report)).ok()?;
    write(
        &dir.join(format!("{stem}.trace")),
        &serialize_trace(&prefix),
    )
    .ok()?;
    Some(snap)
}

//! A common face for the dynamic solvers so the driver can replay any of them.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::cds::{CdsError, CdsMode, CdsState};
use crate::forest::Backend;
use crate::graph::{DynGraph, EventKind, UpdateEvent, VertexId};
use crate::mds::{LevelSolution, MdsError};
use crate::minimal::{MinimalDsState, MinimalError};
use crate::oracle::{self, Diagnostic, OracleReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Mds,
    Minimal,
    CdsSlow,
    CdsFast,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [Self::Mds, Self::Minimal, Self::CdsSlow, Self::CdsFast];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mds => "mds",
            Self::Minimal => "minimal",
            Self::CdsSlow => "cds-slow",
            Self::CdsFast => "cds-fast",
        }
    }

    pub fn is_cds(self) -> bool {
        matches!(self, Self::CdsSlow | Self::CdsFast)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown solver {0:?} (expected mds, minimal, cds-slow or cds-fast)")]
pub struct UnknownSolver(pub String);

impl FromStr for SolverKind {
    type Err = UnknownSolver;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownSolver(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Mds(#[from] MdsError),
    #[error(transparent)]
    Minimal(#[from] MinimalError),
    #[error(transparent)]
    Cds(#[from] CdsError),
}

/// Cumulative work counters. Fields a solver does not track stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Churn {
    pub level_changes: u64,
    pub d_changes: u64,
    pub dt_adds: u64,
}

pub trait DynamicSolver {
    fn kind(&self) -> SolverKind;

    fn n(&self) -> usize;

    /// Processes `e`; `g` already reflects it.
    fn apply(&mut self, g: &DynGraph, e: &UpdateEvent) -> Result<(), SolverError>;

    fn dominating_set(&self) -> Vec<VertexId>;

    fn connectors(&self) -> Vec<VertexId> {
        Vec::new()
    }

    fn churn(&self) -> Churn;

    /// Runs every oracle that applies to this solver against `g`.
    fn verify(&mut self, g: &DynGraph) -> OracleReport;

    /// Appends the solver-specific part of a state snapshot.
    fn dump(&self, out: &mut String);
}

pub fn make_solver(kind: SolverKind, n: usize, backend: Backend) -> Box<dyn DynamicSolver + Send> {
    match kind {
        SolverKind::Mds => Box::new(MdsSolver(LevelSolution::new(n))),
        SolverKind::Minimal => Box::new(MinimalSolver {
            state: MinimalDsState::new(n),
            checked: 0,
        }),
        SolverKind::CdsSlow => Box::new(CdsSolver(CdsState::new(n, CdsMode::Slow, backend))),
        SolverKind::CdsFast => Box::new(CdsSolver(CdsState::new(n, CdsMode::Fast, backend))),
    }
}

fn d(check: &'static str, vertex: VertexId, value: i64) -> Diagnostic {
    Diagnostic {
        check,
        vertex,
        level: 0,
        value,
    }
}

fn check_dominating(g: &DynGraph, set: &[VertexId], report: &mut OracleReport) {
    let missed = oracle::undominated(g, set);
    if !missed.is_empty() {
        report.dominating = false;
        report
            .details
            .extend(missed.into_iter().map(|v| d("undominated", v, 0)));
    }
}

fn check_levels(g: &DynGraph, mds: &LevelSolution, report: &mut OracleReport) {
    let bad = oracle::check_stable(g, &mds.snapshot());
    if !bad.is_empty() {
        report.stable = false;
        report.details.extend(bad);
    }
}

fn dump_levels(mds: &LevelSolution, out: &mut String) {
    let mut pairs: Vec<_> = mds.pairs().collect();
    pairs.sort_by_key(|p| p.dominant);
    for p in pairs {
        let dom: Vec<String> = p.dom.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "pair {} {} : {}", p.dominant, p.level, dom.join(" "));
    }
}

struct MdsSolver(LevelSolution);

impl DynamicSolver for MdsSolver {
    fn kind(&self) -> SolverKind {
        SolverKind::Mds
    }

    fn n(&self) -> usize {
        self.0.n()
    }

    fn apply(&mut self, g: &DynGraph, e: &UpdateEvent) -> Result<(), SolverError> {
        match e.kind {
            EventKind::Insert => self.0.insert_edge(g, e.u, e.v)?,
            EventKind::Delete => self.0.delete_edge(g, e.u, e.v)?,
        }
        self.0.drain_changes();
        Ok(())
    }

    fn dominating_set(&self) -> Vec<VertexId> {
        self.0.dominating_set()
    }

    fn churn(&self) -> Churn {
        let c = self.0.counters();
        Churn {
            level_changes: c.level_changes,
            d_changes: c.d_changes,
            dt_adds: 0,
        }
    }

    fn verify(&mut self, g: &DynGraph) -> OracleReport {
        let mut report = OracleReport::default();
        check_dominating(g, &self.0.dominating_set(), &mut report);
        check_levels(g, &self.0, &mut report);
        report
    }

    fn dump(&self, out: &mut String) {
        dump_levels(&self.0, out);
    }
}

struct MinimalSolver {
    state: MinimalDsState,
    /// Selections already checked against the degree bound.
    checked: usize,
}

impl DynamicSolver for MinimalSolver {
    fn kind(&self) -> SolverKind {
        SolverKind::Minimal
    }

    fn n(&self) -> usize {
        self.state.n()
    }

    fn apply(&mut self, g: &DynGraph, e: &UpdateEvent) -> Result<(), SolverError> {
        match e.kind {
            EventKind::Insert => self.state.insert_edge(g, e.u, e.v)?,
            EventKind::Delete => self.state.delete_edge(g, e.u, e.v)?,
        }
        self.state.drain_changes();
        Ok(())
    }

    fn dominating_set(&self) -> Vec<VertexId> {
        self.state.dominating_set()
    }

    fn churn(&self) -> Churn {
        let c = self.state.counters();
        Churn {
            level_changes: 0,
            d_changes: c.additions + c.removals,
            dt_adds: 0,
        }
    }

    fn verify(&mut self, g: &DynGraph) -> OracleReport {
        let mut report = OracleReport::default();
        let set = self.state.dominating_set();
        check_dominating(g, &set, &mut report);
        let redundant = oracle::redundant_members(g, &set);
        let stale = self.state.recompute_mismatches(g);
        if !redundant.is_empty() || !stale.is_empty() {
            report.minimal_ds = false;
            report
                .details
                .extend(redundant.into_iter().map(|v| d("redundant", v, 0)));
            report
                .details
                .extend(stale.into_iter().map(|v| d("stale_nd", v, 0)));
        }
        for s in &self.state.selections()[self.checked..] {
            if !s.within_bound() {
                report.selection_ok = false;
                report
                    .details
                    .push(d("selection_degree", s.chosen, s.degree as i64));
            }
        }
        self.checked = self.state.selections().len();
        report
    }

    fn dump(&self, out: &mut String) {
        for v in 0..self.state.n() {
            let nd: Vec<String> = self.state.nd(v).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "nd {v} : {}", nd.join(" "));
        }
    }
}

struct CdsSolver(CdsState);

impl DynamicSolver for CdsSolver {
    fn kind(&self) -> SolverKind {
        match self.0.mode() {
            CdsMode::Slow => SolverKind::CdsSlow,
            CdsMode::Fast => SolverKind::CdsFast,
        }
    }

    fn n(&self) -> usize {
        self.0.n()
    }

    fn apply(&mut self, g: &DynGraph, e: &UpdateEvent) -> Result<(), SolverError> {
        self.0.apply(g, e)?;
        Ok(())
    }

    fn dominating_set(&self) -> Vec<VertexId> {
        self.0.d_set()
    }

    fn connectors(&self) -> Vec<VertexId> {
        self.0.c_set()
    }

    fn churn(&self) -> Churn {
        let m = self.0.mds().counters();
        Churn {
            level_changes: m.level_changes,
            d_changes: m.d_changes,
            dt_adds: self.0.counters().dt_adds,
        }
    }

    fn verify(&mut self, g: &DynGraph) -> OracleReport {
        let mut report = OracleReport::default();
        let (dset, cset, dt) = (self.0.d_set(), self.0.c_set(), self.0.dtilde());
        check_dominating(g, &dset, &mut report);
        check_levels(g, self.0.mds(), &mut report);
        if dset != self.0.mds().dominating_set() {
            report.stable = false;
            report.details.push(d("d_mirror", 0, dset.len() as i64));
        }

        let split = oracle::dtilde_disconnections(g, &dt);
        if !split.is_empty() {
            report.dtilde_connected = false;
            report.details.extend(split);
        }
        let redundant = oracle::redundant_connectors(g, &dset, &cset);
        if !redundant.is_empty() {
            report.c_minimal = false;
            report.details.extend(
                redundant
                    .into_iter()
                    .map(|v| d("redundant_connector", v, 0)),
            );
        }
        if cset.len() > 2 * dset.len() {
            report.c_minimal = false;
            report
                .details
                .push(d("connector_bound", 0, cset.len() as i64));
        }

        if self.0.mode() == CdsMode::Fast {
            let n = self.0.n() as i64;
            for &v in &dt {
                let stored = self.0.nc_value(v).unwrap_or_default();
                let brute = oracle::nc_bruteforce(g, &dt, v) as i64;
                if stored.rem_euclid(n) != brute % n {
                    report.nc_ok = false;
                    report.details.push(d("nc", v, stored));
                }
            }
        }
        report
    }

    fn dump(&self, out: &mut String) {
        dump_levels(self.0.mds(), out);
        if self.0.mode() == CdsMode::Fast {
            let mut st = self.0.clone();
            for v in st.dtilde() {
                let _ = writeln!(out, "nc {v} {}", st.nc_value(v).unwrap_or_default());
            }
        }
    }
}

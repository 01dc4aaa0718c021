//! Replay driver, oracle schedule, metrics and scaling runs.

mod config;
mod metrics;
mod run;
mod scaling;
mod solver;

pub use config::{GenSpec, GenSpecError, RunConfig, TraceSource};
pub use metrics::{timing_stats, write_csv, MetricsRecord, CSV_HEADER};
pub use run::{
    exact_optimum, load_trace, run, run_trace, snapshot_text, within_cds_bound, within_ds_bound,
    HarnessError, RunOutcome, Violation, RECORD_EVERY,
};
pub use scaling::{
    family_trace, scaling_bench, Family, ScalingConfig, ScalingRow, ScalingTable, CONSISTENT_SPREAD,
};
pub use solver::{make_solver, Churn, DynamicSolver, SolverError, SolverKind, UnknownSolver};

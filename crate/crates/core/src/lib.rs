//! Dynamic dominating sets under edge insertions and deletions.
//!
//! * [`mds`]: O(log n)-approximate minimum dominating set from stable level assignments.
//! * [`minimal`]: minimal dominating set with low-degree dominator selection.
//! * [`cds`]: connected dominating set built as `D ∪ C` on top of [`mds`].
//! * [`forest`]: dynamic connectivity and path-aggregate forests used by [`cds`].
//! * [`oracle`]: brute-force checks for every invariant above.
//! * [`harness`]: solver trait, replay driver, metrics and scaling runs.

pub mod cds;
pub mod forest;
pub mod graph;
pub mod harness;
pub mod mds;
pub mod minimal;
pub mod oracle;
pub mod trace;

pub use graph::{DynGraph, EventKind, GraphError, UpdateEvent, VertexId};
pub use mds::{DsChange, DsView, LevelSolution};
pub use minimal::MinimalDsState;
pub use trace::{generate_trace, parse_trace, serialize_trace, ParseError, UpdateTrace};

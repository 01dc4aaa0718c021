//! Connected dominating set as `D̃ = D ∪ C`.
//!
//! `D` comes from [`LevelSolution`]; the connector set `C` links the pieces
//! of `G[D]` inside each component of the graph and is kept minimal: every
//! connector is an articulation point of `G[D̃]`.
//!
//! Two ways of keeping `C` minimal are offered. [`CdsMode::Slow`] re-checks
//! every connector by search after each update. [`CdsMode::Fast`] keeps, for
//! each vertex of `D̃`, the number `nc(v)` of pieces its component of
//! `G[D̃]` falls into without `v`, offset by `n` for non-connectors, on a
//! [`PathForest`] over the spanning forest of `G[D̃]`. Inserting an edge
//! `(v, w)` lowers `nc` by one exactly on the uncovered vertices of the
//! forest path `v..w`, so a path minimum finds any connector that stopped
//! being an articulation point.

mod segments;

use std::collections::HashMap;

use indexmap::IndexSet;
use thiserror::Error;

use crate::forest::{Backend, DeleteOutcome, DynamicConnectivity, InsertOutcome, PathForest};
use crate::graph::{DynGraph, EventKind, UpdateEvent, VertexId};
use crate::mds::{DsChange, LevelSolution, MdsError};

pub use segments::{uncovered_segments, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CdsMode {
    Slow,
    #[default]
    Fast,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdsError {
    #[error(transparent)]
    Mds(#[from] MdsError),
    #[error("no connector of at most two vertices joins the pieces of {0} and {1}")]
    NoShortConnector(VertexId, VertexId),
    #[error("vertices {0} and {1} must lie in distinct pieces of D̃ in one graph component")]
    NotSeparated(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CdsCounters {
    /// Vertices added to `D̃`, from either `D` or as connectors.
    pub dt_adds: u64,
    pub connectors_added: u64,
    pub connectors_removed: u64,
    pub reconnections: u64,
    /// Insertions after which more than one connector on the path had `nc <= 1`.
    pub tie_events: u64,
}

#[derive(Debug, Clone)]
pub struct CdsState {
    n: usize,
    mode: CdsMode,
    mds: LevelSolution,
    in_d: Vec<bool>,
    in_c: Vec<bool>,
    /// Adjacency of `G[D̃]`, mirrored edge for edge in `conn`.
    dt_adj: Vec<IndexSet<VertexId>>,
    conn: DynamicConnectivity,
    gconn: DynamicConnectivity,
    pf: Option<PathForest>,
    suspects: Vec<VertexId>,
    pending: Vec<VertexId>,
    counters: CdsCounters,
}

impl CdsState {
    pub fn new(n: usize, mode: CdsMode, backend: Backend) -> Self {
        let n_i = n as i64;
        let pf = (mode == CdsMode::Fast).then(|| PathForest::with_values(&vec![n_i; n]));
        Self {
            n,
            mode,
            mds: LevelSolution::new(n),
            in_d: vec![true; n],
            in_c: vec![false; n],
            dt_adj: vec![IndexSet::new(); n],
            conn: DynamicConnectivity::new(n, backend),
            gconn: DynamicConnectivity::new(n, backend),
            pf,
            suspects: Vec::new(),
            pending: Vec::new(),
            counters: CdsCounters::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> CdsMode {
        self.mode
    }

    pub fn mds(&self) -> &LevelSolution {
        &self.mds
    }

    pub fn counters(&self) -> CdsCounters {
        self.counters
    }

    pub fn in_dtilde(&self, v: VertexId) -> bool {
        self.in_d[v] || self.in_c[v]
    }

    pub fn is_connector(&self, v: VertexId) -> bool {
        self.in_c[v]
    }

    pub fn d_set(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.in_d[v]).collect()
    }

    pub fn c_set(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.in_c[v]).collect()
    }

    pub fn dtilde(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.in_dtilde(v)).collect()
    }

    pub fn connectivity(&self) -> &DynamicConnectivity {
        &self.conn
    }

    /// Stored `nc` value of `v`, offset by `n` when `v` is not a connector.
    /// `None` outside fast mode.
    pub fn nc_value(&mut self, v: VertexId) -> Option<i64> {
        self.pf.as_mut().map(|pf| pf.value(v))
    }

    /// Processes one graph update. `g` must already reflect `e`.
    pub fn apply(&mut self, g: &DynGraph, e: &UpdateEvent) -> Result<(), CdsError> {
        let (u, v) = (e.u, e.v);
        match e.kind {
            EventKind::Insert => {
                if self
                    .gconn
                    .insert_edge(u, v)
                    .expect("graph and mirror agree")
                    == InsertOutcome::BecameTree
                {
                    self.pending.extend([u, v]);
                }
                if self.in_dtilde(u) && self.in_dtilde(v) {
                    self.dt_insert(u, v);
                }
                self.mds.insert_edge(g, u, v)?;
            }
            EventKind::Delete => {
                if self.dt_adj[u].contains(&v) && self.dt_delete(u, v) == DeleteOutcome::Split {
                    self.pending.extend([u, v]);
                }
                self.gconn
                    .delete_edge(u, v)
                    .expect("graph and mirror agree");
                self.mds.delete_edge(g, u, v)?;
            }
        }
        for change in self.mds.drain_changes() {
            self.on_ds_changed(g, change);
        }
        self.restore_connectivity(g);
        self.restore_minimality(g);
        Ok(())
    }

    /// Applies one membership change of `D` to `D̃`.
    pub fn on_ds_changed(&mut self, g: &DynGraph, change: DsChange) {
        match change {
            DsChange::Entered(v) => {
                self.in_d[v] = true;
                if self.in_c[v] {
                    self.in_c[v] = false;
                    self.shift(v, self.n as i64);
                } else {
                    self.enter_dtilde(g, v);
                    self.pending.push(v);
                }
            }
            DsChange::Left(v) => {
                self.in_d[v] = false;
                if self.is_articulation(v) {
                    self.in_c[v] = true;
                    self.shift(v, -(self.n as i64));
                } else {
                    self.leave_dtilde(v);
                }
            }
        }
    }

    /// Links the pieces of `G[D̃]` containing `a` and `b` with at most two
    /// new connectors, which are returned.
    pub fn reconnect_components(
        &mut self,
        g: &DynGraph,
        a: VertexId,
        b: VertexId,
    ) -> Result<Vec<VertexId>, CdsError> {
        let separated = self.in_dtilde(a)
            && self.in_dtilde(b)
            && !self.conn.connected(a, b)
            && self.gconn.connected(a, b);
        if !separated {
            return Err(CdsError::NotSeparated(a, b));
        }
        let target = self.conn.component_id(b);
        let found = self
            .find_connector(g, a, Some(target))
            .ok_or(CdsError::NoShortConnector(a, b))?;
        for &x in &found {
            self.add_connector(g, x);
        }
        self.restore_minimality(g);
        Ok(found)
    }

    fn restore_connectivity(&mut self, g: &DynGraph) {
        while let Some(p) = self.pending.pop() {
            let Some(p) = self.anchor(g, p) else {
                continue;
            };
            if let Some(found) = self.find_connector(g, p, None) {
                self.counters.reconnections += 1;
                for &x in &found {
                    self.add_connector(g, x);
                }
                self.pending.push(p);
            }
        }
    }

    /// `p` itself if it lies in `D̃`, else one of its neighbors there.
    fn anchor(&self, g: &DynGraph, p: VertexId) -> Option<VertexId> {
        if self.in_dtilde(p) {
            return Some(p);
        }
        g.neighbors(p).iter().copied().find(|&x| self.in_dtilde(x))
    }

    /// Shortest connector from the piece of `p` to another piece of `G[D̃]`
    /// (or to the piece with id `target`): a common neighbor first, then an
    /// adjacent pair of outside vertices.
    fn find_connector(
        &self,
        g: &DynGraph,
        p: VertexId,
        target: Option<usize>,
    ) -> Option<Vec<VertexId>> {
        let own = self.conn.component_id(p);
        let hits = |z: VertexId| {
            self.in_dtilde(z) && {
                let c = self.conn.component_id(z);
                c != own && target.is_none_or(|t| t == c)
            }
        };
        let piece = self.conn.component_vertices(p);
        let mut frontier = IndexSet::new();
        for &d in &piece {
            for &x in g.neighbors(d) {
                if !self.in_dtilde(x)
                    && frontier.insert(x)
                    && g.neighbors(x).iter().any(|&z| hits(z))
                {
                    return Some(vec![x]);
                }
            }
        }
        // A second vertex already adjacent to the piece would have been a
        // single connector, so pairs only extend outward.
        for &x in &frontier {
            for &y in g.neighbors(x) {
                if !self.in_dtilde(y)
                    && !frontier.contains(&y)
                    && g.neighbors(y).iter().any(|&z| hits(z))
                {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    }

    fn add_connector(&mut self, g: &DynGraph, x: VertexId) {
        self.counters.connectors_added += 1;
        self.enter_dtilde(g, x);
        self.in_c[x] = true;
        self.shift(x, -(self.n as i64));
        self.suspects.push(x);
    }

    /// Brings `v` into `D̃` as a non-connector and adds its edges one by one.
    fn enter_dtilde(&mut self, g: &DynGraph, v: VertexId) {
        debug_assert!(self.dt_adj[v].is_empty());
        self.counters.dt_adds += 1;
        if let Some(pf) = self.pf.as_mut() {
            pf.set_value(v, self.n as i64);
        }
        let nbrs: Vec<_> = g.neighbors(v).iter().copied().filter(|&x| x != v).collect();
        for x in nbrs {
            if self.in_dtilde(x) && !self.dt_adj[v].contains(&x) {
                self.dt_insert(v, x);
            }
        }
    }

    /// Removes `v` from `D̃` edge by edge. `v` must not be an articulation point.
    fn leave_dtilde(&mut self, v: VertexId) {
        let nbrs: Vec<_> = self.dt_adj[v].iter().copied().collect();
        for x in nbrs {
            self.dt_delete(v, x);
        }
        self.in_c[v] = false;
        self.in_d[v] = false;
        if let Some(pf) = self.pf.as_mut() {
            pf.set_value(v, self.n as i64);
        }
    }

    fn shift(&mut self, v: VertexId, delta: i64) {
        if let Some(pf) = self.pf.as_mut() {
            let x = pf.value(v);
            pf.set_value(v, x + delta);
        }
    }

    /// Adds a `G[D̃]` edge, maintaining `nc` in fast mode.
    fn dt_insert(&mut self, u: VertexId, v: VertexId) {
        let path = match self.pf.as_mut() {
            Some(pf) if self.conn.connected(u, v) => {
                let path = pf.tree_path(u, v).expect("connected");
                let segs = uncovered_segments(&path, &self.conn, &self.dt_adj);
                for s in segs {
                    pf.path_add(path[s.start], path[s.end], -1)
                        .expect("on path");
                }
                Some(path)
            }
            _ => None,
        };
        self.dt_adj[u].insert(v);
        self.dt_adj[v].insert(u);
        let out = self.conn.insert_edge(u, v).expect("edge new to D̃");
        let Some(pf) = self.pf.as_mut() else {
            return;
        };
        match out {
            InsertOutcome::BecameTree => {
                pf.link(u, v).expect("separate trees");
                for x in [u, v] {
                    let val = pf.value(x);
                    pf.set_value(x, val + 1);
                }
            }
            InsertOutcome::NonTree => {
                let path = path.expect("path computed before insertion");
                self.flag_low_on_path(&path);
            }
        }
    }

    /// Queues every connector on `path` whose `nc` dropped to at most one.
    fn flag_low_on_path(&mut self, path: &[VertexId]) {
        let pf = self.pf.as_mut().unwrap();
        let pos: HashMap<VertexId, usize> = path.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let last = path.len() - 1;
        let mut start = 0;
        let mut found = 0;
        while start <= last {
            let (min, arg) = pf.path_min(path[start], path[last]).expect("on path");
            if min > 1 {
                break;
            }
            self.suspects.push(arg);
            found += 1;
            start = pos[&arg] + 1;
        }
        if found > 1 {
            self.counters.tie_events += 1;
        }
    }

    /// Removes a `G[D̃]` edge, maintaining `nc` in fast mode.
    fn dt_delete(&mut self, u: VertexId, v: VertexId) -> DeleteOutcome {
        let was_tree = self.conn.is_tree_edge(u, v);
        self.dt_adj[u].swap_remove(&v);
        self.dt_adj[v].swap_remove(&u);
        let out = self.conn.delete_edge(u, v).expect("edge tracked in D̃");
        let Some(pf) = self.pf.as_mut() else {
            return out;
        };
        if was_tree {
            pf.cut(u, v).expect("tree edge mirrored");
        }
        match out {
            DeleteOutcome::Reconnected(replacement) => {
                if let Some((a, b)) = replacement {
                    pf.link(a, b).expect("replacement joins the halves");
                }
                let path = pf.tree_path(u, v).expect("still connected");
                let segs = uncovered_segments(&path, &self.conn, &self.dt_adj);
                for s in segs {
                    pf.path_add(path[s.start], path[s.end], 1).expect("on path");
                }
            }
            DeleteOutcome::Split => {
                for x in [u, v] {
                    let val = pf.value(x);
                    pf.set_value(x, val - 1);
                    self.suspects.push(x);
                }
            }
        }
        out
    }

    /// Whether removing `v` splits its piece of `G[D̃]`.
    fn is_articulation(&mut self, v: VertexId) -> bool {
        let offset = if self.in_c[v] { 0 } else { self.n as i64 };
        if let Some(pf) = self.pf.as_mut() {
            return pf.value(v) - offset >= 2;
        }
        let nbrs = &self.dt_adj[v];
        let Some(&first) = nbrs.first() else {
            return false;
        };
        let mut seen = IndexSet::from([v, first]);
        let mut stack = vec![first];
        while let Some(x) = stack.pop() {
            for &y in &self.dt_adj[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        !nbrs.iter().all(|y| seen.contains(y))
    }

    fn restore_minimality(&mut self, _g: &DynGraph) {
        match self.mode {
            CdsMode::Fast => {
                while let Some(s) = self.suspects.pop() {
                    if self.in_c[s] && !self.is_articulation(s) {
                        self.counters.connectors_removed += 1;
                        self.leave_dtilde(s);
                    }
                }
            }
            CdsMode::Slow => {
                self.suspects.clear();
                // Removing one connector can strip the articulation role from
                // another already checked, so sweep until nothing changes.
                loop {
                    let mut changed = false;
                    for v in self.c_set() {
                        if self.in_c[v] && !self.is_articulation(v) {
                            self.counters.connectors_removed += 1;
                            self.leave_dtilde(v);
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
    }
}

//! Minimal dominating set under edge updates.
//!
//! For every vertex `x` we keep `nd(x) = D ∩ N[x]`, and for every member
//! `d ∈ D` the set `only_by(d)` of closed neighbors whose sole dominator is
//! `d`. A member with an empty `only_by` is redundant and is dropped. When a
//! deletion leaves a vertex undominated, a dominator of degree
//! `O(sqrt(m))` is picked among its first few neighbors.

use std::collections::VecDeque;

use indexmap::IndexSet;
use thiserror::Error;

use crate::graph::{DynGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimalError {
    #[error("vertex {0} is already in the dominating set")]
    AlreadyMember(VertexId),
    #[error("vertex {0} is not in the dominating set")]
    NotMember(VertexId),
    #[error("vertex {0} is still the only dominator of some neighbor")]
    StillNeeded(VertexId),
    #[error("no low-degree neighbor of {vertex} within the first {window} (m = {m})")]
    InternalInconsistency {
        vertex: VertexId,
        window: usize,
        m: usize,
    },
}

/// One dominator choice made for a vertex that lost all its dominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub target: VertexId,
    pub chosen: VertexId,
    pub degree: usize,
    pub m: usize,
    /// The target was too heavy to dominate itself and its neighbors were scanned.
    pub scanned: bool,
}

impl Selection {
    /// `degree <= 2 sqrt(m) + 1`, in exact integer arithmetic.
    pub fn within_bound(&self) -> bool {
        degree_within(self.degree, self.m)
    }
}

fn degree_within(deg: usize, m: usize) -> bool {
    deg == 0 || ((deg - 1) as u128).pow(2) <= 4 * m as u128
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinimalCounters {
    /// Elementary insertions and removals on `nd` and `only_by` sets.
    pub set_ops: u64,
    pub additions: u64,
    pub removals: u64,
    /// Sum of `deg(v)` over added vertices.
    pub budget_granted: u64,
    pub scanned_neighbors: u64,
}

#[derive(Debug, Clone)]
pub struct MinimalDsState {
    in_d: Vec<bool>,
    nd: Vec<IndexSet<VertexId>>,
    only_by: Vec<IndexSet<VertexId>>,
    budget: Vec<usize>,
    redundant: VecDeque<VertexId>,
    undominated: Vec<VertexId>,
    selections: Vec<Selection>,
    changes: Vec<VertexId>,
    counters: MinimalCounters,
}

impl MinimalDsState {
    /// On the edgeless graph every vertex must dominate itself.
    pub fn new(n: usize) -> Self {
        Self {
            in_d: vec![true; n],
            nd: (0..n).map(|v| IndexSet::from([v])).collect(),
            only_by: (0..n).map(|v| IndexSet::from([v])).collect(),
            budget: vec![0; n],
            redundant: VecDeque::new(),
            undominated: Vec::new(),
            selections: Vec::new(),
            changes: Vec::new(),
            counters: MinimalCounters::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.in_d.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.in_d[v]
    }

    pub fn dominating_set(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.in_d[v]).collect()
    }

    pub fn size(&self) -> usize {
        self.in_d.iter().filter(|&&b| b).count()
    }

    pub fn nd(&self, v: VertexId) -> &IndexSet<VertexId> {
        &self.nd[v]
    }

    pub fn only_by(&self, v: VertexId) -> &IndexSet<VertexId> {
        &self.only_by[v]
    }

    pub fn budget(&self, v: VertexId) -> usize {
        self.budget[v]
    }

    pub fn counters(&self) -> MinimalCounters {
        self.counters
    }

    pub fn selections(&self) -> &[Selection] {
        &self.selections
    }

    /// Vertices whose membership flipped since the last call, with repeats.
    pub fn drain_changes(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.changes)
    }

    /// Adds `v` to `D`, then drops every member this made redundant.
    pub fn add_to_d(&mut self, g: &DynGraph, v: VertexId) -> Result<(), MinimalError> {
        if self.in_d[v] {
            return Err(MinimalError::AlreadyMember(v));
        }
        self.enter(g, v);
        self.flush_redundant(g);
        Ok(())
    }

    pub fn remove_from_d(&mut self, g: &DynGraph, v: VertexId) -> Result<(), MinimalError> {
        if !self.in_d[v] {
            return Err(MinimalError::NotMember(v));
        }
        if !self.only_by[v].is_empty() {
            return Err(MinimalError::StillNeeded(v));
        }
        self.leave(g, v);
        Ok(())
    }

    /// Call after `(u, v)` has been added to `g`.
    pub fn insert_edge(
        &mut self,
        g: &DynGraph,
        u: VertexId,
        v: VertexId,
    ) -> Result<(), MinimalError> {
        if self.in_d[v] {
            self.link(u, v);
        }
        if self.in_d[u] {
            self.link(v, u);
        }
        self.flush_redundant(g);
        Ok(())
    }

    /// Call after `(u, v)` has been removed from `g`.
    pub fn delete_edge(
        &mut self,
        g: &DynGraph,
        u: VertexId,
        v: VertexId,
    ) -> Result<(), MinimalError> {
        if self.in_d[v] {
            self.unlink(u, v);
        }
        if self.in_d[u] {
            self.unlink(v, u);
        }
        self.flush_redundant(g);
        while let Some(x) = self.undominated.pop() {
            if !self.nd[x].is_empty() {
                continue;
            }
            let w = self.choose_dominator(g, x)?;
            self.enter(g, w);
            self.flush_redundant(g);
        }
        Ok(())
    }

    /// Picks a dominator for the undominated vertex `u`: `u` itself when its
    /// degree is at most `2 sqrt(m) + 1`, else the first of its first
    /// `2 floor(sqrt(m)) + 1` neighbors with degree at most `sqrt(m)`.
    pub fn choose_dominator(
        &mut self,
        g: &DynGraph,
        u: VertexId,
    ) -> Result<VertexId, MinimalError> {
        let m = g.m();
        let deg = g.degree(u);
        let mut record = Selection {
            target: u,
            chosen: u,
            degree: deg,
            m,
            scanned: false,
        };
        if !degree_within(deg, m) {
            let window = 2 * isqrt(m) + 1;
            let found = g
                .neighbors(u)
                .iter()
                .take(window)
                .inspect(|_| self.counters.scanned_neighbors += 1)
                .copied()
                .find(|&w| (g.degree(w) as u128).pow(2) <= m as u128);
            let w = found.ok_or(MinimalError::InternalInconsistency {
                vertex: u,
                window,
                m,
            })?;
            record.chosen = w;
            record.degree = g.degree(w);
            record.scanned = true;
        }
        self.selections.push(record);
        Ok(record.chosen)
    }

    /// Compares `nd` and `only_by` against a recomputation from scratch.
    pub fn recompute_mismatches(&self, g: &DynGraph) -> Vec<VertexId> {
        let mut bad = Vec::new();
        for x in 0..self.n() {
            let nd: IndexSet<_> = g.closed_neighbors(x).filter(|&d| self.in_d[d]).collect();
            let only: IndexSet<_> = if self.in_d[x] {
                g.closed_neighbors(x)
                    .filter(|&y| {
                        let mut it = g.closed_neighbors(y).filter(|&d| self.in_d[d]);
                        it.next() == Some(x) && it.next().is_none()
                    })
                    .collect()
            } else {
                IndexSet::new()
            };
            let same = |a: &IndexSet<VertexId>, b: &IndexSet<VertexId>| {
                a.len() == b.len() && a.iter().all(|y| b.contains(y))
            };
            if !same(&nd, &self.nd[x]) || !same(&only, &self.only_by[x]) {
                bad.push(x);
            }
        }
        bad
    }

    fn enter(&mut self, g: &DynGraph, v: VertexId) {
        self.in_d[v] = true;
        self.budget[v] = g.degree(v);
        self.counters.additions += 1;
        self.counters.budget_granted += g.degree(v) as u64;
        self.changes.push(v);
        for x in g.closed_neighbors(v) {
            self.link(x, v);
        }
    }

    fn leave(&mut self, g: &DynGraph, v: VertexId) {
        debug_assert!(self.only_by[v].is_empty());
        self.in_d[v] = false;
        self.budget[v] = 0;
        self.counters.removals += 1;
        self.changes.push(v);
        for x in g.closed_neighbors(v) {
            self.unlink(x, v);
        }
    }

    /// `d ∈ D` became a closed neighbor of `x`.
    fn link(&mut self, x: VertexId, d: VertexId) {
        if self.nd[x].len() == 1 {
            let w = self.nd[x][0];
            self.only_by[w].swap_remove(&x);
            self.counters.set_ops += 1;
            if self.only_by[w].is_empty() {
                self.redundant.push_back(w);
            }
        }
        self.nd[x].insert(d);
        self.counters.set_ops += 1;
        if self.nd[x].len() == 1 {
            self.only_by[d].insert(x);
            self.counters.set_ops += 1;
        }
    }

    /// `d` stopped being a dominator of `x`, through edge loss or leaving `D`.
    fn unlink(&mut self, x: VertexId, d: VertexId) {
        self.nd[x].swap_remove(&d);
        self.counters.set_ops += 1;
        if self.only_by[d].swap_remove(&x) {
            self.counters.set_ops += 1;
            if self.in_d[d] && self.only_by[d].is_empty() {
                self.redundant.push_back(d);
            }
        }
        match self.nd[x].len() {
            0 => self.undominated.push(x),
            1 => {
                let w = self.nd[x][0];
                self.only_by[w].insert(x);
                self.counters.set_ops += 1;
            }
            _ => {}
        }
    }

    fn flush_redundant(&mut self, g: &DynGraph) {
        while let Some(w) = self.redundant.pop_front() {
            if self.in_d[w] && self.only_by[w].is_empty() {
                self.leave(g, w);
            }
        }
    }
}

fn isqrt(m: usize) -> usize {
    let mut r = (m as f64).sqrt() as usize;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}

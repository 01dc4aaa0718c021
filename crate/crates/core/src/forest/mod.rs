//! Dynamic connectivity and dynamic trees.
//!
//! [`DynamicConnectivity`] tracks an edge set under insertions and deletions
//! and maintains a spanning forest of it. Two backends are available: a
//! label-based one that searches replacements by brute force, and a leveled
//! one with Euler tour trees. [`PathForest`] mirrors a forest with per-vertex
//! values and answers path sums and minima.

mod ett;
mod leveled;
mod link_cut;
mod naive;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use thiserror::Error;

use crate::graph::VertexId;

pub use leveled::LeveledConnectivity;
pub use link_cut::PathForest;
pub use naive::NaiveConnectivity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("edge ({0}, {1}) already tracked")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) not tracked")]
    MissingEdge(VertexId, VertexId),
    #[error("vertices {0} and {1} are in different trees")]
    Disconnected(VertexId, VertexId),
    #[error("linking {0} and {1} would close a cycle")]
    WouldCycle(VertexId, VertexId),
    #[error("({0}, {1}) is not a tree edge")]
    NotTreeEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    Naive,
    #[default]
    Leveled,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Naive => "naive",
            Backend::Leveled => "leveled",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Backend::Naive),
            "leveled" => Ok(Backend::Leveled),
            other => Err(format!(
                "unknown backend {other:?} (expected naive or leveled)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The endpoints were disconnected; the edge joined the forest.
    BecameTree,
    NonTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteOutcome {
    /// The endpoints stay connected. Carries the edge swapped into the
    /// forest, if the deleted edge was a tree edge.
    Reconnected(Option<(VertexId, VertexId)>),
    Split,
}

#[derive(Debug, Clone)]
enum Inner {
    Naive(NaiveConnectivity),
    Leveled(LeveledConnectivity),
}

/// Fully dynamic connectivity with an explicit spanning forest.
#[derive(Debug, Clone)]
pub struct DynamicConnectivity {
    inner: Inner,
    tree_adj: Vec<IndexSet<VertexId>>,
    edges: usize,
}

impl DynamicConnectivity {
    pub fn new(n: usize, backend: Backend) -> Self {
        let inner = match backend {
            Backend::Naive => Inner::Naive(NaiveConnectivity::new(n)),
            Backend::Leveled => Inner::Leveled(LeveledConnectivity::new(n)),
        };
        Self {
            inner,
            tree_adj: vec![IndexSet::new(); n],
            edges: 0,
        }
    }

    pub fn backend(&self) -> Backend {
        match self.inner {
            Inner::Naive(_) => Backend::Naive,
            Inner::Leveled(_) => Backend::Leveled,
        }
    }

    pub fn n(&self) -> usize {
        self.tree_adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<InsertOutcome, ForestError> {
        let out = match &mut self.inner {
            Inner::Naive(c) => c.insert_edge(u, v),
            Inner::Leveled(c) => c.insert_edge(u, v),
        }?;
        self.edges += 1;
        if out == InsertOutcome::BecameTree {
            self.tree_adj[u].insert(v);
            self.tree_adj[v].insert(u);
        }
        Ok(out)
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<DeleteOutcome, ForestError> {
        let out = match &mut self.inner {
            Inner::Naive(c) => c.delete_edge(u, v),
            Inner::Leveled(c) => c.delete_edge(u, v),
        }?;
        self.edges -= 1;
        if self.tree_adj[u].swap_remove(&v) {
            self.tree_adj[v].swap_remove(&u);
        }
        if let DeleteOutcome::Reconnected(Some((a, b))) = out {
            self.tree_adj[a].insert(b);
            self.tree_adj[b].insert(a);
        }
        Ok(out)
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        match &self.inner {
            Inner::Naive(c) => c.connected(u, v),
            Inner::Leveled(c) => c.connected(u, v),
        }
    }

    /// Components over all `n` vertices, isolated ones included.
    pub fn num_components(&self) -> usize {
        match &self.inner {
            Inner::Naive(c) => c.num_components(),
            Inner::Leveled(c) => c.num_components(),
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match &self.inner {
            Inner::Naive(c) => c.has_edge(u, v),
            Inner::Leveled(c) => c.has_edge(u, v),
        }
    }

    /// Identifier shared by exactly the vertices of one component. Valid
    /// until the next mutation.
    pub fn component_id(&self, v: VertexId) -> usize {
        match &self.inner {
            Inner::Naive(c) => c.component_id(v),
            Inner::Leveled(c) => c.component_id(v),
        }
    }

    pub fn is_tree_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.tree_adj[u].contains(&v)
    }

    pub fn tree_neighbors(&self, v: VertexId) -> &IndexSet<VertexId> {
        &self.tree_adj[v]
    }

    pub fn tree_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (u, ns) in self.tree_adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    /// Vertices of the component of `v`, in breadth-first order of the forest.
    pub fn component_vertices(&self, v: VertexId) -> Vec<VertexId> {
        let mut seen = IndexSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.tree_adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Forest path from `u` to `v`, both included.
    pub fn tree_path(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>, ForestError> {
        let mut prev = HashMap::from([(u, u)]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in &self.tree_adj[x] {
                if let Entry::Vacant(slot) = prev.entry(y) {
                    slot.insert(x);
                    queue.push_back(y);
                }
            }
        }
        if !prev.contains_key(&v) {
            return Err(ForestError::Disconnected(u, v));
        }
        let mut path = vec![v];
        while *path.last().unwrap() != u {
            path.push(prev[path.last().unwrap()]);
        }
        path.reverse();
        Ok(path)
    }

    /// Internal consistency of the leveled backend; always `Ok` for the naive one.
    pub fn audit(&self) -> Result<(), String> {
        match &self.inner {
            Inner::Naive(_) => Ok(()),
            Inner::Leveled(c) => c.audit(),
        }
    }
}

/// Minimum spanning forest weight of a graph where edges inside `D̃` weigh 1
/// and all others weigh `m`: `(|D̃| - c) + m (n - k - |D̃| + c)`, with `k`
/// components of the graph and `c` components of its subgraph induced by `D̃`.
pub fn mst_weight(n: usize, m: usize, k: usize, dtilde: usize, c: usize) -> u64 {
    let light = (dtilde - c) as u64;
    let heavy = (n - k - (dtilde - c)) as u64;
    light + m as u64 * heavy
}

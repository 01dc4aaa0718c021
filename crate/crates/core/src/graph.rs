//! Fixed-universe dynamic graph and the edge events that mutate it.

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

/// Index of a vertex in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) not present")]
    MissingEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpdateEvent {
    pub kind: EventKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl UpdateEvent {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        Self {
            kind: EventKind::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        Self {
            kind: EventKind::Delete,
            u,
            v,
        }
    }
}

impl fmt::Display for UpdateEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            EventKind::Insert => '+',
            EventKind::Delete => '-',
        };
        write!(f, "{} {} {}", sign, self.u, self.v)
    }
}

/// Simple undirected graph over a vertex set fixed at construction.
///
/// Neighbor sets are insertion-ordered hash sets, so iteration order depends
/// only on the update history and runs are reproducible.
#[derive(Debug, Clone)]
pub struct DynGraph {
    adj: Vec<IndexSet<VertexId>>,
    m_current: usize,
    m_max: usize,
    delta_max: usize,
}

impl DynGraph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: (0..n).map(|_| IndexSet::new()).collect(),
            m_current: 0,
            m_max: 0,
            delta_max: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m_current
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn delta_max(&self) -> usize {
        self.delta_max
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &IndexSet<VertexId> {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains(&v)
    }

    /// Closed neighborhood: `v` followed by its neighbors.
    pub fn closed_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(v).chain(self.adj[v].iter().copied())
    }

    /// Edges as `(u, v)` with `u < v`, in vertex order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_event(&self, e: &UpdateEvent) -> Result<(), GraphError> {
        let n = self.n();
        for vertex in [e.u, e.v] {
            if vertex >= n {
                return Err(GraphError::VertexOutOfRange { vertex, n });
            }
        }
        if e.u == e.v {
            return Err(GraphError::SelfLoop(e.u));
        }
        match e.kind {
            EventKind::Insert if self.has_edge(e.u, e.v) => {
                Err(GraphError::DuplicateEdge(e.u, e.v))
            }
            EventKind::Delete if !self.has_edge(e.u, e.v) => Err(GraphError::MissingEdge(e.u, e.v)),
            _ => Ok(()),
        }
    }

    pub fn apply(&mut self, e: &UpdateEvent) -> Result<(), GraphError> {
        self.check_event(e)?;
        let (u, v) = (e.u, e.v);
        match e.kind {
            EventKind::Insert => {
                self.adj[u].insert(v);
                self.adj[v].insert(u);
                self.m_current += 1;
                self.m_max = self.m_max.max(self.m_current);
                self.delta_max = self.delta_max.max(self.adj[u].len()).max(self.adj[v].len());
            }
            EventKind::Delete => {
                self.adj[u].swap_remove(&v);
                self.adj[v].swap_remove(&u);
                self.m_current -= 1;
            }
        }
        Ok(())
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.apply(&UpdateEvent::insert(u, v))
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.apply(&UpdateEvent::delete(u, v))
    }
}

//! Connectivity with component labels and a plain search for replacements.

use std::collections::VecDeque;

use indexmap::IndexSet;

use crate::graph::VertexId;

use super::{DeleteOutcome, ForestError, InsertOutcome};

/// Labels are representative vertices; `members[r]` lists the component of `r`.
/// Merges relabel the smaller side; deleting a tree edge walks the tree from
/// one endpoint and scans that side's adjacency for an edge leaving it.
#[derive(Debug, Clone)]
pub struct NaiveConnectivity {
    adj: Vec<IndexSet<VertexId>>,
    tree_adj: Vec<IndexSet<VertexId>>,
    label: Vec<VertexId>,
    members: Vec<Vec<VertexId>>,
    components: usize,
}

impl NaiveConnectivity {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![IndexSet::new(); n],
            tree_adj: vec![IndexSet::new(); n],
            label: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            components: n,
        }
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.label[u] == self.label[v]
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn component_id(&self, v: VertexId) -> usize {
        self.label[v]
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<InsertOutcome, ForestError> {
        if u == v || self.has_edge(u, v) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        if self.connected(u, v) {
            return Ok(InsertOutcome::NonTree);
        }
        self.tree_adj[u].insert(v);
        self.tree_adj[v].insert(u);
        let (a, b) = (self.label[u], self.label[v]);
        let (keep, gone) = if self.members[a].len() >= self.members[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        let moved = std::mem::take(&mut self.members[gone]);
        for &x in &moved {
            self.label[x] = keep;
        }
        self.members[keep].extend(moved);
        self.components -= 1;
        Ok(InsertOutcome::BecameTree)
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<DeleteOutcome, ForestError> {
        if !self.has_edge(u, v) {
            return Err(ForestError::MissingEdge(u, v));
        }
        self.adj[u].swap_remove(&v);
        self.adj[v].swap_remove(&u);
        if !self.tree_adj[u].swap_remove(&v) {
            return Ok(DeleteOutcome::Reconnected(None));
        }
        self.tree_adj[v].swap_remove(&u);

        let side_u = self.tree_side(u);
        let side_v = self.tree_side(v);
        let (small, big_root) = if side_u.len() <= side_v.len() {
            (side_u, v)
        } else {
            (side_v, u)
        };
        let mut inside = vec![false; self.adj.len()];
        for &x in &small {
            inside[x] = true;
        }
        for &x in &small {
            if let Some(&y) = self.adj[x].iter().find(|&&y| !inside[y]) {
                self.tree_adj[x].insert(y);
                self.tree_adj[y].insert(x);
                return Ok(DeleteOutcome::Reconnected(Some((x, y))));
            }
        }
        let old = self.label[big_root];
        let large: Vec<_> = std::mem::take(&mut self.members[old])
            .into_iter()
            .filter(|&x| !inside[x])
            .collect();
        for part in [small, large] {
            let rep = part[0];
            for &x in &part {
                self.label[x] = rep;
            }
            self.members[rep] = part;
        }
        self.components += 1;
        Ok(DeleteOutcome::Split)
    }

    fn tree_side(&self, s: VertexId) -> Vec<VertexId> {
        let mut seen = IndexSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.tree_adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

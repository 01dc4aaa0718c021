//! Leveled spanning forests with amortized replacement search.
//!
//! Every edge carries a level. Forest `F_i` holds the tree edges of level at
//! least `i`, so `F_0` spans every component. When a tree edge of level `l`
//! is cut, levels `l, l-1, ..., 0` are searched in turn: the smaller of the two
//! halves at level `i` pushes its level-`i` tree edges up, then its level-`i`
//! non-tree edges are tried one by one, each failure being pushed up too.
//! A level only grows, and a tree at level `i` has at most `n / 2^i` vertices.

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::graph::VertexId;

use super::ett::{EttForest, Item};
use super::{DeleteOutcome, ForestError, InsertOutcome};

/// The arc `Arc(min, max)` of a tree edge whose level equals the forest's.
const TREE_BIT: u8 = 1;
/// A vertex with non-tree edges at the forest's level.
const NONTREE_BIT: u8 = 2;

#[derive(Debug, Clone)]
struct EdgeInfo {
    level: usize,
    /// Arc pairs in `F_0..=F_level` while the edge is a tree edge.
    arcs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct LeveledConnectivity {
    ett: Vec<EttForest>,
    vnode: Vec<Vec<usize>>,
    nontree: Vec<Vec<IndexSet<VertexId>>>,
    edges: HashMap<(VertexId, VertexId), EdgeInfo>,
    components: usize,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

impl LeveledConnectivity {
    pub fn new(n: usize) -> Self {
        let levels = (usize::BITS - n.max(1).leading_zeros()) as usize + 1;
        let mut ett = Vec::with_capacity(levels);
        let mut vnode = Vec::with_capacity(levels);
        for i in 0..levels {
            let mut f = EttForest::new(0x9e37_79b9_7f4a_7c15 ^ i as u64);
            vnode.push((0..n).map(|v| f.alloc(Item::Vertex(v))).collect());
            ett.push(f);
        }
        Self {
            ett,
            vnode,
            nontree: vec![vec![IndexSet::new(); n]; levels],
            edges: HashMap::new(),
            components: n,
        }
    }

    pub fn levels(&self) -> usize {
        self.ett.len()
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.root_at(0, u) == self.root_at(0, v)
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&key(u, v))
    }

    pub fn edge_level(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edges.get(&key(u, v)).map(|e| e.level)
    }

    pub fn component_id(&self, v: VertexId) -> usize {
        self.root_at(0, v)
    }

    pub fn component_size(&self, v: VertexId) -> usize {
        self.ett[0].tour_vertices(self.vnode[0][v])
    }

    fn root_at(&self, i: usize, v: VertexId) -> usize {
        self.ett[i].root(self.vnode[i][v])
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<InsertOutcome, ForestError> {
        let k = key(u, v);
        if u == v || self.edges.contains_key(&k) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        if self.connected(u, v) {
            self.edges.insert(
                k,
                EdgeInfo {
                    level: 0,
                    arcs: Vec::new(),
                },
            );
            self.add_nontree(0, u, v);
            Ok(InsertOutcome::NonTree)
        } else {
            let arcs = vec![self.link_at(0, k)];
            self.edges.insert(k, EdgeInfo { level: 0, arcs });
            self.components -= 1;
            Ok(InsertOutcome::BecameTree)
        }
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<DeleteOutcome, ForestError> {
        let k = key(u, v);
        let info = self
            .edges
            .remove(&k)
            .ok_or(ForestError::MissingEdge(u, v))?;
        if info.arcs.is_empty() {
            self.remove_nontree(info.level, u, v);
            return Ok(DeleteOutcome::Reconnected(None));
        }
        for (i, &(a, b)) in info.arcs.iter().enumerate() {
            self.ett[i].cut(a, b);
        }
        for i in (0..=info.level).rev() {
            if let Some(e) = self.replace(i, u, v) {
                return Ok(DeleteOutcome::Reconnected(Some(e)));
            }
        }
        self.components += 1;
        Ok(DeleteOutcome::Split)
    }

    /// Search level `i` for an edge reconnecting the halves containing `u` and `v`.
    fn replace(&mut self, i: usize, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
        let (su, sv) = (
            self.ett[i].tour_vertices(self.vnode[i][u]),
            self.ett[i].tour_vertices(self.vnode[i][v]),
        );
        let s = if su <= sv { u } else { v };
        let top = i + 1 < self.levels();

        if top {
            while let Some(x) = self.ett[i].find_flagged(self.vnode[i][s], TREE_BIT) {
                let Item::Arc(a, b) = self.ett[i].item(x) else {
                    unreachable!("tree flag on a vertex node")
                };
                self.ett[i].set_flag(x, TREE_BIT, false);
                let arcs = self.link_at(i + 1, (a, b));
                let info = self.edges.get_mut(&(a, b)).unwrap();
                info.level = i + 1;
                info.arcs.push(arcs);
            }
        }

        let root = self.root_at(i, s);
        while let Some(node) = self.ett[i].find_flagged(self.vnode[i][s], NONTREE_BIT) {
            let Item::Vertex(x) = self.ett[i].item(node) else {
                unreachable!("non-tree flag on an arc node")
            };
            while let Some(&y) = self.nontree[i][x].first() {
                self.remove_nontree(i, x, y);
                let k = key(x, y);
                if self.root_at(i, y) != root {
                    let mut arcs = Vec::with_capacity(i + 1);
                    for j in 0..=i {
                        arcs.push(self.link_at(j, k));
                    }
                    for (j, &(a, _)) in arcs.iter().enumerate() {
                        if j < i {
                            self.ett[j].set_flag(a, TREE_BIT, false);
                        }
                    }
                    let info = self.edges.get_mut(&k).unwrap();
                    info.arcs = arcs;
                    return Some((x, y));
                }
                if top {
                    self.edges.get_mut(&k).unwrap().level = i + 1;
                    self.add_nontree(i + 1, x, y);
                } else {
                    self.add_nontree(i, x, y);
                    break;
                }
            }
            if !top {
                break;
            }
        }
        None
    }

    /// Links the edge in `F_i`, flagging its first arc as level-`i`.
    fn link_at(&mut self, i: usize, (a, b): (VertexId, VertexId)) -> (usize, usize) {
        let f = &mut self.ett[i];
        let ab = f.alloc(Item::Arc(a, b));
        let ba = f.alloc(Item::Arc(b, a));
        f.link(self.vnode[i][a], self.vnode[i][b], ab, ba);
        f.set_flag(ab, TREE_BIT, true);
        (ab, ba)
    }

    fn add_nontree(&mut self, i: usize, u: VertexId, v: VertexId) {
        self.nontree[i][u].insert(v);
        self.nontree[i][v].insert(u);
        self.sync_flag(i, u);
        self.sync_flag(i, v);
    }

    fn remove_nontree(&mut self, i: usize, u: VertexId, v: VertexId) {
        self.nontree[i][u].swap_remove(&v);
        self.nontree[i][v].swap_remove(&u);
        self.sync_flag(i, u);
        self.sync_flag(i, v);
    }

    fn sync_flag(&mut self, i: usize, x: VertexId) {
        let on = !self.nontree[i][x].is_empty();
        self.ett[i].set_flag(self.vnode[i][x], NONTREE_BIT, on);
    }

    /// Checks the level structure: forest nesting, tree sizes per level and
    /// non-tree edges spanned by their level's forest. Returns the first problem.
    pub fn audit(&self) -> Result<(), String> {
        for (&(u, v), info) in &self.edges {
            let tree = !info.arcs.is_empty();
            if tree && info.arcs.len() != info.level + 1 {
                return Err(format!(
                    "edge ({u},{v}) has arcs on {} levels",
                    info.arcs.len()
                ));
            }
            for i in 0..=info.level {
                if self.root_at(i, u) != self.root_at(i, v) {
                    return Err(format!(
                        "edge ({u},{v}) of level {} split at {i}",
                        info.level
                    ));
                }
            }
            if !tree && !self.nontree[info.level][u].contains(&v) {
                return Err(format!("non-tree edge ({u},{v}) missing from its list"));
            }
        }
        let n = self.vnode[0].len();
        for i in 0..self.levels() {
            for v in 0..n {
                let size = self.ett[i].tour_vertices(self.vnode[i][v]);
                if size > (n >> i).max(1) {
                    return Err(format!("tree of size {size} at level {i}"));
                }
            }
        }
        Ok(())
    }
}

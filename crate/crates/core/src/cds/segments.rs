//! Covered and uncovered vertices along a forest path.
//!
//! Given the forest path `p_0 .. p_k` between `v = p_0` and `w = p_k`, an
//! interior vertex `p_i` is *uncovered* when deleting it separates `v` from
//! `w` in the graph. Every vertex of the component projects onto the path
//! position where its forest branch attaches. Removing `p_i` leaves a side
//! holding `p_0..p_(i-1)` with their branches, a side holding
//! `p_(i+1)..p_k` with theirs, and one piece per branch hanging at `p_i`.
//! A non-tree edge whose projections straddle `i` joins the two sides
//! directly. Edges landing in branches at `p_i` join pieces, which is
//! tracked with a small union-find per position.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;

use crate::forest::DynamicConnectivity;
use crate::graph::VertexId;

/// Inclusive run `start..=end` of path positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

const SIDE_V: usize = 0;
const SIDE_W: usize = 1;

struct Pieces {
    parent: Vec<usize>,
    ids: HashMap<VertexId, usize>,
}

impl Pieces {
    fn new() -> Self {
        Self {
            parent: vec![SIDE_V, SIDE_W],
            ids: HashMap::new(),
        }
    }

    fn branch(&mut self, b: VertexId) -> usize {
        let next = self.parent.len();
        let id = *self.ids.entry(b).or_insert(next);
        if id == next {
            self.parent.push(id);
        }
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

/// Uncovered interior positions of `path`, as maximal runs.
///
/// `adj` is the adjacency of the whole graph the forest spans; edges that
/// are not forest edges are the candidates for covering.
pub fn uncovered_segments(
    path: &[VertexId],
    forest: &DynamicConnectivity,
    adj: &[IndexSet<VertexId>],
) -> Vec<Segment> {
    let k = path.len();
    if k <= 2 {
        return Vec::new();
    }
    // Projection and branch root of every vertex in the component.
    let mut proj: HashMap<VertexId, (usize, VertexId)> = HashMap::new();
    for (i, &p) in path.iter().enumerate() {
        proj.insert(p, (i, p));
    }
    for (i, &p) in path.iter().enumerate() {
        for &c in forest.tree_neighbors(p) {
            if proj.contains_key(&c) {
                continue;
            }
            proj.insert(c, (i, c));
            let mut queue = VecDeque::from([c]);
            while let Some(x) = queue.pop_front() {
                for &y in forest.tree_neighbors(x) {
                    if let Entry::Vacant(slot) = proj.entry(y) {
                        slot.insert((i, c));
                        queue.push_back(y);
                    }
                }
            }
        }
    }

    let mut diff = vec![0i64; k + 1];
    let mut touching: Vec<Vec<(usize, VertexId, usize, VertexId)>> = vec![Vec::new(); k];
    for (&q, &(a, bq)) in &proj {
        for &r in &adj[q] {
            if q > r || forest.is_tree_edge(q, r) {
                continue;
            }
            let (mut a, mut bq, mut b, mut br) = (a, bq, proj[&r].0, proj[&r].1);
            if a > b {
                std::mem::swap(&mut a, &mut b);
                std::mem::swap(&mut bq, &mut br);
            }
            if b > a + 1 {
                diff[a + 1] += 1;
                diff[b] -= 1;
            }
            touching[a].push((a, bq, b, br));
            if b != a {
                touching[b].push((a, bq, b, br));
            }
        }
    }

    let mut uncovered = Vec::new();
    let mut depth = 0;
    for (i, links) in touching.iter().enumerate().take(k - 1) {
        depth += diff[i];
        if i == 0 || depth > 0 {
            continue;
        }
        let p = path[i];
        let mut pieces = Pieces::new();
        for &(a, ba, b, bb) in links {
            // A vertex equal to p_i is removed along with its edges.
            if (a == i && ba == p) || (b == i && bb == p) {
                continue;
            }
            let left = if a < i { SIDE_V } else { pieces.branch(ba) };
            let right = if b > i { SIDE_W } else { pieces.branch(bb) };
            pieces.union(left, right);
        }
        if pieces.find(SIDE_V) != pieces.find(SIDE_W) {
            uncovered.push(i);
        }
    }

    let mut out: Vec<Segment> = Vec::new();
    for i in uncovered {
        match out.last_mut() {
            Some(s) if s.end + 1 == i => s.end = i,
            _ => out.push(Segment { start: i, end: i }),
        }
    }
    out
}

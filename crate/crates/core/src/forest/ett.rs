//! Euler tour trees stored as treaps with parent pointers.
//!
//! Each vertex has one node in its tour and each tree edge two arc nodes.
//! Tours are cyclic, so rerooting is a rotation of the sequence. Nodes carry
//! two flag bits whose subtree OR is maintained, letting callers find marked
//! nodes in time proportional to the treap depth.

use crate::graph::VertexId;

pub const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    Vertex(VertexId),
    Arc(VertexId, VertexId),
}

#[derive(Debug, Clone)]
struct Node {
    left: usize,
    right: usize,
    parent: usize,
    prio: u64,
    size: usize,
    vcnt: usize,
    flags: u8,
    agg: u8,
    item: Item,
}

#[derive(Debug, Clone)]
pub struct EttForest {
    nodes: Vec<Node>,
    free: Vec<usize>,
    seed: u64,
}

impl EttForest {
    pub fn new(seed: u64) -> Self {
        Self {
            nodes: Vec::new(),
            free: Vec::new(),
            seed: seed | 1,
        }
    }

    fn next_prio(&mut self) -> u64 {
        // xorshift64
        let mut x = self.seed;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.seed = x;
        x
    }

    pub fn alloc(&mut self, item: Item) -> usize {
        let prio = self.next_prio();
        let vcnt = usize::from(matches!(item, Item::Vertex(_)));
        let node = Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            prio,
            size: 1,
            vcnt,
            flags: 0,
            agg: 0,
            item,
        };
        match self.free.pop() {
            Some(i) => {
                self.nodes[i] = node;
                i
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        }
    }

    fn release(&mut self, x: usize) {
        self.free.push(x);
    }

    pub fn item(&self, x: usize) -> Item {
        self.nodes[x].item
    }

    fn pull(&mut self, x: usize) {
        let (l, r) = (self.nodes[x].left, self.nodes[x].right);
        let mut size = 1;
        let mut vcnt = usize::from(matches!(self.nodes[x].item, Item::Vertex(_)));
        let mut agg = self.nodes[x].flags;
        for c in [l, r] {
            if c != NIL {
                size += self.nodes[c].size;
                vcnt += self.nodes[c].vcnt;
                agg |= self.nodes[c].agg;
            }
        }
        let node = &mut self.nodes[x];
        node.size = size;
        node.vcnt = vcnt;
        node.agg = agg;
    }

    pub fn root(&self, mut x: usize) -> usize {
        while self.nodes[x].parent != NIL {
            x = self.nodes[x].parent;
        }
        x
    }

    /// Number of vertex nodes in the tour containing `x`.
    pub fn tour_vertices(&self, x: usize) -> usize {
        self.nodes[self.root(x)].vcnt
    }

    pub fn set_flag(&mut self, x: usize, bit: u8, on: bool) {
        let node = &mut self.nodes[x];
        let before = node.flags;
        if on {
            node.flags |= bit;
        } else {
            node.flags &= !bit;
        }
        if before == node.flags {
            return;
        }
        let mut y = x;
        while y != NIL {
            self.pull(y);
            y = self.nodes[y].parent;
        }
    }

    /// Some node carrying `bit` in the tour containing `x`.
    pub fn find_flagged(&self, x: usize, bit: u8) -> Option<usize> {
        let mut y = self.root(x);
        if self.nodes[y].agg & bit == 0 {
            return None;
        }
        loop {
            let node = &self.nodes[y];
            if node.flags & bit != 0 {
                return Some(y);
            }
            y = if node.left != NIL && self.nodes[node.left].agg & bit != 0 {
                node.left
            } else {
                node.right
            };
        }
    }

    /// Zero-based index of `x` in its tour.
    fn rank(&self, x: usize) -> usize {
        let size = |c: usize| if c == NIL { 0 } else { self.nodes[c].size };
        let mut r = size(self.nodes[x].left);
        let mut y = x;
        while self.nodes[y].parent != NIL {
            let p = self.nodes[y].parent;
            if self.nodes[p].right == y {
                r += size(self.nodes[p].left) + 1;
            }
            y = p;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a].prio > self.nodes[b].prio {
            let r = self.nodes[a].right;
            let m = self.merge(r, b);
            self.nodes[a].right = m;
            self.nodes[m].parent = a;
            self.nodes[a].parent = NIL;
            self.pull(a);
            a
        } else {
            let l = self.nodes[b].left;
            let m = self.merge(a, l);
            self.nodes[b].left = m;
            self.nodes[m].parent = b;
            self.nodes[b].parent = NIL;
            self.pull(b);
            b
        }
    }

    /// Splits the treap rooted at `t` into the first `k` nodes and the rest.
    fn split(&mut self, t: usize, k: usize) -> (usize, usize) {
        if t == NIL {
            return (NIL, NIL);
        }
        self.nodes[t].parent = NIL;
        let l = self.nodes[t].left;
        let lsize = if l == NIL { 0 } else { self.nodes[l].size };
        if k <= lsize {
            let (a, b) = self.split(l, k);
            self.nodes[t].left = b;
            if b != NIL {
                self.nodes[b].parent = t;
            }
            if a != NIL {
                self.nodes[a].parent = NIL;
            }
            self.pull(t);
            (a, t)
        } else {
            let r = self.nodes[t].right;
            let (a, b) = self.split(r, k - lsize - 1);
            self.nodes[t].right = a;
            if a != NIL {
                self.nodes[a].parent = t;
            }
            if b != NIL {
                self.nodes[b].parent = NIL;
            }
            self.pull(t);
            (t, b)
        }
    }

    /// Rotates the tour containing `x` so that it starts at `x`.
    fn reroot(&mut self, x: usize) -> usize {
        let root = self.root(x);
        let k = self.rank(x);
        let (a, b) = self.split(root, k);
        self.merge(b, a)
    }

    /// Joins the tours of vertex nodes `vu` and `vv` with the two arcs of the new edge.
    pub fn link(&mut self, vu: usize, vv: usize, arc_uv: usize, arc_vu: usize) {
        let tu = self.reroot(vu);
        let tv = self.reroot(vv);
        let t = self.merge(tu, arc_uv);
        let t = self.merge(t, tv);
        self.merge(t, arc_vu);
    }

    /// Removes the two arcs of a tree edge and frees them.
    pub fn cut(&mut self, arc_a: usize, arc_b: usize) {
        let (mut a, mut b) = (arc_a, arc_b);
        let root = self.root(a);
        let (mut ra, mut rb) = (self.rank(a), self.rank(b));
        if ra > rb {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ra, &mut rb);
        }
        // tour = P a Q b S  ->  Q and S P
        let (left, rest) = self.split(root, ra);
        let (_, rest) = self.split(rest, 1);
        let (_, rest) = self.split(rest, rb - ra - 1);
        let (_, right) = self.split(rest, 1);
        self.merge(right, left);
        self.release(a);
        self.release(b);
    }

    /// All items of the tour containing `x`, in tour order.
    #[cfg(test)]
    pub fn tour(&self, x: usize) -> Vec<Item> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut y = self.root(x);
        loop {
            while y != NIL {
                stack.push(y);
                y = self.nodes[y].left;
            }
            match stack.pop() {
                None => break,
                Some(z) => {
                    out.push(self.nodes[z].item);
                    y = self.nodes[z].right;
                }
            }
        }
        out
    }
}

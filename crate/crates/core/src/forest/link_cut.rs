//! Link-cut trees with evert, lazy path addition and path minimum.

use crate::graph::VertexId;

use super::ForestError;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Node {
    ch: [usize; 2],
    parent: usize,
    rev: bool,
    add: i64,
    val: i64,
    min: i64,
    /// Leftmost and rightmost vertex attaining `min` in splay order.
    arg_l: usize,
    arg_r: usize,
    size: usize,
}

/// Forest over a fixed vertex set with an integer value per vertex.
///
/// Path queries address the unique tree path between two vertices. The
/// minimum reports the vertex nearest the first endpoint among ties.
#[derive(Debug, Clone)]
pub struct PathForest {
    t: Vec<Node>,
}

impl PathForest {
    pub fn new(n: usize) -> Self {
        Self::with_values(&vec![0; n])
    }

    pub fn with_values(values: &[i64]) -> Self {
        let t = values
            .iter()
            .enumerate()
            .map(|(v, &x)| Node {
                ch: [NIL, NIL],
                parent: NIL,
                rev: false,
                add: 0,
                val: x,
                min: x,
                arg_l: v,
                arg_r: v,
                size: 1,
            })
            .collect();
        Self { t }
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    fn is_root(&self, x: usize) -> bool {
        let p = self.t[x].parent;
        p == NIL || (self.t[p].ch[0] != x && self.t[p].ch[1] != x)
    }

    fn apply_add(&mut self, x: usize, d: i64) {
        if x != NIL {
            let node = &mut self.t[x];
            node.val += d;
            node.min += d;
            node.add += d;
        }
    }

    fn apply_rev(&mut self, x: usize) {
        if x != NIL {
            let node = &mut self.t[x];
            node.ch.swap(0, 1);
            std::mem::swap(&mut node.arg_l, &mut node.arg_r);
            node.rev ^= true;
        }
    }

    fn push(&mut self, x: usize) {
        let [l, r] = self.t[x].ch;
        if self.t[x].rev {
            self.apply_rev(l);
            self.apply_rev(r);
            self.t[x].rev = false;
        }
        let d = self.t[x].add;
        if d != 0 {
            self.apply_add(l, d);
            self.apply_add(r, d);
            self.t[x].add = 0;
        }
    }

    fn pull(&mut self, x: usize) {
        let [l, r] = self.t[x].ch;
        let own = self.t[x].val;
        let (mut min, mut arg_l, mut arg_r) = (own, x, x);
        let mut size = 1;
        if l != NIL {
            let ln = &self.t[l];
            size += ln.size;
            if ln.min < min {
                (min, arg_l, arg_r) = (ln.min, ln.arg_l, ln.arg_r);
            } else if ln.min == min {
                arg_l = ln.arg_l;
            }
        }
        if r != NIL {
            let rn = &self.t[r];
            size += rn.size;
            if rn.min < min {
                (min, arg_l, arg_r) = (rn.min, rn.arg_l, rn.arg_r);
            } else if rn.min == min {
                arg_r = rn.arg_r;
            }
        }
        let node = &mut self.t[x];
        node.min = min;
        node.arg_l = arg_l;
        node.arg_r = arg_r;
        node.size = size;
    }

    fn rotate(&mut self, x: usize) {
        let p = self.t[x].parent;
        let g = self.t[p].parent;
        let dir = usize::from(self.t[p].ch[1] == x);
        let b = self.t[x].ch[dir ^ 1];
        if !self.is_root(p) {
            let pd = usize::from(self.t[g].ch[1] == p);
            self.t[g].ch[pd] = x;
        }
        self.t[x].parent = g;
        self.t[x].ch[dir ^ 1] = p;
        self.t[p].parent = x;
        self.t[p].ch[dir] = b;
        if b != NIL {
            self.t[b].parent = p;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: usize) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_root(y) {
            y = self.t[y].parent;
            stack.push(y);
        }
        while let Some(z) = stack.pop() {
            self.push(z);
        }
        while !self.is_root(x) {
            let p = self.t[x].parent;
            if !self.is_root(p) {
                let g = self.t[p].parent;
                let zigzig = (self.t[g].ch[0] == p) == (self.t[p].ch[0] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    /// Makes the root-to-`x` path preferred; returns the last node jumped to.
    fn access(&mut self, x: usize) -> usize {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.t[y].ch[1] = last;
            self.pull(y);
            last = y;
            y = self.t[y].parent;
        }
        self.splay(x);
        last
    }

    fn evert(&mut self, x: usize) {
        self.access(x);
        self.apply_rev(x);
    }

    fn find_root(&mut self, x: usize) -> usize {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            match self.t[y].ch[0] {
                NIL => break,
                l => y = l,
            }
        }
        self.splay(y);
        y
    }

    pub fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        u == v || self.find_root(u) == self.find_root(v)
    }

    fn expose_path(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if !self.connected(u, v) {
            return Err(ForestError::Disconnected(u, v));
        }
        self.evert(u);
        self.access(v);
        Ok(())
    }

    pub fn link(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if self.connected(u, v) {
            return Err(ForestError::WouldCycle(u, v));
        }
        self.evert(u);
        self.t[u].parent = v;
        Ok(())
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError> {
        if !self.connected(u, v) {
            return Err(ForestError::NotTreeEdge(u, v));
        }
        self.evert(u);
        self.access(v);
        // The splay of v now holds exactly the path u..v.
        if self.t[v].size != 2 || self.t[v].ch[0] != u {
            return Err(ForestError::NotTreeEdge(u, v));
        }
        self.t[v].ch[0] = NIL;
        self.t[u].parent = NIL;
        self.pull(v);
        Ok(())
    }

    pub fn value(&mut self, v: VertexId) -> i64 {
        self.access(v);
        self.t[v].val
    }

    pub fn set_value(&mut self, v: VertexId, x: i64) {
        self.access(v);
        self.t[v].val = x;
        self.pull(v);
    }

    pub fn path_add(&mut self, u: VertexId, v: VertexId, delta: i64) -> Result<(), ForestError> {
        self.expose_path(u, v)?;
        self.apply_add(v, delta);
        Ok(())
    }

    /// Minimum value on the path and the vertex nearest `u` attaining it.
    pub fn path_min(&mut self, u: VertexId, v: VertexId) -> Result<(i64, VertexId), ForestError> {
        self.expose_path(u, v)?;
        Ok((self.t[v].min, self.t[v].arg_l))
    }

    /// Number of edges on the path.
    pub fn distance(&mut self, u: VertexId, v: VertexId) -> Result<usize, ForestError> {
        self.expose_path(u, v)?;
        Ok(self.t[v].size - 1)
    }

    /// Vertices of the path from `u` to `v`, both included.
    pub fn tree_path(&mut self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>, ForestError> {
        self.expose_path(u, v)?;
        let mut out = Vec::with_capacity(self.t[v].size);
        let mut stack = Vec::new();
        let mut x = v;
        loop {
            while x != NIL {
                self.push(x);
                stack.push(x);
                x = self.t[x].ch[0];
            }
            match stack.pop() {
                None => break,
                Some(y) => {
                    out.push(y);
                    x = self.t[y].ch[1];
                }
            }
        }
        Ok(out)
    }

    /// Lowest common ancestor of `a` and `b` when the tree is rooted at `root`.
    pub fn lca(
        &mut self,
        root: VertexId,
        a: VertexId,
        b: VertexId,
    ) -> Result<VertexId, ForestError> {
        for x in [a, b] {
            if !self.connected(root, x) {
                return Err(ForestError::Disconnected(root, x));
            }
        }
        self.evert(root);
        self.access(a);
        Ok(self.access(b))
    }

    /// Index along the path `u..v` of the vertex where `x` attaches to it.
    pub fn position_on_path(
        &mut self,
        u: VertexId,
        v: VertexId,
        x: VertexId,
    ) -> Result<usize, ForestError> {
        let meet = self.lca(u, v, x)?;
        self.distance(u, meet)
    }
}

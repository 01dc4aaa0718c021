//! O(log n)-approximate minimum dominating set via stable level assignments.
//!
//! The solution is a collection of *dominating pairs* `(dominant, dom)` where
//! `dom` is a subset of the dominant's closed neighborhood. Every vertex lies
//! in exactly one pair, so the set of dominants dominates the graph. A pair
//! with `|dom| = c` lives at a level `l` with `2^(l-10) <= c <= 2^l`, and the
//! solution is kept *stable*: no vertex `v` sees more than `2^l` closed
//! neighbors dominated at level `l`. Whenever that fails, `v` takes all of
//! them into a fresh pair at a strictly higher level.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;
use thiserror::Error;

use crate::graph::{DynGraph, VertexId};

/// Gap between the lowest and highest level a cardinality may occupy.
pub const LEVEL_SLACK: u32 = 10;

pub type PairId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdsError {
    #[error("stabilize exceeded its iteration cap of {cap}: internal inconsistency")]
    InternalInconsistency { cap: usize },
}

#[derive(Debug, Clone)]
pub struct DominatingPair {
    pub id: PairId,
    pub dominant: VertexId,
    pub dom: IndexSet<VertexId>,
    pub level: u32,
}

/// Membership change of the dominant set, reported to downstream consumers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DsChange {
    Entered(VertexId),
    Left(VertexId),
}

/// Current dominant set with per-vertex pair multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsView {
    pub members: Vec<VertexId>,
    pub multiplicity: Vec<(VertexId, usize)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MdsCounters {
    /// Vertex reassignments: a vertex moved to another pair or its pair changed level.
    pub level_changes: u64,
    /// Raw transitions of vertices into or out of the dominant set.
    pub d_changes: u64,
    pub pairs_created: u64,
    pub violations_processed: u64,
}

/// Plain-data copy of the solution for the brute-force oracles.
#[derive(Debug, Clone)]
pub struct LevelSnapshot {
    pub n: usize,
    pub l_max: u32,
    pub pairs: Vec<(VertexId, Vec<VertexId>, u32)>,
    /// `counters[v][l]` as maintained incrementally, for `l` in `0..=l_max`.
    pub counters: Vec<Vec<u32>>,
}

pub fn max_level(n: usize) -> u32 {
    ceil_log2(n.max(1)) + LEVEL_SLACK
}

fn ceil_log2(c: usize) -> u32 {
    if c <= 1 {
        0
    } else {
        usize::BITS - (c - 1).leading_zeros()
    }
}

fn floor_log2(c: usize) -> u32 {
    usize::BITS - 1 - c.leading_zeros()
}

/// Least level `l >= 1` with `c <= 2^l`.
pub fn lowest_level(c: usize, l_max: u32) -> u32 {
    debug_assert!(c >= 1);
    ceil_log2(c).max(1).min(l_max)
}

/// Greatest level `l <= l_max` with `2^(l - 10) <= c`.
pub fn highest_level(c: usize, l_max: u32) -> u32 {
    debug_assert!(c >= 1);
    (floor_log2(c) + LEVEL_SLACK).min(l_max).max(1)
}

/// Whether cardinality `c` fits the range of `level`.
pub fn in_range(c: usize, level: u32) -> bool {
    let upper_ok = (c as u128) <= 1u128 << level;
    let lower_ok = level <= LEVEL_SLACK || (c as u128) >= 1u128 << (level - LEVEL_SLACK);
    upper_ok && lower_ok
}

#[derive(Debug, Clone)]
pub struct LevelSolution {
    n: usize,
    l_max: u32,
    pairs: HashMap<PairId, DominatingPair>,
    owner: Vec<PairId>,
    level_of: Vec<u32>,
    /// Row-major `n x (l_max + 1)`; entry `[v][l] = |N[v] ∩ V_l|`.
    cnt: Vec<u32>,
    queue: VecDeque<(VertexId, u32)>,
    next_id: PairId,
    heads: Vec<u32>,
    touched: Vec<VertexId>,
    touched_flag: Vec<bool>,
    reported: Vec<bool>,
    counters: MdsCounters,
}

impl LevelSolution {
    /// Every vertex starts as the singleton pair `(v, {v})` at level 1.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "vertex universe must be non-empty");
        let l_max = max_level(n);
        let stride = l_max as usize + 1;
        let mut cnt = vec![0u32; n * stride];
        let mut pairs = HashMap::with_capacity(n);
        for v in 0..n {
            pairs.insert(
                v as PairId,
                DominatingPair {
                    id: v as PairId,
                    dominant: v,
                    dom: IndexSet::from([v]),
                    level: 1,
                },
            );
            cnt[v * stride + 1] = 1;
        }
        Self {
            n,
            l_max,
            pairs,
            owner: (0..n as PairId).collect(),
            level_of: vec![1; n],
            cnt,
            queue: VecDeque::new(),
            next_id: n as PairId,
            heads: vec![1; n],
            touched: Vec::new(),
            touched_flag: vec![false; n],
            reported: vec![true; n],
            counters: MdsCounters::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn counters(&self) -> MdsCounters {
        self.counters
    }

    pub fn level_of(&self, v: VertexId) -> u32 {
        self.level_of[v]
    }

    pub fn owner(&self, v: VertexId) -> &DominatingPair {
        &self.pairs[&self.owner[v]]
    }

    pub fn pairs(&self) -> impl Iterator<Item = &DominatingPair> {
        self.pairs.values()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_member(&self, v: VertexId) -> bool {
        self.heads[v] > 0
    }

    pub fn counter(&self, v: VertexId, level: u32) -> u32 {
        self.cnt[self.idx(v, level)]
    }

    pub fn dominating_set(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.heads[v] > 0).collect()
    }

    pub fn ds_size(&self) -> usize {
        self.heads.iter().filter(|&&h| h > 0).count()
    }

    pub fn ds_view(&self) -> DsView {
        let members = self.dominating_set();
        let multiplicity = members
            .iter()
            .map(|&v| (v, self.heads[v] as usize))
            .collect();
        DsView {
            members,
            multiplicity,
        }
    }

    /// Net membership changes since the previous call, in order of first change.
    pub fn drain_changes(&mut self) -> Vec<DsChange> {
        let mut out = Vec::new();
        for v in self.touched.drain(..) {
            self.touched_flag[v] = false;
            let now = self.heads[v] > 0;
            if now != self.reported[v] {
                self.reported[v] = now;
                out.push(if now {
                    DsChange::Entered(v)
                } else {
                    DsChange::Left(v)
                });
            }
        }
        out
    }

    pub fn snapshot(&self) -> LevelSnapshot {
        let mut pairs: Vec<_> = self
            .pairs
            .values()
            .map(|p| {
                let mut dom: Vec<_> = p.dom.iter().copied().collect();
                dom.sort_unstable();
                (p.dominant, dom, p.level)
            })
            .collect();
        pairs.sort();
        let stride = self.l_max as usize + 1;
        let counters = self.cnt.chunks(stride).map(|row| row.to_vec()).collect();
        LevelSnapshot {
            n: self.n,
            l_max: self.l_max,
            pairs,
            counters,
        }
    }

    /// Call after `(u, v)` has been added to `g`.
    pub fn insert_edge(&mut self, g: &DynGraph, u: VertexId, v: VertexId) -> Result<(), MdsError> {
        let (lu, lv) = (self.level_of[u], self.level_of[v]);
        self.bump(u, lv);
        self.bump(v, lu);
        self.stabilize(g)
    }

    /// Call after `(u, v)` has been removed from `g`.
    pub fn delete_edge(&mut self, g: &DynGraph, u: VertexId, v: VertexId) -> Result<(), MdsError> {
        let (lu, lv) = (self.level_of[u], self.level_of[v]);
        let i = self.idx(u, lv);
        self.cnt[i] -= 1;
        let i = self.idx(v, lu);
        self.cnt[i] -= 1;

        // Either endpoint may have been dominated through the removed edge.
        let u_lost = self.owner(u).dominant == v;
        let v_lost = self.owner(v).dominant == u;
        if u_lost {
            self.redominate_alone(g, u);
        }
        if v_lost {
            self.redominate_alone(g, v);
        }
        self.stabilize(g)
    }

    /// Restore stability by processing queued candidate violations.
    pub fn stabilize(&mut self, g: &DynGraph) -> Result<(), MdsError> {
        let cap = 64 * (self.n + self.queue.len());
        let mut processed = 0usize;
        while let Some((v, l)) = self.queue.pop_front() {
            if !self.violates(v, l) {
                continue;
            }
            processed += 1;
            if processed > cap {
                self.queue.clear();
                return Err(MdsError::InternalInconsistency { cap });
            }
            self.counters.violations_processed += 1;
            let members: Vec<VertexId> = g
                .closed_neighbors(v)
                .filter(|&x| self.level_of[x] == l)
                .collect();
            debug_assert_eq!(members.len(), self.counter(v, l) as usize);
            let level = lowest_level(members.len(), self.l_max);
            let id = self.create_pair(v, level);
            let mut former = Vec::new();
            for &x in &members {
                former.push(self.owner[x]);
                self.reassign(g, x, id, level);
            }
            former.sort_unstable();
            former.dedup();
            for pid in former {
                self.settle_pair(g, pid);
            }
        }
        Ok(())
    }

    /// `u` lost its dominator: detach it and give it a singleton pair at level 1.
    fn redominate_alone(&mut self, g: &DynGraph, u: VertexId) {
        let old = self.owner[u];
        let id = self.create_pair(u, 1);
        self.reassign(g, u, id, 1);
        self.settle_pair(g, old);
    }

    fn create_pair(&mut self, dominant: VertexId, level: u32) -> PairId {
        let id = self.next_id;
        self.next_id += 1;
        self.pairs.insert(
            id,
            DominatingPair {
                id,
                dominant,
                dom: IndexSet::new(),
                level,
            },
        );
        self.counters.pairs_created += 1;
        self.add_head(dominant);
        id
    }

    /// Move `x` from its current pair into `target` at `level`.
    fn reassign(&mut self, g: &DynGraph, x: VertexId, target: PairId, level: u32) {
        let old = self.owner[x];
        if let Some(p) = self.pairs.get_mut(&old) {
            p.dom.swap_remove(&x);
        }
        self.pairs.get_mut(&target).unwrap().dom.insert(x);
        self.owner[x] = target;
        self.counters.level_changes += 1;
        self.set_level(g, x, level);
    }

    /// Drop an emptied pair, or rehome one whose cardinality fell below its range.
    fn settle_pair(&mut self, g: &DynGraph, pid: PairId) {
        let Some(pair) = self.pairs.get(&pid) else {
            return;
        };
        let size = pair.dom.len();
        if size == 0 {
            let dominant = pair.dominant;
            self.pairs.remove(&pid);
            self.remove_head(dominant);
        } else if !in_range(size, pair.level) {
            let level = highest_level(size, self.l_max);
            let members: Vec<_> = pair.dom.iter().copied().collect();
            self.pairs.get_mut(&pid).unwrap().level = level;
            for x in members {
                self.counters.level_changes += 1;
                self.set_level(g, x, level);
            }
        }
    }

    fn set_level(&mut self, g: &DynGraph, x: VertexId, level: u32) {
        let old = self.level_of[x];
        if old == level {
            return;
        }
        self.level_of[x] = level;
        for y in g.closed_neighbors(x) {
            let i = self.idx(y, old);
            self.cnt[i] -= 1;
            self.bump(y, level);
        }
    }

    fn bump(&mut self, v: VertexId, level: u32) {
        let i = self.idx(v, level);
        self.cnt[i] += 1;
        if self.violates(v, level) {
            self.queue.push_back((v, level));
        }
    }

    fn violates(&self, v: VertexId, level: u32) -> bool {
        (self.cnt[self.idx(v, level)] as u64) > 1u64 << level
    }

    fn add_head(&mut self, v: VertexId) {
        self.heads[v] += 1;
        if self.heads[v] == 1 {
            self.counters.d_changes += 1;
            self.touch(v);
        }
    }

    fn remove_head(&mut self, v: VertexId) {
        self.heads[v] -= 1;
        if self.heads[v] == 0 {
            self.counters.d_changes += 1;
            self.touch(v);
        }
    }

    fn touch(&mut self, v: VertexId) {
        if !self.touched_flag[v] {
            self.touched_flag[v] = true;
            self.touched.push(v);
        }
    }

    #[inline]
    fn idx(&self, v: VertexId, level: u32) -> usize {
        v * (self.l_max as usize + 1) + level as usize
    }

    #[cfg(test)]
    pub(crate) fn corrupt_counter(&mut self, v: VertexId, level: u32, value: u32) {
        let i = self.idx(v, level);
        self.cnt[i] = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::trace::generate_trace;

    fn replay_checked(n: usize, steps: usize, p: f64, seed: u64) {
        let trace = generate_trace(n, steps, p, seed).unwrap();
        let mut g = DynGraph::new(n);
        let mut s = LevelSolution::new(n);
        for (i, e) in trace.events.iter().enumerate() {
            g.apply(e).unwrap();
            match e.kind {
                crate::graph::EventKind::Insert => s.insert_edge(&g, e.u, e.v).unwrap(),
                crate::graph::EventKind::Delete => s.delete_edge(&g, e.u, e.v).unwrap(),
            }
            let report = oracle::check_stable(&g, &s.snapshot());
            assert!(report.is_empty(), "event {i}: {report:?}");
            assert!(oracle::is_dominating(&g, &s.dominating_set()), "event {i}");
        }
    }

    #[test]
    fn level_functions() {
        let l_max = max_level(4);
        assert_eq!(l_max, 12);
        assert_eq!(lowest_level(1, l_max), 1);
        assert_eq!(lowest_level(3, l_max), 2);
        assert_eq!(lowest_level(4, l_max), 2);
        assert_eq!(lowest_level(1024, 30), 10);
        assert_eq!(highest_level(1, l_max), 10);
        assert_eq!(highest_level(2, l_max), 11);
        assert_eq!(highest_level(4, l_max), 12);
        assert_eq!(highest_level(1, max_level(1)), 10);
        assert_eq!(max_level(1), 10);
    }

    #[test]
    fn level_functions_land_in_range() {
        for n in [1usize, 2, 3, 7, 64, 1000] {
            let l_max = max_level(n);
            for c in 1..=n {
                let lo = lowest_level(c, l_max);
                let hi = highest_level(c, l_max);
                assert!(in_range(c, lo), "c={c} lo={lo}");
                assert!(in_range(c, hi), "c={c} hi={hi}");
                assert!(lo <= hi);
                assert!(lo == 1 || (c as u64) > 1 << (lo - 1));
                assert!(hi == l_max || !in_range(c, hi + 1));
            }
        }
    }

    #[test]
    fn init_singletons() {
        let s = LevelSolution::new(1);
        assert_eq!(s.num_pairs(), 1);
        assert_eq!(s.owner(0).level, 1);
        assert_eq!(s.dominating_set(), vec![0]);

        let s = LevelSolution::new(5);
        let g = DynGraph::new(5);
        assert_eq!(s.num_pairs(), 5);
        assert!(oracle::check_stable(&g, &s.snapshot()).is_empty());

        let s = LevelSolution::new(16);
        let g = DynGraph::new(16);
        assert_eq!(s.ds_view().members, (0..16).collect::<Vec<_>>());
        assert!(oracle::is_dominating(&g, &s.dominating_set()));
    }

    #[test]
    fn star_violation_creates_level_two_pair() {
        let n = 20;
        let (c, x1, x2) = (0, 1, 2);
        let mut g = DynGraph::new(n);
        let mut s = LevelSolution::new(n);
        g.insert_edge(c, x1).unwrap();
        s.insert_edge(&g, c, x1).unwrap();
        assert_eq!(s.num_pairs(), n);
        assert_eq!(s.counter(c, 1), 2);
        s.drain_changes();

        g.insert_edge(c, x2).unwrap();
        s.insert_edge(&g, c, x2).unwrap();
        assert_eq!(s.num_pairs(), n - 2);
        let p = s.owner(c);
        assert_eq!(p.dominant, c);
        assert_eq!(p.level, 2);
        let mut dom: Vec<_> = p.dom.iter().copied().collect();
        dom.sort();
        assert_eq!(dom, vec![c, x1, x2]);
        let mut expected = vec![c];
        expected.extend(3..n);
        assert_eq!(s.ds_view().members, expected);
        assert_eq!(
            s.drain_changes(),
            vec![DsChange::Left(x1), DsChange::Left(x2)]
        );
        assert!(oracle::check_stable(&g, &s.snapshot()).is_empty());
    }

    #[test]
    fn harmless_insert_changes_nothing() {
        let mut g = DynGraph::new(4);
        let mut s = LevelSolution::new(4);
        g.insert_edge(0, 1).unwrap();
        s.insert_edge(&g, 0, 1).unwrap();
        let before = s.counters().pairs_created;
        g.insert_edge(2, 3).unwrap();
        s.insert_edge(&g, 2, 3).unwrap();
        assert_eq!(s.counters().pairs_created, before);
        assert_eq!(s.num_pairs(), 4);
    }

    #[test]
    fn delete_between_self_dominated_only_touches_counters() {
        let mut g = DynGraph::new(4);
        let mut s = LevelSolution::new(4);
        g.insert_edge(0, 1).unwrap();
        s.insert_edge(&g, 0, 1).unwrap();
        let created = s.counters().pairs_created;
        g.delete_edge(0, 1).unwrap();
        s.delete_edge(&g, 0, 1).unwrap();
        assert_eq!(s.counters().pairs_created, created);
        assert_eq!(s.counter(0, 1), 1);
        assert_eq!(s.counter(1, 1), 1);
    }

    #[test]
    fn path_deletion_splits_off_singleton() {
        // Path 0-1-2: inserting (1,0) then (1,2) makes 1 violate at level 1.
        let mut g = DynGraph::new(3);
        let mut s = LevelSolution::new(3);
        for (a, b) in [(1, 0), (1, 2)] {
            g.insert_edge(a, b).unwrap();
            s.insert_edge(&g, a, b).unwrap();
        }
        assert_eq!(s.num_pairs(), 1);
        assert_eq!(s.owner(0).dominant, 1);
        assert_eq!(s.owner(0).level, 2);

        g.delete_edge(1, 0).unwrap();
        s.delete_edge(&g, 1, 0).unwrap();
        assert_eq!(s.num_pairs(), 2);
        let p1 = s.owner(1);
        assert_eq!(p1.dominant, 1);
        assert_eq!(p1.dom.len(), 2);
        assert_eq!(p1.level, 2);
        let p0 = s.owner(0);
        assert_eq!((p0.dominant, p0.level, p0.dom.len()), (0, 1, 1));
        assert!(oracle::check_stable(&g, &s.snapshot()).is_empty());
    }

    #[test]
    fn complete_graph_collapses() {
        let n = 8;
        let mut g = DynGraph::new(n);
        let mut s = LevelSolution::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v).unwrap();
                s.insert_edge(&g, u, v).unwrap();
            }
        }
        let (opt, _) = oracle::exact_min_ds(&g).unwrap();
        assert_eq!(opt, 1);
        assert!(s.ds_size() <= 8);
        assert!(s.ds_size() as f64 <= 1024.0 * 3.0 * opt as f64);
        assert!(oracle::check_stable(&g, &s.snapshot()).is_empty());
    }

    #[test]
    fn insert_only_replay_stays_stable() {
        replay_checked(64, 500, 0.0, 17);
    }

    #[test]
    fn mixed_replay_stays_stable() {
        replay_checked(64, 2000, 0.5, 23);
        replay_checked(16, 2000, 0.3, 5);
    }

    #[test]
    fn corrupted_counter_detected() {
        let g = DynGraph::new(3);
        let mut s = LevelSolution::new(3);
        s.corrupt_counter(1, 1, 5);
        let report = oracle::check_stable(&g, &s.snapshot());
        assert!(!report.is_empty());
    }

    #[test]
    fn membership_changes_bounded_by_level_changes() {
        for seed in 0..6 {
            let trace = generate_trace(32, 1500, 0.3 * (seed % 3) as f64, seed).unwrap();
            let mut g = DynGraph::new(32);
            let mut s = LevelSolution::new(32);
            for e in &trace.events {
                g.apply(e).unwrap();
                match e.kind {
                    crate::graph::EventKind::Insert => s.insert_edge(&g, e.u, e.v).unwrap(),
                    crate::graph::EventKind::Delete => s.delete_edge(&g, e.u, e.v).unwrap(),
                }
            }
            let c = s.counters();
            assert!(c.d_changes <= c.level_changes, "{c:?}");
        }
    }
}

//! Brute-force ground truth. Every function here recomputes its answer from
//! the graph and a plain snapshot, sharing no state with the solvers.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{DynGraph, VertexId};
use crate::mds::{in_range, LevelSnapshot};

pub const EXACT_DS_CAP: usize = 20;
pub const EXACT_CDS_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search limited to n <= {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("connected dominating set requires a connected graph")]
    NotConnected,
}

/// One failed check, with the vertex/level/value it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: &'static str,
    pub vertex: VertexId,
    pub level: u32,
    pub value: i64,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: vertex={} level={} value={}",
            self.check, self.vertex, self.level, self.value
        )
    }
}

fn diag(check: &'static str, vertex: VertexId, level: u32, value: i64) -> Diagnostic {
    Diagnostic {
        check,
        vertex,
        level,
        value,
    }
}

/// Verdicts of every applicable oracle. Inapplicable checks stay `true`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub dominating: bool,
    pub minimal_ds: bool,
    pub dtilde_connected: bool,
    pub c_minimal: bool,
    pub stable: bool,
    pub nc_ok: bool,
    pub ratio_ok: bool,
    pub selection_ok: bool,
    pub details: Vec<Diagnostic>,
}

impl Default for OracleReport {
    fn default() -> Self {
        Self {
            dominating: true,
            minimal_ds: true,
            dtilde_connected: true,
            c_minimal: true,
            stable: true,
            nc_ok: true,
            ratio_ok: true,
            selection_ok: true,
            details: Vec::new(),
        }
    }
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.dominating
            && self.minimal_ds
            && self.dtilde_connected
            && self.c_minimal
            && self.stable
            && self.nc_ok
            && self.ratio_ok
            && self.selection_ok
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        let flags = [
            ("dominating", self.dominating),
            ("minimal_ds", self.minimal_ds),
            ("dtilde_connected", self.dtilde_connected),
            ("c_minimal", self.c_minimal),
            ("stable", self.stable),
            ("nc_ok", self.nc_ok),
            ("ratio_ok", self.ratio_ok),
            ("selection_ok", self.selection_ok),
        ];
        flags
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

fn membership(n: usize, set: &[VertexId]) -> Vec<bool> {
    let mut flags = vec![false; n];
    for &v in set {
        flags[v] = true;
    }
    flags
}

pub fn is_dominating(g: &DynGraph, set: &[VertexId]) -> bool {
    undominated(g, set).is_empty()
}

pub fn undominated(g: &DynGraph, set: &[VertexId]) -> Vec<VertexId> {
    let inside = membership(g.n(), set);
    (0..g.n())
        .filter(|&v| !inside[v] && !g.neighbors(v).iter().any(|&u| inside[u]))
        .collect()
}

pub fn is_connected(g: &DynGraph) -> bool {
    let all = vec![true; g.n()];
    g.n() == 0 || component_of(g, &all, 0).len() == g.n()
}

/// Vertices reachable from `start` inside `G[allowed]`.
fn component_of(g: &DynGraph, allowed: &[bool], start: VertexId) -> Vec<VertexId> {
    let mut seen = vec![false; g.n()];
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if allowed[y] && !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

/// Number of connected components of `G[allowed]`.
fn count_components(g: &DynGraph, allowed: &[bool]) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    for s in 0..g.n() {
        if !allowed[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if allowed[y] && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// Validates a level snapshot: one owner per vertex, pairs inside closed
/// neighborhoods with in-range cardinalities, counters equal to a fresh
/// recount, and no `(v, l)` with `|N[v] ∩ V_l| > 2^l`.
pub fn check_stable(g: &DynGraph, snap: &LevelSnapshot) -> Vec<Diagnostic> {
    let n = snap.n;
    let mut out = Vec::new();
    let mut level_of: Vec<Option<u32>> = vec![None; n];
    for (dominant, dom, level) in &snap.pairs {
        let (dominant, level) = (*dominant, *level);
        if dom.is_empty() {
            out.push(diag("empty pair", dominant, level, 0));
        }
        if level < 1 || level > snap.l_max || !in_range(dom.len(), level) {
            out.push(diag("level range", dominant, level, dom.len() as i64));
        }
        for &x in dom {
            if x != dominant && !g.has_edge(dominant, x) {
                out.push(diag(
                    "dom outside closed neighborhood",
                    x,
                    level,
                    dominant as i64,
                ));
            }
            if level_of[x].replace(level).is_some() {
                out.push(diag("vertex owned twice", x, level, 2));
            }
        }
    }
    for (v, l) in level_of.iter().enumerate() {
        if l.is_none() {
            out.push(diag("vertex without owner", v, 0, 0));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for v in 0..n {
        let mut fresh = vec![0u32; snap.l_max as usize + 1];
        fresh[level_of[v].unwrap() as usize] += 1;
        for &u in g.neighbors(v) {
            fresh[level_of[u].unwrap() as usize] += 1;
        }
        for (l, &c) in fresh.iter().enumerate() {
            if snap.counters[v][l] != c {
                out.push(diag(
                    "counter mismatch",
                    v,
                    l as u32,
                    snap.counters[v][l] as i64,
                ));
            }
            if (c as u64) > 1u64 << l {
                out.push(diag("stability violated", v, l as u32, c as i64));
            }
        }
    }
    out
}

pub fn is_stable(g: &DynGraph, snap: &LevelSnapshot) -> bool {
    check_stable(g, snap).is_empty()
}

/// No member can be dropped while staying dominating.
pub fn is_minimal_ds(g: &DynGraph, set: &[VertexId]) -> bool {
    redundant_members(g, set).is_empty() && is_dominating(g, set)
}

/// Members `v` such that `set \ {v}` still dominates.
pub fn redundant_members(g: &DynGraph, set: &[VertexId]) -> Vec<VertexId> {
    let inside = membership(g.n(), set);
    let dominators = |v: VertexId| g.closed_neighbors(v).filter(|&u| inside[u]).count();
    set.iter()
        .copied()
        .filter(|&v| g.closed_neighbors(v).all(|u| dominators(u) >= 2))
        .collect()
}

/// Vertices of `G[dtilde]` whose G-component meets more than one component of `G[dtilde]`.
pub fn dtilde_disconnections(g: &DynGraph, dtilde: &[VertexId]) -> Vec<Diagnostic> {
    let n = g.n();
    let in_dt = membership(n, dtilde);
    let all = vec![true; n];
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let comp = component_of(g, &all, s);
        for &x in &comp {
            seen[x] = true;
        }
        let mut local = vec![false; n];
        for &x in &comp {
            local[x] = in_dt[x];
        }
        let parts = count_components(g, &local);
        if parts > 1 {
            out.push(diag("dtilde disconnected in component", s, 0, parts as i64));
        }
    }
    out
}

/// Members of `C` that are not articulation points of `G[D ∪ C]` within their G-component.
pub fn redundant_connectors(g: &DynGraph, d: &[VertexId], c: &[VertexId]) -> Vec<VertexId> {
    let n = g.n();
    let all = vec![true; n];
    let mut in_dt = membership(n, d);
    for &x in c {
        in_dt[x] = true;
    }
    c.iter()
        .copied()
        .filter(|&x| {
            let comp = component_of(g, &all, x);
            let mut rest = vec![false; n];
            for &y in &comp {
                rest[y] = in_dt[y] && y != x;
            }
            count_components(g, &rest) <= 1
        })
        .collect()
}

pub fn is_minimal_connector(g: &DynGraph, d: &[VertexId], c: &[VertexId]) -> bool {
    redundant_connectors(g, d, c).is_empty()
}

/// Components of `Q \ {v}`, where `Q` is the component of `G[dtilde]` containing `v`.
pub fn nc_bruteforce(g: &DynGraph, dtilde: &[VertexId], v: VertexId) -> usize {
    let in_dt = membership(g.n(), dtilde);
    debug_assert!(in_dt[v]);
    let comp = component_of(g, &in_dt, v);
    let mut rest = vec![false; g.n()];
    for &y in &comp {
        rest[y] = y != v;
    }
    count_components(g, &rest)
}

/// Repeatedly take the vertex covering the most undominated vertices, ties to least id.
pub fn greedy_static_ds(g: &DynGraph) -> Vec<VertexId> {
    let n = g.n();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, _) = (0..n)
            .map(|v| (v, g.closed_neighbors(v).filter(|&u| !covered[u]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        chosen.push(best);
        for u in g.closed_neighbors(best) {
            if !covered[u] {
                covered[u] = true;
                left -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

fn closed_masks(g: &DynGraph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.closed_neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect()
}

fn mask_connected(adj: &[u32], set: u32) -> bool {
    if set == 0 {
        return true;
    }
    let start = set.trailing_zeros();
    let mut reach = 1u32 << start;
    loop {
        let mut next = reach;
        let mut bits = reach;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            next |= adj[v as usize] & set;
        }
        if next == reach {
            return reach == set;
        }
        reach = next;
    }
}

/// Depth-first enumeration of `k`-subsets in lexicographic order. Branches
/// are cut when the least undominated vertex has no remaining dominator.
fn search(
    masks: &[u32],
    full: u32,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    covered: u32,
    accept: &dyn Fn(&[usize]) -> bool,
) -> bool {
    if chosen.len() == k {
        return covered == full && accept(chosen);
    }
    let n = masks.len();
    if covered != full {
        let u = (!covered & full).trailing_zeros() as usize;
        let last_dominator = 31 - masks[u].leading_zeros() as usize;
        if last_dominator < start {
            return false;
        }
    }
    for x in start..n {
        if n - x < k - chosen.len() {
            break;
        }
        chosen.push(x);
        if search(masks, full, k, x + 1, chosen, covered | masks[x], accept) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Minimum dominating set by exhaustive search; the witness is the
/// lexicographically least optimum.
pub fn exact_min_ds(g: &DynGraph) -> Result<(usize, Vec<VertexId>), OracleError> {
    let n = g.n();
    if n > EXACT_DS_CAP {
        return Err(OracleError::TooLarge {
            n,
            cap: EXACT_DS_CAP,
        });
    }
    let masks = closed_masks(g);
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for k in 1..=n {
        let mut chosen = Vec::new();
        if search(&masks, full, k, 0, &mut chosen, 0, &|_| true) {
            return Ok((k, chosen));
        }
    }
    unreachable!("the full vertex set dominates")
}

/// Minimum connected dominating set of a connected graph by exhaustive search.
pub fn exact_min_cds(g: &DynGraph) -> Result<(usize, Vec<VertexId>), OracleError> {
    let n = g.n();
    if n > EXACT_CDS_CAP {
        return Err(OracleError::TooLarge {
            n,
            cap: EXACT_CDS_CAP,
        });
    }
    if !is_connected(g) {
        return Err(OracleError::NotConnected);
    }
    let masks = closed_masks(g);
    let open: Vec<u32> = (0..n).map(|v| masks[v] & !(1 << v)).collect();
    let full = (1u32 << n) - 1;
    let accept = |set: &[usize]| {
        let m = set.iter().fold(0u32, |m, &v| m | 1 << v);
        mask_connected(&open, m)
    };
    for k in 1..=n {
        let mut chosen = Vec::new();
        if search(&masks, full, k, 0, &mut chosen, 0, &accept) {
            return Ok((k, chosen));
        }
    }
    unreachable!("a connected graph is its own connected dominating set")
}

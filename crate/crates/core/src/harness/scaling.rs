//! Per-update time across a doubling schedule of graph sizes.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::thread;
use std::time::Instant;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forest::Backend;
use crate::graph::{DynGraph, UpdateEvent, VertexId};
use crate::trace::{generate_trace, UpdateTrace};

use super::solver::{make_solver, SolverKind};

/// Largest tolerated max/min spread of normalized time across sizes.
pub const CONSISTENT_SPREAD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    /// Insert-only random graph with about `n^2 / 8` edges.
    #[default]
    Dense,
    /// A few hubs adjacent to everything, then repeated deletion and
    /// reinsertion of hub edges.
    StarHeavy,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Dense => "dense",
            Family::StarHeavy => "star",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(Family::Dense),
            "star" => Ok(Family::StarHeavy),
            _ => Err(format!("unknown family {s:?} (expected dense or star)")),
        }
    }
}

pub fn family_trace(family: Family, n: usize, seed: u64) -> UpdateTrace {
    match family {
        Family::Dense => generate_trace(n, n * n / 8, 0.0, seed).expect("n >= 2"),
        Family::StarHeavy => star_trace(n, seed),
    }
}

fn star_trace(n: usize, seed: u64) -> UpdateTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hubs = ((n as f64).sqrt() as usize).max(1);
    let mut present: IndexSet<(VertexId, VertexId)> = IndexSet::new();
    let mut events = Vec::new();
    for h in 0..hubs {
        for v in h + 1..n {
            present.insert((h, v));
            events.push(UpdateEvent::insert(h, v));
        }
    }
    let mut removed: Vec<(VertexId, VertexId)> = Vec::new();
    for _ in 0..4 * n {
        if removed.is_empty() || rng.gen_bool(0.5) {
            let i = rng.gen_range(0..present.len());
            let (u, v) = present.swap_remove_index(i).unwrap();
            removed.push((u, v));
            events.push(UpdateEvent::delete(u, v));
        } else {
            let (u, v) = removed.swap_remove(rng.gen_range(0..removed.len()));
            present.insert((u, v));
            events.push(UpdateEvent::insert(u, v));
        }
    }
    UpdateTrace { n, events }
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub solver: SolverKind,
    pub family: Family,
    pub sizes: Vec<usize>,
    pub backend: Backend,
    pub seed: u64,
    /// One worker thread per size. Timings then share the machine.
    pub parallel: bool,
}

impl ScalingConfig {
    pub fn new(solver: SolverKind) -> Self {
        Self {
            solver,
            family: Family::Dense,
            sizes: vec![64, 128, 256, 512],
            backend: Backend::default(),
            seed: 1,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub events: usize,
    pub m: usize,
    pub delta: usize,
    pub ns_per_update: f64,
    /// `delta * log2 n` for the level-based solvers, `min(delta, sqrt m)` for minimal.
    pub unit: f64,
}

impl ScalingRow {
    pub fn normalized(&self) -> f64 {
        self.ns_per_update / self.unit.max(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct ScalingTable {
    pub solver: SolverKind,
    pub family: Family,
    pub rows: Vec<ScalingRow>,
}

impl ScalingTable {
    /// Max over min of normalized time.
    pub fn spread(&self) -> f64 {
        let norms = self.rows.iter().map(ScalingRow::normalized);
        let max = norms.clone().fold(f64::MIN, f64::max);
        let min = norms.fold(f64::MAX, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    }

    /// Largest factor by which normalized time rises from a smaller size to
    /// a larger one. Falling normalized time gives 1.
    pub fn growth(&self) -> f64 {
        let norms: Vec<f64> = self.rows.iter().map(ScalingRow::normalized).collect();
        let mut worst: f64 = 1.0;
        for (i, a) in norms.iter().enumerate() {
            for b in &norms[i + 1..] {
                if *a > 0.0 {
                    worst = worst.max(b / a);
                }
            }
        }
        worst
    }

    pub fn consistent(&self) -> bool {
        self.spread() < CONSISTENT_SPREAD
    }

    /// Least-squares slope of log time against log unit.
    pub fn exponent(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .map(|r| (r.unit.max(1.0).ln(), r.ns_per_update.max(1e-9).ln()))
            .collect();
        let k = pts.len() as f64;
        let (mx, my) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / k, b + y / k));
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let unit = if self.solver == SolverKind::Minimal {
            "min(delta,sqrt m)"
        } else {
            "delta*log2 n"
        };
        let _ = writeln!(
            out,
            "solver {} family {} unit {unit}",
            self.solver, self.family
        );
        let _ = writeln!(
            out,
            "{:>6} {:>8} {:>8} {:>6} {:>12} {:>10} {:>10}",
            "n", "events", "m", "delta", "ns/update", "unit", "ns/unit"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>6} {:>8} {:>8} {:>6} {:>12.1} {:>10.1} {:>10.3}",
                r.n,
                r.events,
                r.m,
                r.delta,
                r.ns_per_update,
                r.unit,
                r.normalized()
            );
        }
        let _ = writeln!(
            out,
            "spread {:.2} growth {:.2} exponent {:.2} trend {}",
            self.spread(),
            self.growth(),
            self.exponent(),
            if self.consistent() {
                "consistent"
            } else {
                "inconsistent"
            }
        );
        out
    }
}

fn measure(cfg: &ScalingConfig, n: usize) -> ScalingRow {
    let trace = family_trace(cfg.family, n, cfg.seed ^ n as u64);
    let mut g = DynGraph::new(n);
    let mut solver = make_solver(cfg.solver, n, cfg.backend);
    let mut ns = 0u128;
    for e in &trace.events {
        g.apply(e).expect("generated traces are valid");
        let start = Instant::now();
        solver
            .apply(&g, e)
            .expect("solver failed during a benchmark");
        ns += start.elapsed().as_nanos();
    }
    let delta = g.delta_max();
    let unit = if cfg.solver == SolverKind::Minimal {
        (delta as f64).min((g.m_max() as f64).sqrt())
    } else {
        delta as f64 * (n as f64).log2()
    };
    ScalingRow {
        n,
        events: trace.events.len(),
        m: g.m(),
        delta,
        ns_per_update: ns as f64 / trace.events.len().max(1) as f64,
        unit,
    }
}

pub fn scaling_bench(cfg: &ScalingConfig) -> ScalingTable {
    let rows = if cfg.parallel {
        thread::scope(|s| {
            let handles: Vec<_> = cfg
                .sizes
                .iter()
                .map(|&n| s.spawn(move || measure(cfg, n)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    } else {
        cfg.sizes.iter().map(|&n| measure(cfg, n)).collect()
    };
    ScalingTable {
        solver: cfg.solver,
        family: cfg.family,
        rows,
    }
}

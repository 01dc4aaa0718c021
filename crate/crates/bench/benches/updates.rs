use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};

use dyndom_core::forest::{Backend, DynamicConnectivity};
use dyndom_core::harness::{family_trace, make_solver, Family, SolverKind};
use dyndom_core::{generate_trace, DynGraph, UpdateTrace};

fn replay(kind: SolverKind, backend: Backend, trace: &UpdateTrace) -> usize {
    let mut g = DynGraph::new(trace.n);
    let mut s = make_solver(kind, trace.n, backend);
    for e in &trace.events {
        g.apply(e).unwrap();
        s.apply(&g, e).unwrap();
    }
    s.dominating_set().len()
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("replay");
    group.sample_size(10);
    for n in [64, 128, 256] {
        let trace = generate_trace(n, 4 * n, 0.4, 7).unwrap();
        group.throughput(Throughput::Elements(trace.events.len() as u64));
        for kind in SolverKind::ALL {
            group.bench_with_input(BenchmarkId::new(kind.name(), n), &trace, |b, t| {
                b.iter(|| replay(kind, Backend::Leveled, t))
            });
        }
    }
    group.finish();
}

fn dense_inserts(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_inserts");
    group.sample_size(10);
    for n in [64, 128, 256] {
        let trace = family_trace(Family::Dense, n, 3);
        group.throughput(Throughput::Elements(trace.events.len() as u64));
        group.bench_with_input(BenchmarkId::new("mds", n), &trace, |b, t| {
            b.iter(|| replay(SolverKind::Mds, Backend::Leveled, t))
        });
    }
    group.finish();
}

fn connectivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("connectivity");
    group.sample_size(10);
    let n = 200;
    let trace = generate_trace(n, 20_000, 0.45, 11).unwrap();
    group.throughput(Throughput::Elements(trace.events.len() as u64));
    for backend in [Backend::Naive, Backend::Leveled] {
        group.bench_function(backend.to_string(), |b| {
            b.iter_batched(
                || DynamicConnectivity::new(n, backend),
                |mut dc| {
                    for e in &trace.events {
                        match e.kind {
                            dyndom_core::EventKind::Insert => {
                                dc.insert_edge(e.u, e.v).unwrap();
                            }
                            dyndom_core::EventKind::Delete => {
                                dc.delete_edge(e.u, e.v).unwrap();
                            }
                        }
                    }
                    dc.num_components()
                },
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, solvers, dense_inserts, connectivity);
criterion_main!(benches);

use proptest::prelude::*;

use dyndom_core::forest::Backend;
use dyndom_core::harness::{make_solver, run_trace, RunConfig, SolverKind, TraceSource};
use dyndom_core::oracle;
use dyndom_core::{generate_trace, parse_trace, serialize_trace, DynGraph, UpdateTrace};

fn arb_trace() -> impl Strategy<Value = UpdateTrace> {
    (3usize..13, 1usize..80, 0.0f64..0.9, any::<u64>())
        .prop_map(|(n, steps, p, seed)| generate_trace(n, steps, p, seed).unwrap())
}

fn arb_kind() -> impl Strategy<Value = SolverKind> {
    prop::sample::select(SolverKind::ALL.to_vec())
}

fn arb_backend() -> impl Strategy<Value = Backend> {
    prop::sample::select(vec![Backend::Naive, Backend::Leveled])
}

fn config(kind: SolverKind, backend: Backend, verify_every: usize) -> RunConfig {
    let mut cfg = RunConfig::new(kind, TraceSource::File("<memory>".into()));
    cfg.backend = backend;
    cfg.verify_every = verify_every;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn traces_round_trip(t in arb_trace()) {
        let text = serialize_trace(&t);
        prop_assert_eq!(parse_trace(text.as_bytes()).unwrap(), t);
    }

    #[test]
    fn every_oracle_holds_after_every_event(t in arb_trace(), kind in arb_kind(), backend in arb_backend()) {
        let out = run_trace(&config(kind, backend, 1), &t).unwrap();
        prop_assert!(out.violation.is_none(), "{}", out.violation.unwrap().summary());
        for r in &out.records {
            if let Some(ratio) = r.ratio {
                prop_assert!(ratio >= 1.0);
            }
        }
        for w in out.records.windows(2) {
            prop_assert!(w[0].lvl_changes <= w[1].lvl_changes);
            prop_assert!(w[0].d_changes <= w[1].d_changes);
            prop_assert!(w[0].dt_adds <= w[1].dt_adds);
        }
    }

    #[test]
    fn replays_are_deterministic(t in arb_trace(), kind in arb_kind(), backend in arb_backend()) {
        let a = run_trace(&config(kind, backend, 0), &t).unwrap();
        let b = run_trace(&config(kind, backend, 0), &t).unwrap();
        prop_assert_eq!(&a.final_ds, &b.final_ds);
        prop_assert_eq!(&a.final_connectors, &b.final_connectors);
        prop_assert_eq!(a.churn, b.churn);
    }

    #[test]
    fn backends_do_not_change_the_answer(t in arb_trace(), kind in arb_kind()) {
        let a = run_trace(&config(kind, Backend::Naive, 0), &t).unwrap();
        let b = run_trace(&config(kind, Backend::Leveled, 0), &t).unwrap();
        prop_assert_eq!(a.final_ds, b.final_ds);
    }

    #[test]
    fn connected_final_graphs_get_a_connected_dtilde(t in arb_trace()) {
        let mut g = DynGraph::new(t.n);
        let mut s = make_solver(SolverKind::CdsFast, t.n, Backend::Leveled);
        for e in &t.events {
            g.apply(e).unwrap();
            s.apply(&g, e).unwrap();
        }
        let mut dt = s.dominating_set();
        dt.extend(s.connectors());
        prop_assert!(oracle::is_dominating(&g, &dt));
        prop_assert!(oracle::dtilde_disconnections(&g, &dt).is_empty());
        if oracle::is_connected(&g) {
            let (opt, _) = oracle::exact_min_cds(&g).unwrap();
            prop_assert!(dt.len() >= opt);
        }
    }
}

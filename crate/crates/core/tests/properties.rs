use asym_containers::container::{Container, ContainerEngine, ContainerParams, Cylinder};
use asym_containers::exact::{from_decimal, int, to_f64};
use asym_containers::experiment::{Command, ExperimentConfig};
use asym_containers::graph::pair_from_index;
use asym_containers::oracle::{is_induced_c4_free, is_split};
use asym_containers::pregraph::{good_c4_enumerate, Pregraph};
use asym_containers::split_counts::{feasible_range, n_nm, ratio_identity_holds};
use asym_containers::{Assignment, Constraint, LabeledGraph, UniformHypergraph};
use num_bigint::BigInt;
use proptest::prelude::*;

/// A small (k0, k1)-uniform hypergraph as raw constraint vertex lists.
fn hypergraph() -> impl Strategy<Value = UniformHypergraph> {
    (1usize..=3, 0usize..=3, 4usize..=9).prop_flat_map(|(k, k0_raw, n)| {
        let k0 = k0_raw.min(k);
        let k1 = k - k0;
        let edge = proptest::sample::subsequence((0..n as u32).collect::<Vec<_>>(), k).prop_shuffle();
        proptest::collection::vec(edge, 1..12).prop_map(move |edges| {
            let cs = edges
                .into_iter()
                .map(|vs| (Constraint::new(vs[..k0].iter().copied(), vs[k0..].iter().copied()).unwrap(), 1));
            UniformHypergraph::from_edges(n, k0, k1, cs).unwrap()
        })
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        any::<u64>().prop_map(move |m| LabeledGraph::from_pair_mask(n, if pairs == 64 { m } else { m & ((1 << pairs) - 1) }))
    })
}

fn pregraph() -> impl Strategy<Value = Pregraph> {
    (4usize..=9).prop_flat_map(|n| {
        proptest::collection::vec(0u8..4, n * (n - 1) / 2).prop_map(move |status| {
            let (mut m, mut e) = (LabeledGraph::empty(n), LabeledGraph::empty(n));
            let mut k = 0;
            for w in 1..n {
                for u in 0..w {
                    match status[k] {
                        0 | 1 => drop(m.add_edge(u, w)),
                        2 => drop(e.add_edge(u, w)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            Pregraph::new(m, e).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn containers_cover_and_witness(h in hypergraph(), b in 1u64..3, m in 1u64..9, r in 1u64..9, mask in any::<u64>()) {
        let n = h.n_vertices();
        let x = Assignment::from_mask(n, mask & ((1 << n) - 1));
        prop_assume!(h.is_satisfied_by(&x));
        let params = ContainerParams { k: int(1), b, m, r, force: true };
        let engine = ContainerEngine::new(h, &params).unwrap();
        prop_assume!(x.ones_count() as u64 <= engine.normalized_bm().1);
        let Container { fingerprint, cylinder, .. } = engine.build(&x).unwrap();
        prop_assert!(cylinder.contains(&x));
        prop_assert!(fingerprint.s0.iter().all(|&v| !x.get(v)));
        prop_assert!(fingerprint.s1.iter().all(|&v| x.get(v)));
        // the fingerprint alone determines the container
        let again = engine.build(&x).unwrap();
        prop_assert_eq!(again.cylinder, cylinder);
    }

    #[test]
    fn containers_of_agrees_with_build(h in hypergraph(), masks in proptest::collection::vec(any::<u64>(), 1..20)) {
        let n = h.n_vertices();
        let xs: Vec<Assignment> = masks
            .iter()
            .map(|&m| Assignment::from_mask(n, m & ((1 << n) - 1)))
            .filter(|x| h.is_satisfied_by(x))
            .collect();
        prop_assume!(!xs.is_empty());
        let params = ContainerParams { k: int(1), b: 1, m: n as u64, r: 1, force: true };
        let engine = ContainerEngine::new(h, &params).unwrap();
        for (c, idx) in engine.containers_of(&xs).unwrap() {
            for i in idx {
                prop_assert_eq!(&engine.build(&xs[i]).unwrap(), &c);
            }
        }
    }

    #[test]
    fn hypergraph_text_round_trip(h in hypergraph()) {
        prop_assert_eq!(UniformHypergraph::from_text(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn cylinder_text_round_trip(s in "[01*]{0,24}") {
        prop_assert_eq!(Cylinder::parse(&s).unwrap().to_string(), s);
    }

    #[test]
    fn graph6_round_trip(g in graph(11)) {
        prop_assert_eq!(LabeledGraph::from_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn split_graphs_are_induced_c4_free(g in graph(9)) {
        if let Some(w) = is_split(&g) {
            prop_assert!(w.is_valid(&g));
            prop_assert!(is_induced_c4_free(&g));
        }
    }

    #[test]
    fn pregraph_text_round_trip(p in pregraph()) {
        prop_assert_eq!(Pregraph::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn good_copies_are_mixed_cycles_on_free_sets(p in pregraph()) {
        for c in good_c4_enumerate(&p) {
            let q = c.vertices;
            for i in 0..4 {
                for j in i + 1..4 {
                    prop_assert!(!p.fixed().has_edge(q[i], q[j]));
                }
            }
            for &e in &c.cycle_edges {
                let (u, w) = pair_from_index(e);
                prop_assert!(p.mixed().has_edge(u, w));
            }
            prop_assert!(c.extra_mixed.len() <= 2);
        }
    }

    #[test]
    fn split_counts_ratio_identity(n in 4u64..40, m_frac in 0.0f64..1.0) {
        let m = ((n * (n - 1) / 2) as f64 * m_frac).floor() as u64;
        let range = feasible_range(n, m);
        for ell in *range.start()..*range.end() {
            prop_assert!(ratio_identity_holds(n, m, ell).unwrap());
        }
        prop_assert!(range.clone().all(|l| n_nm(n, m, l) > BigInt::from(0)));
    }

    #[test]
    fn decimals_parse_exactly(x in -1e6f64..1e6) {
        let r = from_decimal(x).unwrap();
        prop_assert_eq!(to_f64(&r), x);
    }

    #[test]
    fn config_kv_round_trip(seed in any::<u64>(), n in 3u64..100, eps in 0.001f64..0.5) {
        let mut cfg = ExperimentConfig::new(Command::Tree).with("n", n).with("eps", eps);
        cfg.seed = seed;
        prop_assert_eq!(ExperimentConfig::from_kv_text(&cfg.to_kv_text()).unwrap(), cfg);
    }
}

use proptest::prelude::*;

use ueds::decomp::{
    emit_nice, emit_td, make_nice, make_nice_with, parse_nice, parse_td, td_from_vertex_cover,
    td_star_from_vertex_cover, validate_nice, validate_td, EdgePlacement, NiceDecomposition, NiceOptions,
};
use ueds::dp::{extract_witness, run_dp, table_size_bound, DpOptions, Origin};
use ueds::graph::{
    domination_count, greedy_maximal_matching, greedy_maximal_matching_in_order, is_edge_dominating,
    is_minimal_eds, parse_graph, star_decomposition, verify_star_certificate, vertex_cover_from_matching,
    EdgeSet, Graph,
};
use ueds::oracle::{upper_eds_exact, OracleConfig};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn with_order(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let order: Vec<usize> = (0..g.m()).collect();
        (Just(g), Just(order).prop_shuffle())
    })
}

fn cover(g: &Graph) -> Vec<usize> {
    vertex_cover_from_matching(g, &greedy_maximal_matching(g)).unwrap()
}

fn path_nice(g: &Graph) -> NiceDecomposition {
    make_nice(g, &td_from_vertex_cover(g, &cover(g)).unwrap()).unwrap()
}

fn star_nice(g: &Graph) -> NiceDecomposition {
    make_nice(g, &td_star_from_vertex_cover(g, &cover(g)).unwrap()).unwrap()
}

fn oracle_gamma(g: &Graph) -> usize {
    upper_eds_exact(g, OracleConfig::default()).unwrap().gamma_prime
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn maximal_matchings_are_minimal_eds((g, order) in with_order(8)) {
        let m = greedy_maximal_matching_in_order(&g, &order).unwrap();
        prop_assert!(is_minimal_eds(&g, &m));
        prop_assert!(star_decomposition(&g, &m).is_ok());
    }

    #[test]
    fn domination_count_matches_dominating(g in graph(6), mask in any::<u64>()) {
        let m = EdgeSet::from_mask(g.m(), mask & ((1u64 << g.m()) - 1));
        let all = (0..g.m()).all(|e| domination_count(&g, &m, e).unwrap() >= 1);
        prop_assert_eq!(all, is_edge_dominating(&g, &m));
    }

    #[test]
    fn minimal_sets_are_star_forests(g in graph(6), mask in any::<u64>()) {
        let m = EdgeSet::from_mask(g.m(), mask & ((1u64 << g.m()) - 1));
        if is_minimal_eds(&g, &m) {
            prop_assert!(verify_star_certificate(&g, &m).is_ok());
            for e in m.iter() {
                let mut smaller = m.clone();
                smaller.remove(e);
                prop_assert!(!is_edge_dominating(&g, &smaller));
            }
        }
    }

    #[test]
    fn dp_matches_oracle_on_both_layouts(g in graph(7)) {
        let want = oracle_gamma(&g);
        for nd in [path_nice(&g), star_nice(&g)] {
            let run = run_dp(&g, &nd, DpOptions::default()).unwrap();
            prop_assert_eq!(run.gamma_prime, want);
        }
    }

    #[test]
    fn pruning_does_not_change_the_answer(g in graph(6)) {
        let nd = path_nice(&g);
        let on = run_dp(&g, &nd, DpOptions::default()).unwrap();
        let off = run_dp(&g, &nd, DpOptions { prune: false, ..DpOptions::default() }).unwrap();
        prop_assert_eq!(on.gamma_prime, off.gamma_prime);
        prop_assert!(on.max_table <= off.max_table);
    }

    #[test]
    fn beta_never_decreases_towards_the_root(g in graph(6)) {
        let nd = path_nice(&g);
        let run = run_dp(&g, &nd, DpOptions { prune: false, ..DpOptions::default() }).unwrap();
        for (x, node) in nd.nodes.iter().enumerate() {
            let table = &run.tables[x];
            for i in 0..table.len() {
                let (t, origin) = table.tuple(i);
                let below: Vec<u32> = match *origin {
                    Origin::Leaf => vec![],
                    Origin::From(j) | Origin::Include(j) => vec![run.tables[node.children[0]].tuple(j).0.beta],
                    Origin::Join(a, b) => vec![
                        run.tables[node.children[0]].tuple(a).0.beta,
                        run.tables[node.children[1]].tuple(b).0.beta,
                    ],
                };
                prop_assert!(below.iter().all(|&b| b <= t.beta));
            }
        }
    }

    #[test]
    fn witness_is_a_largest_minimal_eds(g in graph(8)) {
        let nd = path_nice(&g);
        let run = run_dp(&g, &nd, DpOptions::default()).unwrap();
        let w = extract_witness(&g, &nd, &run);
        prop_assert_eq!(w.len(), run.gamma_prime);
        prop_assert!(is_minimal_eds(&g, &w));
        prop_assert!(verify_star_certificate(&g, &w).is_ok());
    }

    #[test]
    fn dp_is_at_least_any_matching((g, order) in with_order(9)) {
        let run = run_dp(&g, &path_nice(&g), DpOptions::default()).unwrap();
        let m = greedy_maximal_matching_in_order(&g, &order).unwrap();
        prop_assert!(run.gamma_prime >= m.len());
    }

    #[test]
    fn tables_respect_the_bound(g in graph(9)) {
        let run = run_dp(&g, &path_nice(&g), DpOptions::default()).unwrap();
        let bound = table_size_bound(run.width, g.n(), g.m());
        prop_assert!(run.stats.iter().all(|s| s.tuples as u128 <= bound));
    }

    #[test]
    fn nice_decompositions_are_valid(g in graph(9), late in any::<bool>()) {
        for td in [
            td_from_vertex_cover(&g, &cover(&g)).unwrap(),
            td_star_from_vertex_cover(&g, &cover(&g)).unwrap(),
        ] {
            prop_assert!(validate_td(&g, &td).is_empty());
            let placement = if late { EdgePlacement::Late } else { EdgePlacement::Early };
            let nd = make_nice_with(&g, &td, NiceOptions { placement }).unwrap();
            prop_assert_eq!(validate_nice(&g, &nd), vec![]);
            prop_assert_eq!(nd.width(), td.width());
            prop_assert!(nd.len() <= 4 * (g.n() * (td.width() + 1) + g.m()));
        }
    }

    #[test]
    fn text_formats_round_trip(g in graph(8)) {
        prop_assert_eq!(&parse_graph(&g.to_pace()).unwrap(), &g);
        let td = td_from_vertex_cover(&g, &cover(&g)).unwrap();
        prop_assert_eq!(&parse_td(&emit_td(&td)).unwrap(), &td);
        let nd = path_nice(&g);
        prop_assert_eq!(parse_nice(&emit_nice(&nd, g.n()), &g).unwrap(), nd);
    }
}

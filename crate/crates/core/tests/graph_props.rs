use edgebal_core::graph::{emit_edge_list, pair_count, parse_edge_list};
use edgebal_core::{emit_graph6, parse_graph6, Edge, EdgeSwap, LabeledGraph};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n, any::<u64>()).prop_flat_map(|(n, seed)| {
        (0..=pair_count(n)).prop_map(move |k| {
            let mut rng = StdRng::seed_from_u64(seed);
            LabeledGraph::random(n, k, &mut rng).unwrap()
        })
    })
}

fn random_swap(g: &LabeledGraph, rng: &mut impl Rng) -> Option<EdgeSwap> {
    if g.k() == 0 || g.k() == g.pair_count() {
        return None;
    }
    let remove = g.edges()[rng.gen_range(0..g.k())];
    loop {
        let u = rng.gen_range(0..g.n());
        let v = rng.gen_range(0..g.n());
        if u != v && !g.has_edge(u, v) {
            return Some(EdgeSwap::new(remove, Edge::new(u, v)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph6_round_trip(g in graph_strategy(100)) {
        let text = emit_graph6(&g);
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.sorted_edges(), g.sorted_edges());
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(40)) {
        let back = parse_edge_list(&emit_edge_list(&g), Some(g.n())).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn swaps_stay_in_class_and_invert(g in graph_strategy(30), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let Some(swap) = random_swap(&g, &mut rng) else { return Ok(()) };
        let h = g.apply_swap(swap).unwrap();
        prop_assert_eq!(h.n(), g.n());
        prop_assert_eq!(h.k(), g.k());
        h.check_consistency().unwrap();
        prop_assert!(!h.has_edge(swap.remove.u(), swap.remove.v()));
        prop_assert!(h.has_edge(swap.add.u(), swap.add.v()));
        prop_assert_eq!(h.apply_swap(swap.inverse()).unwrap(), g);
    }

    #[test]
    fn degree_sum_and_neighbors_agree(g in graph_strategy(70)) {
        g.check_consistency().unwrap();
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.k());
        for v in 0..g.n() {
            prop_assert_eq!(g.neighbors(v).count(), g.degree(v));
        }
    }

    #[test]
    fn near_regular_law(n in 2usize..80, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = ((pair_count(n) as f64) * frac) as usize;
        let g = LabeledGraph::near_regular_random(n, k, seed).unwrap();
        prop_assert_eq!(g.k(), k);
        let lo = (0..n).map(|v| g.degree(v)).min().unwrap();
        let hi = (0..n).map(|v| g.degree(v)).max().unwrap();
        prop_assert!(hi - lo <= 1, "degrees span {}..{}", lo, hi);
        prop_assert_eq!(lo, 2 * k / n);
        prop_assert_eq!(LabeledGraph::near_regular_random(n, k, seed).unwrap(), g);
    }
}

#[test]
fn invalid_swaps_are_rejected() {
    let g = LabeledGraph::new(5, &[(0, 1), (1, 2)]).unwrap();
    assert!(g.apply_swap(EdgeSwap::new(Edge::new(3, 4), Edge::new(0, 4))).is_err());
    assert!(g.apply_swap(EdgeSwap::new(Edge::new(0, 1), Edge::new(1, 2))).is_err());
}

#[test]
fn complement_is_involutive() {
    let mut rng = StdRng::seed_from_u64(3);
    let g = LabeledGraph::random(13, 21, &mut rng).unwrap();
    let c = g.complement();
    assert_eq!(c.k(), 78 - 21);
    assert_eq!(c.complement(), g);
}

use polytree_core::gen::{random_instance, GenConfig};
use polytree_core::model::NodeSet;
use polytree_core::scoreio::{
    parse_graph, parse_scores, parse_set_family, write_graph, write_scores, write_set_family,
    GraphInput, SetFamilyInput,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn scores_round_trip(n in 2usize..9, spn in 1usize..5, additive: bool, seed: u64) {
        let cfg = GenConfig {
            n,
            max_parent_size: 1.max((n - 1).min(3)),
            sets_per_node: spn.min(n - 1),
            score_low: -50,
            score_high: 50,
            seed,
            additive,
        };
        let inst = random_instance(&cfg).unwrap();
        let text = write_scores(&inst);
        let back = parse_scores(&text).unwrap();
        prop_assert_eq!(back.names(), inst.names());
        prop_assert_eq!(back.families(), inst.families());
        prop_assert_eq!(write_scores(&back), text);
    }

    #[test]
    fn fractional_scores_round_trip(x in -1e6f64..1e6, y in -1e-3f64..1e-3) {
        let text = format!("2\na 2\n{x} 1 b\n0 0\nb 2\n{y} 1 a\n0 0\n");
        let inst = parse_scores(&text).unwrap();
        let again = parse_scores(&write_scores(&inst)).unwrap();
        prop_assert_eq!(again.families(), inst.families());
    }

    #[test]
    fn graphs_round_trip(n in 1usize..10, pairs in prop::collection::btree_set((0usize..10, 0usize..10), 0..20)) {
        let edges: Vec<_> = pairs
            .into_iter()
            .filter(|&(u, v)| u < v && v < n)
            .collect();
        let g = GraphInput::new(n, edges).unwrap();
        let back = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(back.n, g.n);
        prop_assert_eq!(back.edges, g.edges);
    }

    #[test]
    fn set_families_round_trip(sets in prop::collection::vec(prop::collection::btree_set(0usize..6, 1..4), 0..6), t in 0usize..7) {
        let sets: Vec<NodeSet> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let fam = SetFamilyInput::new(6, sets, t.min(6)).unwrap();
        let back = parse_set_family(&write_set_family(&fam)).unwrap();
        prop_assert_eq!(back.universe, fam.universe);
        prop_assert_eq!(back.sets, fam.sets);
        prop_assert_eq!(back.t, fam.t);
    }
}

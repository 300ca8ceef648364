use polytree_core::exactdp::solve_full_dp;
use polytree_core::model::{check_constraints, NodeSet};
use polytree_core::oracle::{brute_force, brute_mis, brute_set_partition, ConstraintSet};
use polytree_core::reductions::{
    reduce_independent_set, reduce_independent_set_comp, reduce_set_partition, SourceAnswer,
};
use polytree_core::scoreio::{GraphInput, SetFamilyInput};
use polytree_core::Score;

fn family(universe: usize, sets: Vec<NodeSet>, t: usize) -> SetFamilyInput {
    SetFamilyInput::new(universe, sets, t).unwrap()
}

#[test]
fn partition_of_singletons() {
    let input = family(2, vec![[0].into(), [1].into()], 2);
    let (inst, cert) = reduce_set_partition(&input, 2).unwrap();
    assert_eq!(inst.n(), 4);
    let r = solve_full_dp(&inst).unwrap();
    assert_eq!(r.score, Score::from(2));
    assert!(cert.holds(r.score, SourceAnswer::HasPartition(true)));
    let mut cover = cert.back_translate(&r.polytree);
    cover.sort();
    assert_eq!(cover, vec![NodeSet::from([0, 1])]);
}

#[test]
fn no_partition_scores_below_universe() {
    let input = family(3, vec![[0, 1].into(), [1, 2].into()], 2);
    assert!(!brute_set_partition(&input).unwrap());
    let (inst, cert) = reduce_set_partition(&input, 1).unwrap();
    assert_eq!(inst.n(), 3 + 2 + 1);
    let r = solve_full_dp(&inst).unwrap();
    assert!(r.score < Score::from(3));
    assert!(cert.holds(r.score, SourceAnswer::HasPartition(false)));
}

#[test]
fn chosen_sets_are_disjoint() {
    let input = family(4, vec![[0, 1].into(), [2, 3].into(), [1, 2].into()], 2);
    let (inst, cert) = reduce_set_partition(&input, 1).unwrap();
    let r = solve_full_dp(&inst).unwrap();
    assert_eq!(r.score, Score::from(4));
    let cover = cert.back_translate(&r.polytree);
    assert_eq!(cover.iter().map(NodeSet::len).sum::<usize>(), 4);
    for (i, a) in cover.iter().enumerate() {
        for b in &cover[i + 1..] {
            assert!(a.is_disjoint(b));
        }
    }
}

#[test]
fn independent_set_examples() {
    let cases = [
        (GraphInput::new(3, []).unwrap(), 3),
        (GraphInput::new(2, [(0, 1)]).unwrap(), 1),
        (GraphInput::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap(), 1),
        (GraphInput::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap(), 2),
    ];
    for (g, mis) in cases {
        assert_eq!(brute_mis(&g).unwrap(), mis);
        let (inst, cert) = reduce_independent_set(&g);
        let r = solve_full_dp(&inst).unwrap();
        assert!(cert.holds(r.score, SourceAnswer::MaxIndependentSet(mis)), "{g:?}");
        let picked = cert.back_translate(&r.polytree);
        assert_eq!(picked.len(), mis);
        for s in &picked {
            let v = s.iter().next().unwrap();
            for w in picked.iter().map(|t| t.iter().next().unwrap()) {
                assert!(!g.edges.contains(&(v.min(w), v.max(w))));
            }
        }
    }
}

#[test]
fn independent_set_comp_examples() {
    let cases = [
        (GraphInput::new(2, [(0, 1)]).unwrap(), 3, 1),
        (GraphInput::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap(), 4, 3),
        (GraphInput::new(3, [(0, 1), (1, 2)]).unwrap(), 3, 2),
    ];
    for (g, q_expected, mis) in cases {
        let (inst, q, cert) = reduce_independent_set_comp(&g).unwrap();
        assert_eq!(q, q_expected);
        let r = brute_force(&inst, &ConstraintSet::component_arcs(q)).unwrap();
        assert!(check_constraints(&inst, &r.polytree).is_ok());
        assert!(cert.holds(r.score, SourceAnswer::MaxIndependentSet(mis)), "{g:?}");
        assert_eq!(brute_mis(&g).unwrap(), mis);
    }
}

#[test]
fn unpadded_single_edge_would_break_the_comp_reduction() {
    // With q = d + 1 = 2 and no padding, both endpoints can take the shared
    // edge node: a path of two arcs, score 2 against an independence number
    // of 1. The reduction pads to two parents and uses q = 3 instead.
    use polytree_core::model::InstanceBuilder;
    let naive = InstanceBuilder::new(["a", "b", "e"])
        .entry("a", &["e"], 1)
        .entry("b", &["e"], 1)
        .build_normalized()
        .unwrap();
    let r = brute_force(&naive, &ConstraintSet::component_arcs(2)).unwrap();
    assert_eq!(r.score, Score::from(2));
}

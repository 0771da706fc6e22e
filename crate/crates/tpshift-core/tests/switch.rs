mod common;

use std::collections::BTreeSet;

use common::{brute_reach, naive_svss, suite, Rule};
use tpshift_core::instances::{gen_random, i1};
use tpshift_core::switch::{
    enumerate_spts, enumerate_svss, enumerate_svss_limited, implied_spt, is_temporal_switch,
    is_valid_svs, svs_reachability, svs_suffix_union, tree_reach_mask,
};
use tpshift_core::{
    Error, ShiftOperation, Switch, SwitchPathTree, SwitchVertexSet, TemporalKPathGraph,
};

fn sw(g: &TemporalKPathGraph, v: &str, from: usize, to: usize) -> Switch {
    Switch::new(g.vertex_by_name(v).unwrap(), from, to)
}

fn names(g: &TemporalKPathGraph, set: &BTreeSet<tpshift_core::VertexId>) -> Vec<String> {
    set.iter().map(|v| g.name(*v).to_string()).collect()
}

fn delayed_i1() -> TemporalKPathGraph {
    i1().apply_shift(&ShiftOperation::new(1, 1, 1)).unwrap()
}

/// s -> a -> b -> c on the root; a second path through b and c; a third
/// path through a.
fn three_paths() -> TemporalKPathGraph {
    TemporalKPathGraph::from_named(
        &[
            (&["s", "a", "b", "c"], &[1, 2, 3]),
            (&["x", "b", "c", "y"], &[1, 5, 6]),
            (&["z", "a", "w"], &[0, 9]),
        ],
        "s",
    )
    .unwrap()
}

#[test]
fn switch_with_larger_out_label_is_temporal() {
    let g = TemporalKPathGraph::from_named(
        &[(&["s", "a", "b"], &[1, 5]), (&["x", "a", "y"], &[0, 2])],
        "s",
    )
    .unwrap();
    assert!(is_temporal_switch(&g, &sw(&g, "a", 0, 1)).unwrap());
}

#[test]
fn switch_with_equal_labels_is_not_temporal() {
    let g = i1();
    assert!(!is_temporal_switch(&g, &sw(&g, "a", 0, 1)).unwrap());
}

#[test]
fn delaying_the_out_edge_makes_switch_temporal() {
    let g = delayed_i1();
    assert!(is_temporal_switch(&g, &sw(&g, "a", 0, 1)).unwrap());
}

#[test]
fn structurally_invalid_switch_is_an_error() {
    let g = i1();
    // b ends the root path, y ends the other one
    assert!(matches!(
        is_temporal_switch(&g, &sw(&g, "b", 0, 1)),
        Err(Error::InvalidSwitch { .. })
    ));
    assert!(matches!(
        is_temporal_switch(&g, &sw(&g, "s", 0, 1)),
        Err(Error::InvalidSwitch { .. })
    ));
}

#[test]
fn empty_svs_is_valid() {
    assert!(is_valid_svs(&i1(), &SwitchVertexSet::empty()));
}

#[test]
fn two_switches_onto_one_path_are_invalid() {
    let g = three_paths();
    let svs = SwitchVertexSet::new(vec![sw(&g, "b", 0, 1), sw(&g, "c", 0, 1)]);
    assert!(!is_valid_svs(&g, &svs));
    assert!(is_valid_svs(
        &g,
        &SwitchVertexSet::new(vec![sw(&g, "b", 0, 1)])
    ));
}

#[test]
fn leaving_before_entering_is_invalid() {
    // path 1 is entered at c but left at b, which comes before c
    let g = TemporalKPathGraph::from_named(
        &[
            (&["s", "a", "c", "d"], &[1, 2, 3]),
            (&["x", "b", "c", "y"], &[1, 5, 6]),
            (&["z", "b", "w"], &[0, 9]),
        ],
        "s",
    )
    .unwrap();
    let early = SwitchVertexSet::new(vec![sw(&g, "c", 0, 1), sw(&g, "b", 1, 2)]);
    assert!(!is_valid_svs(&g, &early));
    // leaving at the entry vertex itself is also rejected
    let g = TemporalKPathGraph::from_named(
        &[
            (&["s", "b", "d"], &[1, 2]),
            (&["x", "b", "y"], &[1, 5]),
            (&["z", "b", "w"], &[0, 9]),
        ],
        "s",
    )
    .unwrap();
    let same = SwitchVertexSet::new(vec![sw(&g, "b", 0, 1), sw(&g, "b", 1, 2)]);
    assert!(!is_valid_svs(&g, &same));
    assert!(is_valid_svs(
        &g,
        &SwitchVertexSet::new(vec![sw(&g, "b", 0, 1), sw(&g, "b", 0, 2)])
    ));
}

#[test]
fn switch_off_an_unentered_path_is_invalid() {
    let g = TemporalKPathGraph::from_named(
        &[
            (&["s", "a"], &[1]),
            (&["x", "b", "y"], &[1, 2]),
            (&["z", "b", "w"], &[0, 9]),
        ],
        "s",
    )
    .unwrap();
    assert!(!is_valid_svs(
        &g,
        &SwitchVertexSet::new(vec![sw(&g, "b", 1, 2)])
    ));
}

#[test]
fn empty_svs_reaches_root_suffix() {
    let g = i1();
    let r = svs_reachability(&g, &SwitchVertexSet::empty(), g.source()).unwrap();
    assert_eq!(names(&g, &r), ["s", "a", "b"]);
}

#[test]
fn temporal_switch_adds_suffix() {
    let g = delayed_i1();
    let svs = SwitchVertexSet::new(vec![sw(&g, "a", 0, 1)]);
    assert_eq!(
        names(&g, &svs_reachability(&g, &svs, g.source()).unwrap()),
        ["s", "a", "b", "y"]
    );
}

#[test]
fn non_temporal_svs_is_a_contract_error() {
    let g = i1();
    let svs = SwitchVertexSet::new(vec![sw(&g, "a", 0, 1)]);
    assert!(matches!(
        svs_reachability(&g, &svs, g.source()),
        Err(Error::Contract(_))
    ));
}

#[test]
fn svs_reachability_matches_respecting_walks() {
    for g in suite(80) {
        let s = g.source();
        for svs in enumerate_svss(&g)
            .iter()
            .filter(|v| v.is_temporal(&g).unwrap())
        {
            assert_eq!(
                svs_reachability(&g, svs, s).unwrap(),
                brute_reach(&g, s, Rule::Respecting(svs))
            );
        }
    }
}

#[test]
fn some_temporal_svs_explains_all_reach() {
    for g in suite(120) {
        let s = g.source();
        let reach = g.reach_set(s).unwrap();
        let mut best = 0;
        for svs in enumerate_svss(&g)
            .iter()
            .filter(|v| v.is_temporal(&g).unwrap())
        {
            let r = svs_reachability(&g, svs, s).unwrap();
            assert!(r.is_subset(&reach));
            best = best.max(r.len());
        }
        assert_eq!(best, reach.len());
    }
}

#[test]
fn implied_tree_follows_switches() {
    let g = i1();
    assert_eq!(
        implied_spt(&SwitchVertexSet::empty(), 2, 0),
        SwitchPathTree::root_only(2, 0)
    );
    let t = implied_spt(&SwitchVertexSet::new(vec![sw(&g, "a", 0, 1)]), 2, 0);
    assert_eq!(t.parents(), &[None, Some(0)]);

    let chain = SwitchVertexSet::new(vec![
        Switch::new(tpshift_core::VertexId(0), 0, 1),
        Switch::new(tpshift_core::VertexId(1), 1, 2),
        Switch::new(tpshift_core::VertexId(2), 2, 3),
    ]);
    let t = implied_spt(&chain, 4, 0);
    assert_eq!(t.depth(3), Some(3));
    assert_eq!(t.bfs_order(), vec![0, 1, 2, 3]);
}

#[test]
fn spanning_tree_counts() {
    let counts: Vec<usize> = (1..=6)
        .map(|k| enumerate_spts(k, 0, false).count())
        .collect();
    assert_eq!(counts, vec![1, 1, 3, 16, 125, 1296]);
}

#[test]
fn partial_tree_counts() {
    // rooted trees on every subset containing the root
    fn binom(n: u64, r: u64) -> u64 {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for k in 1..=5u64 {
        let expected: u64 = (0..k)
            .map(|j| binom(k - 1, j) * (j + 1).pow(j.saturating_sub(1) as u32))
            .sum();
        assert_eq!(
            enumerate_spts(k as usize, 0, true).count() as u64,
            expected,
            "k = {k}"
        );
    }
}

#[test]
fn enumerated_trees_are_distinct_and_rooted() {
    for root in 0..4 {
        let trees: Vec<SwitchPathTree> = enumerate_spts(4, root, true).collect();
        let unique: BTreeSet<Vec<Option<usize>>> =
            trees.iter().map(|t| t.parents().to_vec()).collect();
        assert_eq!(unique.len(), trees.len());
        let spanning = trees.iter().take_while(|t| t.is_spanning()).count();
        assert_eq!(spanning, 16);
        for t in &trees {
            assert_eq!(t.root(), root);
            assert!(SwitchPathTree::from_parents(root, t.parents().to_vec()).is_ok());
            assert!((0..4)
                .filter(|&p| t.contains(p))
                .all(|p| t.depth(p).is_some()));
        }
    }
}

#[test]
fn bad_parent_vectors_are_rejected() {
    assert!(SwitchPathTree::from_parents(0, vec![None, Some(2), Some(1)]).is_err());
    assert!(SwitchPathTree::from_parents(0, vec![Some(1), None]).is_err());
    assert!(SwitchPathTree::from_parents(0, vec![None, Some(1)]).is_err());
}

#[test]
fn disjoint_paths_admit_only_the_empty_svs() {
    let g = gen_random(3, 4, 8, 0.0, 5).unwrap();
    assert_eq!(enumerate_svss(&g), vec![SwitchVertexSet::empty()]);
}

#[test]
fn fixture_has_two_svss() {
    let g = i1();
    assert_eq!(
        enumerate_svss(&g),
        vec![
            SwitchVertexSet::empty(),
            SwitchVertexSet::new(vec![sw(&g, "a", 0, 1)])
        ]
    );
}

#[test]
fn enumeration_matches_definition_filter() {
    for seed in 0..40u64 {
        let g = gen_random(3, 4, 8, 0.8, seed).unwrap();
        let fast: BTreeSet<BTreeSet<Switch>> = enumerate_svss(&g)
            .iter()
            .map(|v| v.switches().iter().copied().collect())
            .collect();
        let naive: BTreeSet<BTreeSet<Switch>> = naive_svss(&g).into_iter().collect();
        assert_eq!(fast, naive, "seed {seed}");
        assert_eq!(enumerate_svss(&g).len(), naive.len());
        assert!(enumerate_svss(&g).iter().all(|v| is_valid_svs(&g, v)));
    }
}

#[test]
fn enumeration_limit_is_enforced() {
    let g = i1();
    assert!(matches!(
        enumerate_svss_limited(&g, 1),
        Err(Error::ResourceLimit { .. })
    ));
    assert_eq!(enumerate_svss_limited(&g, 2).unwrap().len(), 2);
}

#[test]
fn tree_reach_respects_tree_edges() {
    let g = delayed_i1();
    let edge = SwitchPathTree::from_parents(0, vec![None, Some(0)]).unwrap();
    let reach = |t: &SwitchPathTree| -> Vec<String> {
        tree_reach_mask(&g, t)
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| g.name(tpshift_core::VertexId(i as u32)).to_string())
            .collect()
    };
    let mut with_edge = reach(&edge);
    with_edge.sort();
    assert_eq!(with_edge, ["a", "b", "s", "y"]);
    let mut root_only = reach(&SwitchPathTree::root_only(2, 0));
    root_only.sort();
    assert_eq!(root_only, ["a", "b", "s"]);
    // unshifted labels keep the switch closed
    let closed = tree_reach_mask(&i1(), &edge).iter().filter(|&&b| b).count();
    assert_eq!(closed, 3);
}

#[test]
fn tree_reach_equals_best_respecting_svs() {
    for g in suite(60) {
        let s = g.source();
        for t in enumerate_spts(g.k(), g.source_path(), true) {
            let tree = tree_reach_mask(&g, &t).iter().filter(|&&b| b).count();
            let best = enumerate_svss(&g)
                .iter()
                .filter(|v| v.is_temporal(&g).unwrap())
                .filter(|v| {
                    v.switches()
                        .iter()
                        .all(|sw| t.parent(sw.to) == Some(sw.from))
                })
                .map(|v| svs_suffix_union(&g, v, s).len())
                .max()
                .unwrap();
            assert_eq!(tree, best);
        }
    }
}

use std::collections::BTreeSet;

use tpshift_core::instances::{
    gen_mcis_delay_gadget, gen_random, ops_from_mcis_witness, parse_mcis, McisInstance,
};
use tpshift_core::switch::enumerate_svss;
use tpshift_core::{write_instance, Error, SwitchVertexSet};

fn two_by_two(edges: &str) -> McisInstance {
    parse_mcis(&format!("color A: a1 a2\ncolor B: b1 b2\n{edges}")).unwrap()
}

#[test]
fn random_generation_is_deterministic() {
    let a = gen_random(3, 6, 10, 0.4, 7).unwrap();
    let b = gen_random(3, 6, 10, 0.4, 7).unwrap();
    assert_eq!(write_instance(&a), write_instance(&b));
    assert_ne!(
        write_instance(&a),
        write_instance(&gen_random(3, 6, 10, 0.4, 8).unwrap())
    );
}

#[test]
fn random_graphs_are_valid() {
    for seed in 0..200u64 {
        let k = 1 + (seed % 4) as usize;
        let n = 2 + (seed % 5) as usize;
        let g = gen_random(
            k,
            n,
            n as i64 + (seed % 6) as i64,
            (seed % 11) as f64 / 10.0,
            seed,
        )
        .unwrap();
        assert!(g.validate().is_empty(), "seed {seed}");
        assert_eq!(g.k(), k);
        assert!(g.paths().iter().all(|p| p.vertices().len() == n));
        assert!(g
            .paths()
            .iter()
            .flat_map(|p| p.labels())
            .all(|&t| (0..n as i64 + (seed % 6) as i64).contains(&t)));
    }
}

#[test]
fn unshared_paths_admit_only_empty_svs() {
    let g = gen_random(4, 5, 9, 0.0, 2).unwrap();
    assert_eq!(enumerate_svss(&g), vec![SwitchVertexSet::empty()]);
}

#[test]
fn single_path_reaches_its_suffix() {
    let g = gen_random(1, 5, 9, 0.5, 4).unwrap();
    assert_eq!(g.reach_count(g.source()).unwrap(), 5);
}

#[test]
fn random_rejects_bad_parameters() {
    assert!(matches!(
        gen_random(2, 5, 4, 0.5, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        gen_random(0, 5, 9, 0.5, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        gen_random(2, 1, 9, 0.5, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        gen_random(2, 3, 9, 1.5, 0),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn mcis_parsing_and_validation() {
    let m = two_by_two("# comment\nedge b1 a2\n");
    assert_eq!(m.colors.len(), 2);
    assert!(m.has_edge("a2", "b1"));
    assert!(matches!(
        parse_mcis("color A: a1 a2\nedge a1 a2\n"),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        parse_mcis("color A: a1\ncolor B: a1\n"),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        parse_mcis("color A a1\n"),
        Err(Error::Parse { line: 1, .. })
    ));
    assert!(matches!(
        parse_mcis("colour A: a1\n"),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        parse_mcis("color A: a1\nedge a1 zz\n"),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn gadget_budget_and_shape() {
    let m = two_by_two("edge a1 b1\n");
    let gadget = gen_mcis_delay_gadget(&m, Some(32)).unwrap();
    assert_eq!(gadget.budget, 95);
    assert_eq!(gadget.graph.k(), 5);
    assert!(gadget.graph.validate().is_empty());
    // a1 sits in no forward gap and in the backward gap after bot1
    let g = &gadget.graph;
    let names =
        |p: usize| -> Vec<&str> { g.path(p).vertices().iter().map(|v| g.name(*v)).collect() };
    assert_eq!(
        names(0),
        ["s", "A.top0", "A.top1", "A.top2", "B.top0", "B.top1", "B.top2"]
    );
    assert_eq!(names(1), ["A.top1", "A.bot1", "A.top2", "A.bot2"]);
    assert_eq!(
        names(2),
        ["A.top1", "A.bot1", "e.a1.b1", "A.top0", "A.bot0"]
    );
    assert_eq!(g.path(1).labels(), &[-32, -31, 0]);
    assert_eq!(g.path(2).labels(), &[-32, -31, -30, 0]);
}

#[test]
fn gadget_vertex_counts() {
    let m = parse_mcis(
        "color A: a1 a2 a3\ncolor B: b1 b2\ncolor C: c1\nedge a1 b2\nedge a2 c1\nedge b1 c1\n",
    )
    .unwrap();
    let gadget = gen_mcis_delay_gadget(&m, Some(1000)).unwrap();
    let g = &gadget.graph;
    assert_eq!(g.k(), 7);
    // pair vertices, edge vertices and the source
    let pairs: usize = m.colors.iter().map(|(_, n)| 2 * (n.len() + 1)).sum();
    assert_eq!(g.vertex_count(), pairs + m.edges.len() + 1);
    for (c, paths) in gadget.colors.iter().enumerate() {
        let n = m.colors[c].1.len();
        let inserted = |p: usize| {
            g.path(p)
                .vertices()
                .iter()
                .filter(|v| g.name(**v).starts_with("e."))
                .count()
        };
        assert_eq!(
            g.path(paths.forward).vertices().len() - inserted(paths.forward),
            2 * n
        );
        assert_eq!(
            g.path(paths.backward).vertices().len() - inserted(paths.backward),
            2 * n
        );
    }
}

#[test]
fn default_omega_is_fourth_power() {
    let m = two_by_two("");
    let gadget = gen_mcis_delay_gadget(&m, None).unwrap();
    assert_eq!(gadget.omega, 256);
    assert_eq!(gadget.budget, 2 * 256 + 255);
}

#[test]
fn tiny_omega_is_rejected() {
    let m = two_by_two("edge a1 b1\nedge a2 b2\nedge a1 b2\n");
    assert!(matches!(
        gen_mcis_delay_gadget(&m, Some(1)),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn witness_of_independent_set_reaches_everything() {
    let m = two_by_two("edge a1 b1\n");
    let gadget = gen_mcis_delay_gadget(&m, Some(32)).unwrap();
    let g = &gadget.graph;
    for choice in [[0usize, 1], [1, 0], [1, 1]] {
        assert!(m.is_independent(&choice));
        let ops = ops_from_mcis_witness(&gadget, &m, &choice).unwrap();
        let (h, cost) = g.apply_sequence(&ops).unwrap();
        assert!(cost <= gadget.budget, "{choice:?}");
        assert!(ops.iter().all(|o| o.delta > 0));
        assert_eq!(
            h.reach_count(gadget.source).unwrap(),
            g.vertex_count(),
            "{choice:?}"
        );
    }
}

#[test]
fn witness_of_dependent_pair_misses_an_edge_vertex() {
    let m = two_by_two("edge a1 b1\n");
    let gadget = gen_mcis_delay_gadget(&m, Some(32)).unwrap();
    let g = &gadget.graph;
    assert!(!m.is_independent(&[0, 0]));
    let ops = ops_from_mcis_witness(&gadget, &m, &[0, 0]).unwrap();
    let h = g.apply_sequence(&ops).unwrap().0;
    let reached: BTreeSet<&str> = h
        .reach_set(gadget.source)
        .unwrap()
        .iter()
        .map(|v| g.name(*v))
        .collect();
    assert!(!reached.contains("e.a1.b1"));
    assert_eq!(reached.len(), g.vertex_count() - 1);
}

#[test]
fn any_choice_works_without_edges() {
    let m = parse_mcis("color A: a1 a2 a3\ncolor B: b1 b2 b3\n").unwrap();
    let gadget = gen_mcis_delay_gadget(&m, None).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let ops = ops_from_mcis_witness(&gadget, &m, &[i, j]).unwrap();
            let (h, cost) = gadget.graph.apply_sequence(&ops).unwrap();
            assert!(cost <= gadget.budget);
            assert_eq!(
                h.reach_count(gadget.source).unwrap(),
                gadget.graph.vertex_count()
            );
        }
    }
}

#[test]
fn malformed_choice_is_rejected() {
    let m = two_by_two("");
    let gadget = gen_mcis_delay_gadget(&m, Some(32)).unwrap();
    assert!(ops_from_mcis_witness(&gadget, &m, &[0]).is_err());
    assert!(ops_from_mcis_witness(&gadget, &m, &[0, 2]).is_err());
}

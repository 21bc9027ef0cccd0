use dirlap_core::assumptions::{beta_minus, beta_plus, check_kirchhoff};
use dirlap_core::generators::{make_ladder, make_random_balanced, make_tree, LadderMeasure, LadderSpec, TreeSpec};
use dirlap_core::topology::spheres;
use dirlap_core::DirectedGraph;
use proptest::prelude::*;

fn w(g: &DirectedGraph, x: &str, y: &str) -> f64 {
    g.weight(g.vertex(x).unwrap(), g.vertex(y).unwrap())
}

#[test]
fn ladder_depth_five_golden_weights() {
    let g = make_ladder(&LadderSpec::new(5, LadderMeasure::SqrtN)).unwrap();
    let table: &[(&str, &str, f64)] = &[
        ("x0", "x1", 3.0),
        ("y1", "x0", 3.0),
        ("x0", "y1", 1.0),
        ("x1", "x0", 1.0),
        ("x1", "x2", 6.0),
        ("x2", "x1", 2.0),
        ("y1", "y2", 2.0),
        ("y2", "y1", 6.0),
        ("x2", "x3", 12.0),
        ("x3", "x2", 6.0),
        ("y2", "y3", 6.0),
        ("y3", "y2", 12.0),
        ("x3", "x4", 20.0),
        ("x4", "x3", 12.0),
        ("y3", "y4", 12.0),
        ("y4", "y3", 20.0),
        ("x4", "x5", 30.0),
        ("x5", "x4", 20.0),
        ("y4", "y5", 20.0),
        ("y5", "y4", 30.0),
        ("y1", "x1", 2.0),
        ("x2", "y2", 1.0),
        ("y2", "x2", 3.0),
        ("x3", "y3", 2.0),
        ("y3", "x3", 4.0),
        ("x4", "y4", 3.0),
        ("y4", "x4", 5.0),
        ("x5", "y5", 4.0),
        ("y5", "x5", 6.0),
    ];
    for &(x, y, b) in table {
        assert_eq!(w(&g, x, y), b, "b({x}, {y})");
    }
    // the rung x1 -> y1 has weight 0 and is absent
    assert_eq!(g.num_edges(), table.len());
    assert_eq!(g.num_vertices(), 11);
    for n in 1..=5 {
        assert_eq!(g.measure(g.vertex(&format!("y{n}")).unwrap()), (n as f64).sqrt());
    }
    assert_eq!(g.measure(g.vertex("x0").unwrap()), 1.0);
}

#[test]
fn ladder_is_balanced_away_from_the_far_end() {
    for measure in [LadderMeasure::SqrtN, LadderMeasure::Unit] {
        let g = make_ladder(&LadderSpec::new(12, measure)).unwrap();
        let sph = spheres(&g, g.vertex("x0").unwrap()).unwrap();
        let interior: Vec<_> = sph[..12].iter().flatten().copied().collect();
        let verdict = check_kirchhoff(&g, &interior).unwrap();
        assert!(verdict.balanced);
        assert_eq!(verdict.max_imbalance, 0.0);
        // the last sphere lost its outer edges
        assert!(!check_kirchhoff(&g, &sph[12]).unwrap().balanced);
        assert_eq!(sph[3].len(), 2);
    }
}

#[test]
fn ladder_with_general_k_stays_balanced() {
    for k in [0.0, 2.0, 5.0] {
        let g = make_ladder(&LadderSpec { depth: 6, k, measure: LadderMeasure::Unit }).unwrap();
        for x in ["x0", "x1", "y1", "x3"] {
            let v = g.vertex(x).unwrap();
            assert_eq!(beta_plus(&g, v).unwrap(), beta_minus(&g, v).unwrap(), "k = {k}, {x}");
        }
    }
}

#[test]
fn tree_has_one_way_in_and_out_at_every_inner_vertex() {
    let spec = TreeSpec::new(4);
    let g = make_tree(&spec).unwrap();
    let sph = spheres(&g, g.vertex("v0").unwrap()).unwrap();
    assert_eq!(sph.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 3, 12, 60, 360]);
    for level in &sph[..4] {
        for &x in level {
            let (mut out_only, mut in_only) = (0, 0);
            for &y in g.neighbors(x) {
                match (g.weight(x, y) > 0.0, g.weight(y, x) > 0.0) {
                    (true, false) => out_only += 1,
                    (false, true) => in_only += 1,
                    (true, true) => {}
                    (false, false) => unreachable!(),
                }
                assert!(g.weight(x, y) <= 1.0 && g.weight(y, x) <= 1.0);
            }
            assert_eq!((out_only, in_only), (1, 1), "vertex {}", g.label(x));
            assert_eq!(beta_plus(&g, x).unwrap(), beta_minus(&g, x).unwrap());
        }
    }
    for (d, level) in sph.iter().enumerate().take(4).skip(1) {
        for &x in level {
            assert_eq!(g.degree(x), spec.branching[d] + 1);
        }
    }
    assert!(g.has_unit_measure());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graphs_are_balanced(n in 3usize..40, seed in any::<u64>(), density in 0.0f64..3.0) {
        let g = make_random_balanced(n, seed, density).unwrap();
        prop_assert_eq!(g.num_vertices(), n);
        for x in g.vertices() {
            prop_assert_eq!(beta_plus(&g, x).unwrap(), beta_minus(&g, x).unwrap());
            prop_assert!(g.measure(x) >= 0.5 && g.measure(x) < 2.0);
        }
        prop_assert!(g.exact_weights());
    }

    #[test]
    fn random_graphs_round_trip_through_json(n in 3usize..20, seed in any::<u64>()) {
        let g = make_random_balanced(n, seed, 1.0).unwrap();
        let back = DirectedGraph::from_json_str(&g.to_json_string()).unwrap();
        prop_assert_eq!(back.to_json_string(), g.to_json_string());
        prop_assert_eq!(back.num_edges(), g.num_edges());
    }
}

#![allow(dead_code)]

use dirlap_core::generators::{make_ladder, make_random_balanced, make_tree, LadderMeasure, LadderSpec, TreeSpec};
use dirlap_core::{ball, DirectedGraph, Truncation, TruncatedOperator, WeightedVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub name: String,
    pub graph: DirectedGraph,
    pub trunc: Truncation,
}

pub fn ladder_case(measure: LadderMeasure, depth: usize, radius: usize) -> Case {
    let graph = make_ladder(&LadderSpec::new(depth, measure)).unwrap();
    let trunc = ball(&graph, graph.vertex("x0").unwrap(), radius).unwrap();
    Case { name: format!("ladder-{measure:?}-R{radius}"), graph, trunc }
}

pub fn tree_case() -> Case {
    let graph = make_tree(&TreeSpec::new(4)).unwrap();
    let trunc = ball(&graph, graph.vertex("v0").unwrap(), 3).unwrap();
    Case { name: "tree-d4-R3".into(), graph, trunc }
}

pub fn random_case(seed: u64) -> Case {
    let n = 8 + (seed as usize * 7) % 23;
    let graph = make_random_balanced(n, seed, 0.5 + (seed % 3) as f64 * 0.5).unwrap();
    let trunc = Truncation::whole(&graph);
    Case { name: format!("random-{n}-s{seed}"), graph, trunc }
}

/// Ladders in both measures, the tree, and 20 random balanced graphs.
pub fn all_cases() -> Vec<Case> {
    let mut cases = vec![
        ladder_case(LadderMeasure::SqrtN, 25, 10),
        ladder_case(LadderMeasure::Unit, 25, 10),
        tree_case(),
    ];
    cases.extend((0..20).map(random_case));
    cases
}

/// Local positions of the interior vertices within the operator.
pub fn interior_positions(op: &TruncatedOperator, trunc: &Truncation) -> Vec<usize> {
    trunc.interior.iter().map(|&v| op.local_index(v).unwrap()).collect()
}

/// Complex Gaussian-ish vector supported on `support`, unit weighted norm.
pub fn random_supported(op: &TruncatedOperator, support: &[usize], rng: &mut ChaCha8Rng) -> WeightedVector {
    let mut values = vec![Complex64::new(0.0, 0.0); op.len()];
    for &i in support {
        values[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let v = op.vector(values).unwrap();
    let n = v.norm();
    v.scaled(Complex64::new(1.0 / n, 0.0))
}

pub fn dot(u: &WeightedVector, v: &WeightedVector) -> Complex64 {
    dirlap_core::operator::weighted_dot(u, v).unwrap()
}

/// Minimum of `Re⟨Af, f⟩_m` over unit vectors by random search: a (1+1)
/// evolution strategy whose candidates are either fresh uniform draws or
/// Gaussian perturbations of the incumbent, with a step size that adapts to
/// the success rate. Uses only `A f` products, never an eigensolver.
pub fn random_search_min_real(op: &TruncatedOperator, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let support: Vec<usize> = (0..op.len()).collect();
    let eval = |f: &WeightedVector| dirlap_core::operator::quadratic_form(op, f).unwrap().re;
    let mut best = random_supported(op, &support, rng);
    let mut best_val = eval(&best);
    let mut step = 0.5;
    for k in 0..samples {
        let candidate = if k % 10 == 0 {
            random_supported(op, &support, rng)
        } else {
            let values = best
                .values
                .iter()
                .zip(op.measure().iter())
                .map(|(z, m)| {
                    let (a, b): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
                    z + Complex64::new(a, b) * (step / m.sqrt())
                })
                .collect();
            op.vector(values).unwrap()
        };
        let norm = candidate.norm();
        if norm == 0.0 {
            continue;
        }
        let candidate = candidate.scaled(Complex64::new(1.0 / norm, 0.0));
        let val = eval(&candidate);
        if val < best_val {
            best_val = val;
            best = candidate;
            if k % 10 != 0 {
                step *= 1.5;
            }
        } else if k % 10 != 0 {
            step = (step * 0.95).max(1e-9);
        }
    }
    best_val
}

/// All proper non-empty subsets by bitmask; the boundary sum runs over members
/// in ascending order and, for each, neighbours in ascending order.
pub fn cheeger_all_subsets(g: &DirectedGraph) -> f64 {
    let n = g.num_vertices();
    assert!(n <= 20);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) - 1 {
        let mut boundary = 0.0;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                let x = dirlap_core::VertexId::from_index(i);
                for &y in g.neighbors(x) {
                    if mask >> y.index() & 1 == 0 {
                        boundary += g.weight(x, y).sqrt();
                    }
                }
            }
        }
        best = best.min(boundary / mask.count_ones() as f64);
    }
    best
}

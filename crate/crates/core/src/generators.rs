//! Example graph families: the rung ladder with quadratic weights, the
//! increasing-degree tree, and random Kirchhoff-balanced graphs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderMeasure {
    /// `m(x_0) = 1`, `m(x_n) = m(y_n) = √n`.
    SqrtN,
    /// `m ≡ 1`.
    Unit,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderSpec {
    pub depth: usize,
    pub k: f64,
    pub measure: LadderMeasure,
}

impl LadderSpec {
    pub fn new(depth: usize, measure: LadderMeasure) -> Self {
        LadderSpec { depth, k: 1.0, measure }
    }
}

/// Ladder on `{x_0} ∪ {x_n, y_n : 1 ≤ n ≤ N}`. Vertices are indexed
/// `x_0, x_1, y_1, x_2, y_2, …`, so index order follows distance from `x_0`.
pub fn make_ladder(spec: &LadderSpec) -> Result<DirectedGraph> {
    let n_max = spec.depth;
    if n_max < 2 {
        return Err(Error::Spec(format!("ladder depth must be >= 2, got {n_max}")));
    }
    if !(spec.k.is_finite() && spec.k >= 0.0) {
        return Err(Error::Spec(format!("ladder k must be finite and >= 0, got {}", spec.k)));
    }
    let mut b = GraphBuilder::new().exact_weights(spec.k.fract() == 0.0);
    let m = |n: usize| match spec.measure {
        LadderMeasure::SqrtN => (n as f64).sqrt(),
        LadderMeasure::Unit => 1.0,
    };
    let x0 = b.add_vertex("x0", 1.0)?;
    let mut xs = vec![x0];
    let mut ys = vec![x0];
    for n in 1..=n_max {
        xs.push(b.add_vertex(format!("x{n}"), m(n))?);
        ys.push(b.add_vertex(format!("y{n}"), m(n))?);
    }
    let mut edge = |from, to, w: f64| -> Result<()> {
        if w > 0.0 {
            b.add_edge(from, to, w)?;
        }
        Ok(())
    };
    let k = spec.k;
    edge(x0, xs[1], k + 2.0)?;
    edge(ys[1], x0, k + 2.0)?;
    edge(x0, ys[1], k)?;
    edge(xs[1], x0, k)?;
    for n in 1..n_max {
        let s = ((n + 1) * (n + 1)) as f64;
        let l = (n + 1) as f64;
        edge(xs[n], xs[n + 1], s + l)?;
        edge(xs[n + 1], xs[n], s - l)?;
        edge(ys[n], ys[n + 1], s - l)?;
        edge(ys[n + 1], ys[n], s + l)?;
    }
    for n in 1..=n_max {
        edge(xs[n], ys[n], (n - 1) as f64)?;
        edge(ys[n], xs[n], (n + 1) as f64)?;
    }
    b.build()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub depth: usize,
    /// Children per vertex at each level `0..depth`.
    pub branching: Vec<usize>,
}

impl TreeSpec {
    /// Default branching `c_d = d + 3`.
    pub fn new(depth: usize) -> Self {
        TreeSpec { depth, branching: (0..depth).map(|d| d + 3).collect() }
    }

    fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Spec("tree depth must be >= 1".into()));
        }
        if self.branching.len() != self.depth {
            return Err(Error::Spec(format!(
                "need one branching number per level: depth {} but {} given",
                self.depth,
                self.branching.len()
            )));
        }
        if let Some(c) = self.branching.iter().find(|&&c| c < 3) {
            return Err(Error::Spec(format!("branching must be >= 3 at every level, got {c}")));
        }
        if self.branching.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Spec("branching must be non-decreasing".into()));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, PartialEq)]
enum ParentLink {
    None,
    // vertex → parent only
    Out,
    // parent → vertex only
    In,
    Both,
}

/// Simple tree (`b ∈ {0, 1}`, `m ≡ 1`) in which every non-leaf vertex has exactly
/// one strictly outgoing and one strictly incoming incident edge; all others are
/// bidirectional. A child edge fills whichever one-way slot the parent edge left
/// open, out before in. Vertices are labelled `v0, v1, …` in breadth-first order.
pub fn make_tree(spec: &TreeSpec) -> Result<DirectedGraph> {
    spec.validate()?;
    let mut b = GraphBuilder::new().exact_weights(true);
    let root = b.add_vertex("v0", 1.0)?;
    let mut frontier = vec![(root, ParentLink::None)];
    for &children in &spec.branching {
        let mut next = Vec::with_capacity(frontier.len() * children);
        for &(x, link) in &frontier {
            let mut need_out = !matches!(link, ParentLink::Out);
            let mut need_in = !matches!(link, ParentLink::In);
            for _ in 0..children {
                let y = b.add_vertex(format!("v{}", b.num_vertices()), 1.0)?;
                let child_link = if need_out {
                    need_out = false;
                    b.add_edge(x, y, 1.0)?;
                    ParentLink::In
                } else if need_in {
                    need_in = false;
                    b.add_edge(y, x, 1.0)?;
                    ParentLink::Out
                } else {
                    b.add_edge(x, y, 1.0)?;
                    b.add_edge(y, x, 1.0)?;
                    ParentLink::Both
                };
                next.push((y, child_link));
            }
        }
        frontier = next;
    }
    b.build()
}

/// Random weakly connected graph satisfying Kirchhoff balance exactly.
///
/// Built as a superposition of directed cycles with one integer weight per
/// cycle: a Hamiltonian cycle through a random permutation, plus
/// `ceil(density · n)` further cycles of length 2 to 6 on random distinct
/// vertices. Measures are uniform in `[0.5, 2)`.
pub fn make_random_balanced(n: usize, seed: u64, density: f64) -> Result<DirectedGraph> {
    if n < 3 {
        return Err(Error::Spec(format!("random graph needs n >= 3, got {n}")));
    }
    if !(density.is_finite() && density >= 0.0) {
        return Err(Error::Spec(format!("density must be finite and >= 0, got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add_cycle = |cycle: &[usize], w: f64| {
        for i in 0..cycle.len() {
            let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            *weights.entry((x, y)).or_insert(0.0) += w;
        }
    };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    add_cycle(&perm, rng.gen_range(1..=4) as f64);
    let extra = (density * n as f64).ceil() as usize;
    for _ in 0..extra {
        let len = rng.gen_range(2..=n.min(6));
        let cycle: Vec<usize> = perm.choose_multiple(&mut rng, len).copied().collect();
        add_cycle(&cycle, rng.gen_range(1..=4) as f64);
    }
    let mut b = GraphBuilder::new().exact_weights(true);
    for i in 0..n {
        b.add_vertex(format!("v{i}"), rng.gen_range(0.5..2.0))?;
    }
    let ids: Vec<_> = (0..n).map(crate::graph::VertexId::from_index).collect();
    for ((x, y), w) in weights {
        b.add_edge(ids[x], ids[y], w)?;
    }
    b.build()
}

//! Combinatorial distance on the undirected skeleton, balls used as
//! truncations, cutoff sequences and the sphere-growth divergence criterion.

use std::collections::VecDeque;

use serde::Serialize;

use crate::assumptions::symmetric_weight;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};

/// Breadth-first distances from `x0` over undirected edges, indexed by vertex index.
pub fn combinatorial_distance(g: &DirectedGraph, x0: VertexId) -> Result<Vec<usize>> {
    g.check_vertex(x0)?;
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[x0.index()] = 0;
    let mut queue = VecDeque::from([x0]);
    while let Some(x) = queue.pop_front() {
        let next = dist[x.index()] + 1;
        for &y in g.neighbors(x) {
            if dist[y.index()] == usize::MAX {
                dist[y.index()] = next;
                queue.push_back(y);
            }
        }
    }
    Ok(dist)
}

/// Largest distance from `x0`.
pub fn eccentricity(g: &DirectedGraph, x0: VertexId) -> Result<usize> {
    Ok(combinatorial_distance(g, x0)?.into_iter().max().unwrap_or(0))
}

/// Spheres `S_n = {x : d(x0, x) = n}` for `n = 0..=eccentricity`.
pub fn spheres(g: &DirectedGraph, x0: VertexId) -> Result<Vec<Vec<VertexId>>> {
    let dist = combinatorial_distance(g, x0)?;
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let mut out = vec![Vec::new(); ecc + 1];
    for v in g.vertices() {
        out[dist[v.index()]].push(v);
    }
    Ok(out)
}

/// A ball `B(root, radius)` together with its interior `B(root, radius − 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub root: VertexId,
    pub radius: usize,
    /// Ball vertices in index order.
    pub vertices: Vec<VertexId>,
    /// Vertices at distance `≤ radius − 1`, in index order.
    pub interior: Vec<VertexId>,
}

impl Truncation {
    /// The whole (finite) graph, every vertex interior.
    pub fn whole(g: &DirectedGraph) -> Truncation {
        let vertices: Vec<_> = g.vertices().collect();
        Truncation {
            root: VertexId::from_index(0),
            radius: usize::MAX,
            interior: vertices.clone(),
            vertices,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn ball(g: &DirectedGraph, x0: VertexId, radius: usize) -> Result<Truncation> {
    let dist = combinatorial_distance(g, x0)?;
    let vertices = g.vertices().filter(|v| dist[v.index()] <= radius).collect();
    let interior = g
        .vertices()
        .filter(|v| radius > 0 && dist[v.index()] < radius)
        .collect();
    Ok(Truncation { root: x0, radius, vertices, interior })
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffSequence {
    pub root: VertexId,
    pub radii: Vec<usize>,
    /// `B_n`: the `r_n`-ball on which `χ_n = 1`.
    pub sets: Vec<Vec<VertexId>>,
    /// `χ_n` as a dense vector over all host vertices.
    pub functions: Vec<Vec<f64>>,
    /// Gradient-energy maximum for each cutoff separately.
    pub per_radius_constants: Vec<f64>,
    /// Whether the host graph contains the full `2 r_n`-ball plus its neighbours.
    pub host_covers: Vec<bool>,
    /// Maximum of `per_radius_constants`: a probed bound, not a proof.
    pub constant: f64,
}

impl CutoffSequence {
    pub fn value(&self, n: usize, x: VertexId) -> f64 {
        self.functions[n][x.index()]
    }
}

/// Tent cutoffs `χ_n(x) = clamp(2 − d(x0, x)/r_n, 0, 1)`.
///
/// The reported constant is the exact maximum over all host vertices of
/// `(1/m(x)) Σ_{y ∈ V_x} b'(x, y) |χ_n(x) − χ_n(y)|²`, which vanishes outside the
/// `2 r_n`-ball.
pub fn build_cutoffs(g: &DirectedGraph, x0: VertexId, radii: &[usize]) -> Result<CutoffSequence> {
    if radii.is_empty() || radii[0] == 0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!(
            "cutoff radii must be positive and strictly increasing, got {radii:?}"
        )));
    }
    let dist = combinatorial_distance(g, x0)?;
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let mut seq = CutoffSequence {
        root: x0,
        radii: radii.to_vec(),
        sets: Vec::new(),
        functions: Vec::new(),
        per_radius_constants: Vec::new(),
        host_covers: Vec::new(),
        constant: 0.0,
    };
    for &r in radii {
        let chi: Vec<f64> = dist
            .iter()
            .map(|&d| (2.0 - d as f64 / r as f64).clamp(0.0, 1.0))
            .collect();
        let mut worst = 0.0_f64;
        for x in g.vertices().filter(|x| dist[x.index()] <= 2 * r) {
            let energy: f64 = g
                .neighbors(x)
                .iter()
                .map(|&y| {
                    let d = chi[x.index()] - chi[y.index()];
                    symmetric_weight(g, x, y) * d * d
                })
                .sum();
            worst = worst.max(energy / g.measure(x));
        }
        seq.sets.push(g.vertices().filter(|v| dist[v.index()] <= r).collect());
        seq.functions.push(chi);
        seq.per_radius_constants.push(worst);
        seq.host_covers.push(2 * r < ecc);
        seq.constant = seq.constant.max(worst);
    }
    Ok(seq)
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereCriterion {
    /// `a_n^+` for `n = 0..N−1`.
    pub a_plus: Vec<f64>,
    /// `a_n^-` for `n = 0..=N` (`a_0^- = 0`).
    pub a_minus: Vec<f64>,
    /// `1/√(a_n^+ + a_{n+1}^-)` for `n = 0..N−1`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub partial_sum: f64,
}

/// Sphere-growth quantities
/// `a_n^± = max_{x ∈ S_n} (1/m(x)) Σ_{y ∈ S_{n±1}} b'(x, y)` and the partial sum
/// `Σ_{n<N} 1/√(a_n^+ + a_{n+1}^-)`, whose divergence certifies cutoff completeness.
pub fn syl_criterion(g: &DirectedGraph, x0: VertexId, depth: usize) -> Result<SphereCriterion> {
    let dist = combinatorial_distance(g, x0)?;
    let sph = spheres(g, x0)?;
    if depth == 0 || sph.len() <= depth {
        return Err(Error::Truncation(format!(
            "sphere S_{depth} is empty (host eccentricity {}); generate a larger host graph",
            sph.len() - 1
        )));
    }
    let toward = |n: usize, target: usize| -> f64 {
        sph[n]
            .iter()
            .map(|&x| {
                let s: f64 = g
                    .neighbors(x)
                    .iter()
                    .filter(|y| dist[y.index()] == target)
                    .map(|&y| symmetric_weight(g, x, y))
                    .sum();
                s / g.measure(x)
            })
            .fold(0.0, f64::max)
    };
    let a_plus: Vec<f64> = (0..depth).map(|n| toward(n, n + 1)).collect();
    let a_minus: Vec<f64> = (0..=depth)
        .map(|n| if n == 0 { 0.0 } else { toward(n, n - 1) })
        .collect();
    let terms: Vec<f64> = (0..depth)
        .map(|n| 1.0 / (a_plus[n] + a_minus[n + 1]).sqrt())
        .collect();
    let partial_sums: Vec<f64> = terms
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    let partial_sum = partial_sums.last().copied().unwrap_or(0.0);
    Ok(SphereCriterion { a_plus, a_minus, terms, partial_sums, partial_sum })
}

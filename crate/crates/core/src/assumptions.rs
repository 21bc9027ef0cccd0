//! Structural assumption checkers: Kirchhoff balance, the boundedness of the
//! skew part, and the asymmetry constant controlling `B` relative to `H`.
//!
//! Every checker takes an explicit probe set. On a finite truncation of an
//! infinite graph the caller passes interior vertices only, so that vertices
//! whose neighbourhood was cut off never enter a supremum.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{DirectedGraph, VertexId};
use crate::topology::ball;

/// Outgoing weight `β⁺(x) = Σ_y b(x, y)`.
pub fn beta_plus(g: &DirectedGraph, x: VertexId) -> Result<f64> {
    g.check_vertex(x)?;
    Ok(g.out_edges(x).iter().map(|&(_, b)| b).sum())
}

/// Incoming weight `β⁻(x) = Σ_y b(y, x)`.
pub fn beta_minus(g: &DirectedGraph, x: VertexId) -> Result<f64> {
    g.check_vertex(x)?;
    Ok(g.in_edges(x).iter().map(|&(_, b)| b).sum())
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum KirchhoffTolerance {
    /// Zero for graphs with exact integer weights, otherwise `1e-12·max(β⁺, β⁻)`.
    Auto,
    Absolute(f64),
    Relative(f64),
}

pub const RELATIVE_KIRCHHOFF_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirchhoffVerdict {
    pub balanced: bool,
    pub max_imbalance: f64,
    /// Vertex attaining `max_imbalance` (first in index order on ties).
    pub worst_vertex: Option<VertexId>,
    /// First vertex whose imbalance exceeded its tolerance.
    pub first_violation: Option<VertexId>,
}

pub fn check_kirchhoff(g: &DirectedGraph, interior: &[VertexId]) -> Result<KirchhoffVerdict> {
    check_kirchhoff_with(g, interior, KirchhoffTolerance::Auto)
}

pub fn check_kirchhoff_with(
    g: &DirectedGraph,
    interior: &[VertexId],
    tol: KirchhoffTolerance,
) -> Result<KirchhoffVerdict> {
    let mut verdict = KirchhoffVerdict {
        balanced: true,
        max_imbalance: 0.0,
        worst_vertex: None,
        first_violation: None,
    };
    for &x in interior {
        let (bp, bm) = (beta_plus(g, x)?, beta_minus(g, x)?);
        let imbalance = (bp - bm).abs();
        let allowed = match tol {
            KirchhoffTolerance::Auto if g.exact_weights() => 0.0,
            KirchhoffTolerance::Auto => RELATIVE_KIRCHHOFF_TOL * bp.max(bm),
            KirchhoffTolerance::Absolute(a) => a,
            KirchhoffTolerance::Relative(r) => r * bp.max(bm),
        };
        if verdict.worst_vertex.is_none() || imbalance > verdict.max_imbalance {
            verdict.max_imbalance = imbalance;
            verdict.worst_vertex = Some(x);
        }
        if imbalance > allowed && verdict.balanced {
            verdict.balanced = false;
            verdict.first_violation = Some(x);
        }
    }
    Ok(verdict)
}

/// Symmetrized weight `b'(x, y) = (b(x, y) + b(y, x)) / 2`.
pub fn symmetric_weight(g: &DirectedGraph, x: VertexId, y: VertexId) -> f64 {
    (g.weight(x, y) + g.weight(y, x)) / 2.0
}

/// Graph with the same vertices and measure and weight `b'` on every undirected edge.
pub fn symmetrize(g: &DirectedGraph) -> DirectedGraph {
    let mut edges = BTreeMap::new();
    for x in g.vertices() {
        for &y in g.neighbors(x) {
            edges.insert((x.index(), y.index()), symmetric_weight(g, x, y));
        }
    }
    let labels = g.vertices().map(|v| g.label(v).to_string()).collect();
    DirectedGraph::from_parts(labels, g.measures().to_vec(), &edges, g.exact_weights())
}

/// `(1/m(x)) Σ_y |b(x, y) − b(y, x)|` at one vertex.
pub fn gamma_at(g: &DirectedGraph, x: VertexId) -> Result<f64> {
    g.check_vertex(x)?;
    let s: f64 = g
        .neighbors(x)
        .iter()
        .map(|&y| (g.weight(x, y) - g.weight(y, x)).abs())
        .sum();
    Ok(s / g.measure(x))
}

/// Constant `M` of the bounded-skew-part assumption over the probe set.
pub fn check_gamma(g: &DirectedGraph, interior: &[VertexId]) -> Result<f64> {
    interior.iter().try_fold(0.0_f64, |acc, &x| Ok(acc.max(gamma_at(g, x)?)))
}

/// `(1/m(x)) Σ_{y ∈ V_x} |b(x, y) − b(y, x)|² / b'(x, y)` at one vertex.
pub fn asymmetry_at(g: &DirectedGraph, x: VertexId) -> Result<f64> {
    g.check_vertex(x)?;
    let s: f64 = g
        .neighbors(x)
        .iter()
        .map(|&y| {
            let d = g.weight(x, y) - g.weight(y, x);
            d * d / symmetric_weight(g, x, y)
        })
        .sum();
    Ok(s / g.measure(x))
}

/// Asymmetry constant `C` over the probe set.
pub fn check_asymmetry(g: &DirectedGraph, interior: &[VertexId]) -> Result<f64> {
    interior.iter().try_fold(0.0_f64, |acc, &x| Ok(acc.max(asymmetry_at(g, x)?)))
}

/// Probe-set vertices with no outgoing edge (`Σ_y b(x, y) = 0`).
pub fn zero_outflow(g: &DirectedGraph, interior: &[VertexId]) -> Vec<VertexId> {
    interior.iter().copied().filter(|&x| g.out_edges(x).is_empty()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusValue {
    pub radius: usize,
    pub value: f64,
}

/// True when the sequence strictly increases at every step (at least two entries).
pub fn is_growing(values: &[RadiusValue]) -> bool {
    values.len() >= 2 && values.windows(2).all(|w| w[1].value > w[0].value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub kirchhoff_balanced: bool,
    pub kirchhoff_max_imbalance: f64,
    pub kirchhoff_worst_vertex: Option<String>,
    /// `None` when the constant grows with every probed radius.
    pub gamma_constant: Option<f64>,
    pub gamma_by_radius: Vec<RadiusValue>,
    pub asymmetry_constant: f64,
    pub asymmetry_by_radius: Vec<RadiusValue>,
    pub max_degree: usize,
    pub zero_outflow_vertices: Vec<String>,
    pub probed_vertex_count: usize,
    pub probed_vertex_set: Vec<String>,
}

impl AssumptionReport {
    /// Run every checker on the interiors of the balls `B(root, r)` for each radius.
    pub fn probe(g: &DirectedGraph, root: VertexId, radii: &[usize]) -> Result<AssumptionReport> {
        let mut gamma_by_radius = Vec::new();
        let mut asymmetry_by_radius = Vec::new();
        let mut largest: Vec<VertexId> = Vec::new();
        for &r in radii {
            let trunc = ball(g, root, r)?;
            gamma_by_radius.push(RadiusValue { radius: r, value: check_gamma(g, &trunc.interior)? });
            asymmetry_by_radius.push(RadiusValue { radius: r, value: check_asymmetry(g, &trunc.interior)? });
            if trunc.interior.len() >= largest.len() {
                largest = trunc.interior;
            }
        }
        let kirchhoff = check_kirchhoff(g, &largest)?;
        let gamma_constant = if is_growing(&gamma_by_radius) {
            None
        } else {
            Some(check_gamma(g, &largest)?)
        };
        Ok(AssumptionReport {
            kirchhoff_balanced: kirchhoff.balanced,
            kirchhoff_max_imbalance: kirchhoff.max_imbalance,
            kirchhoff_worst_vertex: kirchhoff.worst_vertex.map(|v| g.label(v).to_string()),
            gamma_constant,
            gamma_by_radius,
            asymmetry_constant: check_asymmetry(g, &largest)?,
            asymmetry_by_radius,
            max_degree: g.max_degree(),
            zero_outflow_vertices: zero_outflow(g, &largest).into_iter().map(|v| g.label(v).to_string()).collect(),
            probed_vertex_count: largest.len(),
            probed_vertex_set: largest.iter().map(|&v| g.label(v).to_string()).collect(),
        })
    }
}

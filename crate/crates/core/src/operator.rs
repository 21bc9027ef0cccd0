//! Truncated operators on `ℓ²(V, m)`.
//!
//! A [`TruncatedOperator`] is the compression of `Δ`, `Δ'`, `H = (Δ + Δ')/2` or
//! `B = (Δ − Δ')/2` onto functions supported in a ball. Diagonal entries keep
//! the full host sum `(1/m(x)) Σ_y b(x, y)`, including neighbours outside the
//! ball, so the matrix acts exactly like the infinite-graph operator on every
//! function supported in the ball.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::topology::Truncation;

/// Largest operator materialized as a dense matrix.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Delta,
    Adjoint,
    SymmetricPart,
    SkewPart,
}

#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    kind: OperatorKind,
    vertices: Vec<VertexId>,
    // host index -> local index
    position: Vec<Option<usize>>,
    measure: Arc<[f64]>,
    // sparse rows, column-sorted, diagonal included
    rows: Vec<Vec<(usize, f64)>>,
    dense: Option<DMatrix<f64>>,
}

fn delta_rows(g: &DirectedGraph, vertices: &[VertexId], position: &[Option<usize>], adjoint: bool) -> Vec<Vec<(usize, f64)>> {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let m = g.measure(x);
            let edges = if adjoint { g.in_edges(x) } else { g.out_edges(x) };
            let total: f64 = edges.iter().map(|&(_, b)| b).sum();
            let mut row = vec![(i, total / m)];
            row.extend(
                edges
                    .iter()
                    .filter_map(|&(y, b)| position[y.index()].map(|j| (j, -b / m))),
            );
            row.sort_by_key(|&(j, _)| j);
            row
        })
        .collect()
}

fn combine_rows(a: &[Vec<(usize, f64)>], b: &[Vec<(usize, f64)>], sign: f64) -> Vec<Vec<(usize, f64)>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            let mut out = Vec::with_capacity(ra.len() + rb.len());
            let (mut i, mut j) = (0, 0);
            while i < ra.len() || j < rb.len() {
                let ca = ra.get(i).map_or(usize::MAX, |e| e.0);
                let cb = rb.get(j).map_or(usize::MAX, |e| e.0);
                let col = ca.min(cb);
                let va = if ca == col { i += 1; ra[i - 1].1 } else { 0.0 };
                let vb = if cb == col { j += 1; rb[j - 1].1 } else { 0.0 };
                out.push((col, (va + sign * vb) / 2.0));
            }
            out
        })
        .collect()
}

/// Assemble the compression of the requested operator onto the ball.
pub fn assemble(g: &DirectedGraph, ball: &Truncation, kind: OperatorKind) -> TruncatedOperator {
    let vertices = ball.vertices.clone();
    let mut position = vec![None; g.num_vertices()];
    for (i, v) in vertices.iter().enumerate() {
        position[v.index()] = Some(i);
    }
    let rows = match kind {
        OperatorKind::Delta => delta_rows(g, &vertices, &position, false),
        OperatorKind::Adjoint => delta_rows(g, &vertices, &position, true),
        OperatorKind::SymmetricPart | OperatorKind::SkewPart => {
            let d = delta_rows(g, &vertices, &position, false);
            let a = delta_rows(g, &vertices, &position, true);
            let sign = if kind == OperatorKind::SymmetricPart { 1.0 } else { -1.0 };
            combine_rows(&d, &a, sign)
        }
    };
    let n = vertices.len();
    let dense = (n <= DENSE_LIMIT).then(|| {
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    });
    let measure: Arc<[f64]> = vertices.iter().map(|&v| g.measure(v)).collect();
    TruncatedOperator { kind, vertices, position, measure, rows, dense }
}

impl TruncatedOperator {
    /// Operator given directly by its matrix, on vertices `#0..#n` with measure `measure`.
    pub fn from_matrix(kind: OperatorKind, matrix: DMatrix<f64>, measure: Vec<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || measure.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols().max(measure.len()) });
        }
        if let Some(&m) = measure.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::Precondition(format!("measure entries must be finite and > 0, got {m}")));
        }
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| matrix[(i, j)] != 0.0 || i == j).map(|j| (j, matrix[(i, j)])).collect())
            .collect();
        Ok(TruncatedOperator {
            kind,
            vertices: (0..n).map(VertexId::from_index).collect(),
            position: (0..n).map(Some).collect(),
            measure: measure.into(),
            rows,
            dense: (n <= DENSE_LIMIT).then_some(matrix),
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn local_index(&self, v: VertexId) -> Option<usize> {
        self.position.get(v.index()).copied().flatten()
    }

    pub fn measure(&self) -> &Arc<[f64]> {
        &self.measure
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// Dense matrix in the vertex coordinates (not similarity transformed).
    pub fn dense(&self) -> Result<&DMatrix<f64>> {
        self.dense
            .as_ref()
            .ok_or(Error::TooLarge { n: self.len(), limit: DENSE_LIMIT })
    }

    /// `A v` using the sparse rows.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| v[j] * a).sum())
            .collect()
    }

    /// `Aᵀ v` using the sparse rows.
    pub fn apply_transpose(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                out[j] += v[i] * a;
            }
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut cols = vec![0.0; self.len()];
        for row in &self.rows {
            for &(j, a) in row {
                cols[j] += a.abs();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    pub fn zeros(&self) -> WeightedVector {
        WeightedVector::new(vec![Complex64::new(0.0, 0.0); self.len()], self.measure.clone())
    }

    pub fn vector(&self, values: Vec<Complex64>) -> Result<WeightedVector> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: values.len() });
        }
        Ok(WeightedVector::new(values, self.measure.clone()))
    }

    pub fn real_vector(&self, values: &[f64]) -> Result<WeightedVector> {
        self.vector(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn apply_vector(&self, v: &WeightedVector) -> Result<WeightedVector> {
        self.check_compatible(v)?;
        Ok(WeightedVector::new(self.apply(&v.values), self.measure.clone()))
    }

    fn check_compatible(&self, v: &WeightedVector) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        Ok(())
    }

    /// Dense CSV dump, one matrix row per line.
    pub fn to_csv(&self) -> Result<String> {
        let m = self.dense()?;
        let mut out = String::new();
        for i in 0..m.nrows() {
            let line: Vec<String> = (0..m.ncols()).map(|j| format!("{:e}", m[(i, j)])).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Coordinate triplets `row col value`, zero-based.
    pub fn to_coo(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if v != 0.0 {
                    let _ = writeln!(out, "{i} {j} {v:e}");
                }
            }
        }
        out
    }
}

/// Function on the ball vertices with the `ℓ²(V, m)` geometry.
#[derive(Clone, Debug)]
pub struct WeightedVector {
    pub values: Vec<Complex64>,
    measure: Arc<[f64]>,
}

impl WeightedVector {
    pub fn new(values: Vec<Complex64>, measure: Arc<[f64]>) -> Self {
        assert_eq!(values.len(), measure.len(), "vector length must match the measure");
        WeightedVector { values, measure }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// `√(Σ m(x) |f(x)|²)`.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.measure.iter())
            .map(|(v, m)| m * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> WeightedVector {
        WeightedVector::new(self.values.iter().map(|v| v * s).collect(), self.measure.clone())
    }

    pub fn sub(&self, other: &WeightedVector) -> Result<WeightedVector> {
        if other.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(WeightedVector::new(values, self.measure.clone()))
    }
}

/// `⟨u, v⟩ = Σ m(x) u(x) conj(v(x))`.
pub fn weighted_dot(u: &WeightedVector, v: &WeightedVector) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    if !Arc::ptr_eq(&u.measure, &v.measure) && u.measure != v.measure {
        return Err(Error::Precondition("vectors live on different measures".into()));
    }
    Ok(u
        .values
        .iter()
        .zip(&v.values)
        .zip(u.measure.iter())
        .map(|((a, b), m)| a * b.conj() * m)
        .sum())
}

/// `⟨Af, f⟩ / ‖f‖²`.
pub fn quadratic_form(op: &TruncatedOperator, f: &WeightedVector) -> Result<Complex64> {
    let n2 = weighted_dot(f, f)?.re;
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let af = op.apply_vector(f)?;
    Ok(weighted_dot(&af, f)? / n2)
}

/// `Â = D^{1/2} A D^{-1/2}` with `D = diag(m)`. The standard numerical range and
/// operator norm of `Â` equal the weighted ones of `A`.
pub fn similarity_to_standard(op: &TruncatedOperator) -> Result<DMatrix<f64>> {
    let a = op.dense()?;
    let s: Vec<f64> = op.measure.iter().map(|m| m.sqrt()).collect();
    Ok(DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| s[i] * a[(i, j)] / s[j]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreenTerms {
    pub lhs: Complex64,
    pub swapped_lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Both sides of the Green formula on one truncation.
///
/// `lhs = ⟨Δf, h⟩ + ⟨Δ'f, h⟩ = 2⟨Hf, h⟩` and
/// `rhs = Σ_{(x,y)} b(x, y)(f(x) − f(y)) conj(h(x) − h(y))` over all host edges.
/// The variant `⟨Δf, h⟩ + ⟨Δ'h, f⟩` agrees with `lhs` when `f = h` but in
/// general differs by `Σ (b(x, y) − b(y, x)) f(x) conj(h(y))`; it is reported
/// as `swapped_lhs` for comparison.
pub struct GreenChecker<'g> {
    graph: &'g DirectedGraph,
    delta: TruncatedOperator,
    adjoint: TruncatedOperator,
    interior: Vec<bool>,
}

impl<'g> GreenChecker<'g> {
    pub fn new(g: &'g DirectedGraph, ball: &Truncation) -> Self {
        let delta = assemble(g, ball, OperatorKind::Delta);
        let adjoint = assemble(g, ball, OperatorKind::Adjoint);
        let mut interior = vec![false; delta.len()];
        for &v in &ball.interior {
            if let Some(i) = delta.local_index(v) {
                interior[i] = true;
            }
        }
        GreenChecker { graph: g, delta, adjoint, interior }
    }

    pub fn delta(&self) -> &TruncatedOperator {
        &self.delta
    }

    pub fn terms(&self, f: &WeightedVector, h: &WeightedVector) -> Result<GreenTerms> {
        for (name, v) in [("f", f), ("h", h)] {
            if v.len() != self.delta.len() {
                return Err(Error::DimensionMismatch { expected: self.delta.len(), found: v.len() });
            }
            if let Some(i) = (0..v.len()).find(|&i| !self.interior[i] && v.values[i] != Complex64::new(0.0, 0.0)) {
                return Err(Error::Precondition(format!(
                    "{name} is non-zero at `{}`, outside the interior of the ball",
                    self.graph.label(self.delta.vertices[i])
                )));
            }
        }
        let delta_f = self.delta.apply_vector(f)?;
        let lhs = weighted_dot(&delta_f, h)? + weighted_dot(&self.adjoint.apply_vector(f)?, h)?;
        let swapped_lhs = weighted_dot(&delta_f, h)? + weighted_dot(&self.adjoint.apply_vector(h)?, f)?;
        let zero = Complex64::new(0.0, 0.0);
        let at = |v: &WeightedVector, x: VertexId| self.delta.local_index(x).map_or(zero, |i| v.values[i]);
        let mut rhs = zero;
        let mut edge = |s: VertexId, t: VertexId, b: f64| {
            rhs += (at(f, s) - at(f, t)) * (at(h, s) - at(h, t)).conj() * b;
        };
        // every host edge with at least one endpoint in the ball, once
        for &x in &self.delta.vertices {
            for &(y, b) in self.graph.out_edges(x) {
                edge(x, y, b);
            }
            for &(s, b) in self.graph.in_edges(x) {
                if self.delta.local_index(s).is_none() {
                    edge(s, x, b);
                }
            }
        }
        Ok(GreenTerms { lhs, swapped_lhs, rhs, residual: (lhs - rhs).norm() })
    }
}

/// `|LHS − RHS|` of the Green formula for interior-supported `f, h`.
pub fn green_residual(g: &DirectedGraph, ball: &Truncation, f: &WeightedVector, h: &WeightedVector) -> Result<f64> {
    Ok(GreenChecker::new(g, ball).terms(f, h)?.residual)
}

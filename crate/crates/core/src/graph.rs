//! Directed weighted graphs with a vertex measure.
//!
//! A graph stores a positive measure `m(x)` per vertex and a sparse weight
//! `b(x, y) > 0` per directed edge. Absent edges have weight zero. Graphs are
//! validated once by [`GraphBuilder::build`] and immutable afterwards.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of a vertex inside one [`DirectedGraph`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(usize);

impl VertexId {
    pub fn from_index(index: usize) -> Self {
        VertexId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct DirectedGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    measure: Vec<f64>,
    // sorted by target
    out_edges: Vec<Vec<(VertexId, f64)>>,
    // sorted by source
    in_edges: Vec<Vec<(VertexId, f64)>>,
    // undirected skeleton, sorted
    neighbors: Vec<Vec<VertexId>>,
    exact_weights: bool,
}

impl DirectedGraph {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.labels.len()
    }

    /// Domain check used by every per-vertex query.
    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.id(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn measure(&self, v: VertexId) -> f64 {
        self.measure[v.0]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    /// `b(x, y)`, zero when there is no directed edge.
    pub fn weight(&self, x: VertexId, y: VertexId) -> f64 {
        let row = &self.out_edges[x.0];
        match row.binary_search_by_key(&y, |&(t, _)| t) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn out_edges(&self, x: VertexId) -> &[(VertexId, f64)] {
        &self.out_edges[x.0]
    }

    pub fn in_edges(&self, x: VertexId) -> &[(VertexId, f64)] {
        &self.in_edges[x.0]
    }

    /// Undirected neighbours `V_x = V_x^+ ∪ V_x^-`.
    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.neighbors[x.0]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.neighbors[x.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All directed edges `(x, y, b(x, y))` in index order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, b)| (VertexId(x), y, b)))
    }

    /// Weights were produced from integer formulas, so balance identities hold exactly.
    pub fn exact_weights(&self) -> bool {
        self.exact_weights
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(x, y, b)| self.weight(y, x) == b)
    }

    pub fn has_unit_measure(&self) -> bool {
        self.measure.iter().all(|&m| m == 1.0)
    }

    /// Same graph with `m ≡ 1`.
    pub fn with_unit_measure(&self) -> DirectedGraph {
        DirectedGraph {
            measure: vec![1.0; self.measure.len()],
            ..self.clone()
        }
    }

    pub(crate) fn from_parts(
        labels: Vec<String>,
        measure: Vec<f64>,
        edges: &BTreeMap<(usize, usize), f64>,
        exact_weights: bool,
    ) -> DirectedGraph {
        let n = labels.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut neighbors = vec![Vec::new(); n];
        for (&(x, y), &b) in edges {
            out_edges[x].push((VertexId(y), b));
            in_edges[y].push((VertexId(x), b));
            neighbors[x].push(VertexId(y));
            neighbors[y].push(VertexId(x));
        }
        for row in &mut in_edges {
            row.sort_by_key(|&(s, _)| s);
        }
        for row in &mut neighbors {
            row.sort_unstable();
            row.dedup();
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), VertexId(i)))
            .collect();
        DirectedGraph {
            labels,
            index,
            measure,
            out_edges,
            in_edges,
            neighbors,
            exact_weights,
        }
    }

    pub fn to_graph_file(&self) -> GraphFile {
        GraphFile {
            vertices: self
                .vertices()
                .map(|v| VertexRecord {
                    id: self.label(v).to_string(),
                    m: self.measure(v),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(x, y, b)| EdgeRecord {
                    from: self.label(x).to_string(),
                    to: self.label(y).to_string(),
                    b,
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_graph_file()).expect("graph serialization is infallible")
    }

    pub fn from_json_str(s: &str) -> Result<DirectedGraph> {
        let file: GraphFile = serde_json::from_str(s)?;
        file.into_graph()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<DirectedGraph> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

/// Serialized form: `{"vertices": [{"id", "m"}], "edges": [{"from", "to", "b"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub b: f64,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<DirectedGraph> {
        let mut builder = GraphBuilder::new();
        for v in self.vertices {
            builder.add_vertex(v.id, v.m)?;
        }
        for e in self.edges {
            builder.add_edge_by_label(&e.from, &e.to, e.b)?;
        }
        builder.build()
    }
}

#[derive(Default, Debug)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    measure: Vec<f64>,
    edges: BTreeMap<(usize, usize), f64>,
    exact_weights: bool,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mark the weights as exact integers (enables zero Kirchhoff tolerance).
    pub fn exact_weights(mut self, exact: bool) -> Self {
        self.exact_weights = exact;
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, m: f64) -> Result<VertexId> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateVertex(label));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidMeasure { vertex: label, value: m });
        }
        let id = VertexId(self.labels.len());
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.measure.push(m);
        Ok(id)
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId, b: f64) -> Result<()> {
        let n = self.labels.len();
        for v in [from, to] {
            if v.0 >= n {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let (fl, tl) = (&self.labels[from.0], &self.labels[to.0]);
        if from == to {
            return Err(Error::SelfLoop { from: fl.clone(), to: tl.clone() });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidWeight { from: fl.clone(), to: tl.clone(), value: b });
        }
        if self.edges.insert((from.0, to.0), b).is_some() {
            return Err(Error::DuplicateEdge { from: fl.clone(), to: tl.clone() });
        }
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, from: &str, to: &str, b: f64) -> Result<()> {
        let lookup = |l: &str| self.index.get(l).copied().ok_or_else(|| Error::UnknownVertex(l.to_string()));
        let (f, t) = (lookup(from)?, lookup(to)?);
        self.add_edge(f, t, b)
    }

    pub fn build(self) -> Result<DirectedGraph> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let g = DirectedGraph::from_parts(self.labels, self.measure, &self.edges, self.exact_weights);
        if let Some(v) = g.vertices().find(|&v| g.degree(v) == 0) {
            return Err(Error::IsolatedVertex(g.label(v).to_string()));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if !seen[y.0] {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
        if let Some(u) = seen.iter().position(|&s| !s) {
            return Err(Error::Disconnected {
                root: g.labels[0].clone(),
                unreachable: g.labels[u].clone(),
            });
        }
        Ok(g)
    }
}

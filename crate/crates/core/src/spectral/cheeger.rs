//! Cheeger constants of symmetric unit-measure graphs and the resulting lower
//! bound `h²/(2M)` on the real part of the numerical range.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::operator::{assemble, OperatorKind};
use crate::spectral::numrange::hermitian_part_extremes;
use crate::topology::Truncation;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum CheegerMethod {
    /// Exhaustive over connected subsets of size `≤ max_subset_size`.
    /// `certified` is false when the cap excluded some proper subsets.
    BruteForce { max_subset_size: usize, certified: bool, subsets_examined: u64 },
    /// Minimum over a caller-supplied nested family.
    Nested { member: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerResult {
    pub value: f64,
    pub witness: Vec<VertexId>,
    pub method: CheegerMethod,
    /// Quotient per family member (nested method only).
    pub quotients: Vec<f64>,
}

fn require_cheeger_input(g: &DirectedGraph) -> Result<()> {
    if !g.is_symmetric() {
        return Err(Error::Precondition("Cheeger constant needs a symmetric graph; symmetrize first".into()));
    }
    if !g.has_unit_measure() {
        return Err(Error::Precondition("Cheeger constant is defined for m ≡ 1".into()));
    }
    Ok(())
}

fn quotient_with(g: &DirectedGraph, subset: &[VertexId], member: &[bool]) -> f64 {
    let mut boundary = 0.0;
    for &x in subset {
        for &y in g.neighbors(x) {
            if !member[y.index()] {
                boundary += g.weight(x, y).sqrt();
            }
        }
    }
    boundary / subset.len() as f64
}

/// `Σ_{x ∈ U, y ∉ U, y ∈ V_x} √b(x, y) / #U`, summed in ascending vertex order.
pub fn cheeger_quotient(g: &DirectedGraph, subset: &[VertexId]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::Precondition("Cheeger quotient of the empty set".into()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut member = vec![false; g.num_vertices()];
    for &v in &sorted {
        g.check_vertex(v)?;
        member[v.index()] = true;
    }
    Ok(quotient_with(g, &sorted, &member))
}

struct Enumerator<'g> {
    g: &'g DirectedGraph,
    cap: usize,
    n: usize,
    member: Vec<bool>,
    sub: Vec<usize>,
    best: f64,
    best_set: Vec<usize>,
    examined: u64,
}

impl Enumerator<'_> {
    fn visit(&mut self) {
        if self.sub.len() == self.n {
            return;
        }
        self.examined += 1;
        let mut sorted: Vec<VertexId> = self.sub.iter().map(|&i| VertexId::from_index(i)).collect();
        sorted.sort_unstable();
        let q = quotient_with(self.g, &sorted, &self.member);
        if q < self.best {
            self.best = q;
            self.best_set = sorted.iter().map(|v| v.index()).collect();
        }
    }

    fn touches_sub(&self, u: usize) -> bool {
        self.member[u] || self.g.neighbors(VertexId::from_index(u)).iter().any(|y| self.member[y.index()])
    }

    // Connected-subgraph enumeration rooted at `root` (the smallest index of
    // every set it emits); each connected set is produced exactly once.
    fn extend(&mut self, mut ext: Vec<usize>, root: usize) {
        self.visit();
        if self.sub.len() == self.cap {
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &y in self.g.neighbors(VertexId::from_index(w)) {
                let u = y.index();
                if u > root && !self.touches_sub(u) && !next.contains(&u) {
                    next.push(u);
                }
            }
            self.member[w] = true;
            self.sub.push(w);
            self.extend(next, root);
            self.sub.pop();
            self.member[w] = false;
        }
    }
}

/// Exact minimum of the Cheeger quotient over connected proper subsets of size
/// at most `max_subset_size`. A disconnected set never beats its best component.
pub fn cheeger_bruteforce(g_sym: &DirectedGraph, max_subset_size: usize) -> Result<CheegerResult> {
    require_cheeger_input(g_sym)?;
    let n = g_sym.num_vertices();
    if max_subset_size == 0 {
        return Err(Error::Precondition("max_subset_size must be >= 1".into()));
    }
    let cap = max_subset_size.min(n - 1);
    let mut e = Enumerator {
        g: g_sym,
        cap,
        n,
        member: vec![false; n],
        sub: Vec::new(),
        best: f64::INFINITY,
        best_set: Vec::new(),
        examined: 0,
    };
    for root in 0..n {
        let ext: Vec<usize> = g_sym
            .neighbors(VertexId::from_index(root))
            .iter()
            .map(|y| y.index())
            .filter(|&u| u > root)
            .collect();
        e.member[root] = true;
        e.sub.push(root);
        e.extend(ext, root);
        e.sub.pop();
        e.member[root] = false;
    }
    Ok(CheegerResult {
        value: e.best,
        witness: e.best_set.into_iter().map(VertexId::from_index).collect(),
        method: CheegerMethod::BruteForce {
            max_subset_size,
            certified: cap == n - 1,
            subsets_examined: e.examined,
        },
        quotients: Vec::new(),
    })
}

/// Minimum quotient over a nested family of proper subsets.
pub fn cheeger_nested(g_sym: &DirectedGraph, family: &[Vec<VertexId>]) -> Result<CheegerResult> {
    require_cheeger_input(g_sym)?;
    let n = g_sym.num_vertices();
    let mut quotients = Vec::with_capacity(family.len());
    let mut previous: Option<Vec<bool>> = None;
    for (i, set) in family.iter().enumerate() {
        let mut member = vec![false; n];
        for &v in set {
            g_sym.check_vertex(v)?;
            member[v.index()] = true;
        }
        let size = member.iter().filter(|&&b| b).count();
        if size == 0 || size == n {
            return Err(Error::Precondition(format!(
                "family member {i} must be a non-empty proper subset ({size} of {n} vertices)"
            )));
        }
        if let Some(prev) = &previous {
            if prev.iter().zip(&member).any(|(&p, &m)| p && !m) {
                return Err(Error::Precondition(format!("family member {i} does not contain member {}", i - 1)));
            }
        }
        quotients.push(cheeger_quotient(g_sym, set)?);
        previous = Some(member);
    }
    let (member, value) = quotients
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Precondition("empty family".into()))?;
    let mut witness = family[member].clone();
    witness.sort_unstable();
    Ok(CheegerResult { value, witness, method: CheegerMethod::Nested { member }, quotients })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerBound {
    pub h: f64,
    pub max_degree: usize,
    /// `h² / (2M)`.
    pub lambda0: f64,
    /// `min Re W(Δ)` on the truncation.
    pub min_real: f64,
    pub holds: bool,
}

pub const CHEEGER_SLACK: f64 = 1e-9;

/// Compare `min Re W(Δ|ball)` with `λ₀ = h²/(2M)`, `M` the host's maximal degree.
pub fn cheeger_bound_check(g: &DirectedGraph, ball: &Truncation, h: f64) -> Result<CheegerBound> {
    if !g.has_unit_measure() {
        return Err(Error::Precondition("Cheeger bound is stated for m ≡ 1".into()));
    }
    if !(h.is_finite() && h >= 0.0) {
        return Err(Error::Precondition(format!("h must be finite and >= 0, got {h}")));
    }
    let max_degree = g.max_degree();
    let lambda0 = h * h / (2.0 * max_degree as f64);
    let op = assemble(g, ball, OperatorKind::Delta);
    let (min_real, _) = hermitian_part_extremes(&op)?;
    Ok(CheegerBound { h, max_degree, lambda0, min_real, holds: min_real >= lambda0 - CHEEGER_SLACK })
}

//! Non-symmetric Laplacians on directed weighted graphs.
//!
//! The crate builds `Δf(x) = (1/m(x)) Σ_y b(x, y)(f(x) − f(y))` on graphs whose
//! weights satisfy Kirchhoff balance, checks the structural conditions that make
//! `Δ` m-accretive and m-sectorial, and verifies the operator-level consequences
//! numerically on finite truncations: the Green formula, numerical-range
//! containment, Cheeger lower bounds, resolvent bounds and contraction of the
//! heat semigroup `exp(−tΔ)`.

pub mod assumptions;
pub mod error;
pub mod generators;
pub mod graph;
pub mod heat;
pub mod operator;
pub mod spectral;
pub mod topology;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, GraphBuilder, VertexId};
pub use operator::{assemble, OperatorKind, TruncatedOperator, WeightedVector};
pub use topology::{ball, Truncation};

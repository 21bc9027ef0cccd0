//! Numerical range boundary by rotated Hermitian parts, and sector checks.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{similarity_to_standard, TruncatedOperator};

#[derive(Clone, Debug, Serialize)]
pub struct NumericalRangeSample {
    pub angles: Vec<f64>,
    /// Boundary point of `W(A)` supporting the direction `e^{iφ}` for each angle.
    pub points: Vec<Complex64>,
    /// `λ_min` of the weighted Hermitian part, i.e. `min Re W(A)`.
    pub min_real: f64,
    pub max_real: f64,
}

impl NumericalRangeSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn eigen_failure(m: &DMatrix<Complex64>) -> Error {
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Error::Numeric(format!(
        "Hermitian eigensolver did not converge (n = {}, max |entry| = {max:e})",
        m.nrows()
    ))
}

/// Extreme eigenvalues of the symmetric part `(Â + Âᵀ)/2`.
pub fn hermitian_part_extremes(op: &TruncatedOperator) -> Result<(f64, f64)> {
    let a = similarity_to_standard(op)?;
    let s = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric(format!("symmetric eigensolver did not converge (n = {})", op.len())))?;
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Sweep `n_angles` equally spaced directions `φ = 2πk/n`. For each, the top
/// eigenvector `u` of `Re(e^{-iφ}Â)` gives the boundary point `u*Âu`.
pub fn numrange_boundary(op: &TruncatedOperator, n_angles: usize) -> Result<NumericalRangeSample> {
    if n_angles < 4 {
        return Err(Error::Precondition(format!("need at least 4 angles, got {n_angles}")));
    }
    let a = similarity_to_standard(op)?;
    let n = a.nrows();
    let sym = (&a + a.transpose()) * 0.5;
    let skew = (&a - a.transpose()) * 0.5;
    let a_c = a.map(|x| Complex64::new(x, 0.0));
    let angles: Vec<f64> = (0..n_angles).map(|k| 2.0 * PI * k as f64 / n_angles as f64).collect();
    let points = angles
        .par_iter()
        .map(|&phi| {
            let (c, s) = (phi.cos(), phi.sin());
            let h = DMatrix::from_fn(n, n, |i, j| Complex64::new(c * sym[(i, j)], -s * skew[(i, j)]));
            let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 0).ok_or_else(|| eigen_failure(&h))?;
            let top = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let u = eig.eigenvectors.column(top);
            let au = &a_c * u;
            Ok(u.dotc(&au) / u.dotc(&u))
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_real, max_real) = hermitian_part_extremes(op)?;
    Ok(NumericalRangeSample { angles, points, min_real, max_real })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Sector {
    pub vertex: f64,
    pub semi_angle: f64,
}

impl Sector {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        z.im.abs() <= self.semi_angle.tan() * (z.re - self.vertex) + tol
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorCheck {
    /// Sector implied by the affine bound: vertex `−4/C`, `tan θ = C/8`.
    pub sector: Sector,
    pub holds: bool,
    /// Bound `|Im z| ≤ intercept + slope · Re z`.
    pub intercept: f64,
    pub slope: f64,
    /// Largest `|Im z| − intercept − slope · Re z` over the sample.
    pub worst_excess: f64,
    pub worst_index: usize,
}

/// Slack used by [`check_sector`], relative to `max(1, |z|)`.
pub const SECTOR_TOL: f64 = 1e-10;

/// Check `|Im z| ≤ ½ + (C/8) Re z` on every sampled boundary point.
pub fn check_sector(sample: &NumericalRangeSample, c: f64) -> Result<SectorCheck> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::Precondition(format!("asymmetry constant must be finite and >= 0, got {c}")));
    }
    let (intercept, slope) = (0.5, c / 8.0);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_index = 0;
    let mut holds = true;
    for (i, z) in sample.points.iter().enumerate() {
        let excess = z.im.abs() - intercept - slope * z.re;
        if excess > worst_excess {
            worst_excess = excess;
            worst_index = i;
        }
        if excess > SECTOR_TOL * z.norm().max(1.0) {
            holds = false;
        }
    }
    let sector = if c == 0.0 {
        Sector { vertex: sample.min_real, semi_angle: 0.0 }
    } else {
        Sector { vertex: -4.0 / c, semi_angle: slope.atan() }
    };
    Ok(SectorCheck { sector, holds, intercept, slope, worst_excess, worst_index })
}

/// Smallest semi-angle `θ` such that every sampled point lies in `S_{vertex, θ}`.
/// `None` when some point has `Re z ≤ vertex` with non-zero imaginary part.
/// Imaginary parts below [`SECTOR_TOL`]`·max(1, |z|)` are treated as zero.
pub fn fit_semi_angle(sample: &NumericalRangeSample, vertex: f64) -> Option<f64> {
    let mut theta = 0.0_f64;
    for z in &sample.points {
        // imaginary parts within the slack count as real
        let im = if z.im.abs() > SECTOR_TOL * z.norm().max(1.0) { z.im.abs() } else { 0.0 };
        let dx = z.re - vertex;
        if dx <= 0.0 {
            if im > 0.0 {
                return None;
            }
            continue;
        }
        theta = theta.max(im.atan2(dx));
    }
    (theta < PI / 2.0).then_some(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::operator::{assemble, OperatorKind};
    use crate::topology::Truncation;

    fn path3() -> crate::DirectedGraph {
        let mut b = GraphBuilder::new();
        for (l, m) in [("a", 1.0), ("b", 2.0), ("c", 1.0)] {
            b.add_vertex(l, m).unwrap();
        }
        for (x, y) in [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")] {
            b.add_edge_by_label(x, y, 1.0).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn hermitian_operator_has_real_range() {
        let g = path3();
        let op = assemble(&g, &Truncation::whole(&g), OperatorKind::Delta);
        let s = numrange_boundary(&op, 16).unwrap();
        assert!(s.points.iter().all(|z| z.im.abs() < 1e-12));
        let lo = s.points.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let hi = s.points.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - s.min_real).abs() < 1e-12 && (hi - s.max_real).abs() < 1e-12);
        assert!(s.min_real.abs() < 1e-12);
        let check = check_sector(&s, 0.0).unwrap();
        assert!(check.holds);
        assert_eq!(check.sector.semi_angle, 0.0);
    }

    #[test]
    fn too_few_angles() {
        let g = path3();
        let op = assemble(&g, &Truncation::whole(&g), OperatorKind::Delta);
        assert!(numrange_boundary(&op, 3).is_err());
    }

    #[test]
    fn sector_flags_violations() {
        let sample = NumericalRangeSample {
            angles: vec![0.0, 1.0],
            points: vec![Complex64::new(1.0, 0.5), Complex64::new(0.0, 0.7)],
            min_real: 0.0,
            max_real: 1.0,
        };
        let check = check_sector(&sample, 8.0).unwrap();
        assert!(!check.holds);
        assert_eq!(check.worst_index, 1);
        assert!((check.worst_excess - 0.2).abs() < 1e-15);
        assert_eq!(check.sector.vertex, -0.5);
        assert!(check_sector(&sample, -1.0).is_err());
        assert!(fit_semi_angle(&sample, 0.0).is_none());
        let theta = fit_semi_angle(&sample, -1.0).unwrap();
        assert!((theta - 0.7_f64.atan()).abs() < 1e-15);
    }
}

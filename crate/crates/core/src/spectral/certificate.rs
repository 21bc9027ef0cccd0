//! Aggregate every probe on one truncation into a structured verdict stating
//! which sufficient conditions for m-accretiveness and m-sectoriality are
//! numerically supported.
//!
//! Nothing here is a proof: boundedness of a constant is judged from its trend
//! over growing balls, and the Cheeger constant of a large host is estimated
//! from above by nested balls.

use serde::Serialize;

use crate::assumptions::{
    check_asymmetry, check_gamma, check_kirchhoff, is_growing, symmetrize, KirchhoffVerdict, RadiusValue,
};
use crate::error::Result;
use crate::graph::{DirectedGraph, VertexId};
use crate::operator::{assemble, OperatorKind};
use crate::spectral::cheeger::{cheeger_bruteforce, cheeger_nested, CheegerMethod, CHEEGER_SLACK};
use crate::spectral::numrange::{check_sector, fit_semi_angle, numrange_boundary, SectorCheck};
use crate::topology::{ball, build_cutoffs};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateOptions {
    pub angles: usize,
    /// Hosts up to this many vertices get an exhaustive Cheeger search.
    pub cheeger_bruteforce_limit: usize,
    /// Vertex for the fitted sector; defaults to the one implied by the bound.
    pub sector_vertex: Option<f64>,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { angles: 360, cheeger_bruteforce_limit: 20, sector_vertex: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerSummary {
    pub h: f64,
    pub witness: Vec<String>,
    pub method: CheegerMethod,
    /// True when `h` is the exact infimum over the host's proper subsets.
    pub exact: bool,
    pub max_degree: usize,
    pub lambda0: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffSummary {
    pub constants: Vec<RadiusValue>,
    pub host_covers: Vec<bool>,
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub name: &'static str,
    pub supported: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub root: String,
    pub radius: usize,
    pub ball_size: usize,
    pub interior_size: usize,
    pub kirchhoff: KirchhoffVerdict,
    pub kirchhoff_witness: Option<String>,
    pub asymmetry_by_radius: Vec<RadiusValue>,
    /// Asymmetry constant over all ball vertices, used for the sector check.
    pub asymmetry_constant: f64,
    pub gamma_by_radius: Vec<RadiusValue>,
    pub gamma_growing: bool,
    pub cutoff: Option<CutoffSummary>,
    pub min_real: f64,
    pub sector: SectorCheck,
    pub fitted_vertex: f64,
    pub fitted_semi_angle: Option<f64>,
    pub cheeger: Option<CheegerSummary>,
    pub hypotheses: Vec<Finding>,
    pub conclusions: Vec<Finding>,
    /// `m_accretive` supported.
    pub verdict: bool,
}

impl Certificate {
    pub fn hypothesis(&self, name: &str) -> Option<&Finding> {
        self.hypotheses.iter().find(|f| f.name == name)
    }

    pub fn conclusion(&self, name: &str) -> Option<&Finding> {
        self.conclusions.iter().find(|f| f.name == name)
    }
}

fn trend(values: &[RadiusValue]) -> String {
    let shown: Vec<String> = values.iter().map(|r| format!("r={}: {:.6}", r.radius, r.value)).collect();
    shown.join(", ")
}

/// Cheeger constant of the symmetrized host and the implied bound `λ₀ = h²/(2M)`.
///
/// Hosts with at most `limit` vertices are searched exhaustively; larger ones
/// get the nested-ball estimate over `B(root, r)`, `r ≤ radius`, which bounds
/// `h` from above. `None` when no proper ball is available.
pub fn cheeger_summary(g: &DirectedGraph, root: VertexId, radius: usize, min_real: f64, limit: usize) -> Result<Option<CheegerSummary>> {
    let sym = symmetrize(g);
    let n = sym.num_vertices();
    let (result, exact) = if n <= limit {
        (cheeger_bruteforce(&sym, n - 1)?, true)
    } else {
        let mut family = Vec::new();
        for r in 0..=radius {
            let b = ball(&sym, root, r)?;
            if b.len() == n {
                break;
            }
            family.push(b.vertices);
        }
        if family.is_empty() {
            return Ok(None);
        }
        (cheeger_nested(&sym, &family)?, false)
    };
    let max_degree = g.max_degree();
    let lambda0 = result.value * result.value / (2.0 * max_degree as f64);
    Ok(Some(CheegerSummary {
        h: result.value,
        witness: result.witness.iter().map(|&v| sym.label(v).to_string()).collect(),
        method: result.method,
        exact,
        max_degree,
        lambda0,
        holds: min_real >= lambda0 - CHEEGER_SLACK,
    }))
}

fn finding(name: &'static str, supported: bool, detail: impl Into<String>) -> Finding {
    Finding { name, supported, detail: detail.into() }
}

/// Probe the ball `B(root, radius)` of `g`.
pub fn maccretive_certificate(g: &DirectedGraph, root: VertexId, radius: usize, options: &CertificateOptions) -> Result<Certificate> {
    let trunc = ball(g, root, radius)?;
    let kirchhoff = check_kirchhoff(g, &trunc.interior)?;
    let kirchhoff_witness = kirchhoff.first_violation.map(|v| g.label(v).to_string());

    let mut asymmetry_by_radius = Vec::new();
    let mut gamma_by_radius = Vec::new();
    for r in 1..=radius {
        let b = ball(g, root, r)?;
        asymmetry_by_radius.push(RadiusValue { radius: r, value: check_asymmetry(g, &b.interior)? });
        gamma_by_radius.push(RadiusValue { radius: r, value: check_gamma(g, &b.interior)? });
    }
    let asymmetry_constant = check_asymmetry(g, &trunc.vertices)?;
    let gamma_growing = is_growing(&gamma_by_radius);

    let cutoff_radii: Vec<usize> = (1..=radius / 2).collect();
    let cutoff = if cutoff_radii.is_empty() {
        None
    } else {
        let seq = build_cutoffs(g, root, &cutoff_radii)?;
        Some(CutoffSummary {
            constants: seq
                .radii
                .iter()
                .zip(&seq.per_radius_constants)
                .map(|(&radius, &value)| RadiusValue { radius, value })
                .collect(),
            host_covers: seq.host_covers.clone(),
            constant: seq.constant,
        })
    };

    let op = assemble(g, &trunc, OperatorKind::Delta);
    let sample = numrange_boundary(&op, options.angles)?;
    let sector = check_sector(&sample, asymmetry_constant)?;
    let fitted_vertex = options.sector_vertex.unwrap_or(sector.sector.vertex);
    let fitted_semi_angle = fit_semi_angle(&sample, fitted_vertex);

    let unit = g.has_unit_measure();
    let cheeger = if unit {
        cheeger_summary(g, root, radius, sample.min_real, options.cheeger_bruteforce_limit)?
    } else {
        None
    };

    let asym_bounded = !is_growing(&asymmetry_by_radius) && asymmetry_constant.is_finite();
    let cutoff_bounded = cutoff
        .as_ref()
        .is_some_and(|c| !is_growing(&c.constants) && c.constant.is_finite());
    let constant_measure = {
        let m0 = g.measure(root);
        trunc.vertices.iter().all(|&v| g.measure(v) == m0)
    };
    let hypotheses = vec![
        finding(
            "kirchhoff_balance",
            kirchhoff.balanced,
            match &kirchhoff_witness {
                Some(w) => format!("imbalance {:e} at {w}", kirchhoff.max_imbalance),
                None => format!("max imbalance {:e} over {} interior vertices", kirchhoff.max_imbalance, trunc.interior.len()),
            },
        ),
        finding("bounded_asymmetry", asym_bounded, format!("C by radius: {}", trend(&asymmetry_by_radius))),
        finding(
            "cutoff_energy_bounded",
            cutoff_bounded,
            match &cutoff {
                Some(c) => format!("tent cutoffs, C_chi by radius: {}", trend(&c.constants)),
                None => "radius too small to probe cutoffs".to_string(),
            },
        ),
        finding(
            "bounded_skew_part",
            !gamma_growing && !gamma_by_radius.is_empty(),
            format!("gamma by radius: {}{}", trend(&gamma_by_radius), if gamma_growing { " (growing)" } else { "" }),
        ),
        finding("constant_measure", constant_measure, "m constant on the ball"),
        finding(
            "positive_cheeger_constant",
            cheeger.as_ref().is_some_and(|c| c.h > 0.0),
            match &cheeger {
                Some(c) if c.exact => format!("h = {} (exhaustive)", c.h),
                Some(c) => format!("h <= {} (nested balls)", c.h),
                None => "needs m = 1".to_string(),
            },
        ),
    ];

    let kb = kirchhoff.balanced;
    let chi_route = kb && asym_bounded && cutoff_bounded;
    let accretive_numeric = sample.min_real >= -1e-12;
    let m_accretive = (chi_route || (kb && constant_measure)) && accretive_numeric;
    let m_sectorial = chi_route && sector.holds;
    let nonneg_vertex = kb
        && unit
        && asym_bounded
        && cheeger.as_ref().is_some_and(|c| c.h > 0.0 && c.holds);
    let conclusions = vec![
        finding(
            "m_accretive",
            m_accretive,
            format!(
                "min Re W = {:.6}; routes: cutoffs+asymmetry {}, constant measure {}",
                sample.min_real,
                chi_route,
                kb && constant_measure
            ),
        ),
        finding(
            "m_sectorial",
            m_sectorial,
            format!("|Im z| <= 1/2 + (C/8) Re z with C = {asymmetry_constant}, worst excess {:e}", sector.worst_excess),
        ),
        finding(
            "m_sectorial_nonnegative_vertex",
            nonneg_vertex,
            match &cheeger {
                Some(c) => format!("lambda0 = {:.6}, min Re W = {:.6}", c.lambda0, sample.min_real),
                None => "needs m = 1".to_string(),
            },
        ),
    ];

    Ok(Certificate {
        root: g.label(root).to_string(),
        radius,
        ball_size: trunc.len(),
        interior_size: trunc.interior.len(),
        kirchhoff,
        kirchhoff_witness,
        asymmetry_by_radius,
        asymmetry_constant,
        gamma_by_radius,
        gamma_growing,
        cutoff,
        min_real: sample.min_real,
        sector,
        fitted_vertex,
        fitted_semi_angle,
        cheeger,
        hypotheses,
        conclusions,
        verdict: m_accretive,
    })
}

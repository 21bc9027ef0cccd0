//! Heat semigroup `exp(−tA)` of truncated operators in the weighted geometry:
//! contraction, fast decay, resolvent bounds and positivity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{similarity_to_standard, OperatorKind, TruncatedOperator, WeightedVector, DENSE_LIMIT};

/// Absolute slack on operator-norm comparisons.
pub const NORM_SLACK: f64 = 1e-9;

// Substep length keeps `h ‖A‖₁ ≤ TAYLOR_THETA`, so the Taylor series has no
// cancellation beyond a factor e.
const TAYLOR_THETA: f64 = 1.0;
const TAYLOR_MAX_TERMS: usize = 60;

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if !t.is_finite() {
        return Err(Error::Precondition("time must be finite".into()));
    }
    Ok(())
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(−tA) v` by substepped Taylor series, with `matvec` computing `A x`.
fn taylor_action(matvec: impl Fn(&[Complex64]) -> Vec<Complex64>, norm: f64, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if t == 0.0 || norm == 0.0 {
        return Ok(v.to_vec());
    }
    let steps = (t * norm / TAYLOR_THETA).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut x = v.to_vec();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        let mut small = 0;
        let mut converged = false;
        for k in 1..=TAYLOR_MAX_TERMS {
            let scale = -h / k as f64;
            term = matvec(&term).into_iter().map(|z| z * scale).collect();
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += b;
            }
            if sup_norm(&term) <= f64::EPSILON * 0.5 * sup_norm(&acc) {
                small += 1;
                if small == 2 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "Taylor series did not converge in {TAYLOR_MAX_TERMS} terms (step {h:e}, ‖A‖₁ = {norm:e})"
            )));
        }
        x = acc;
    }
    Ok(x)
}

/// `exp(−tA) v` without forming the exponential.
pub fn expm_apply(op: &TruncatedOperator, t: f64, v: &WeightedVector) -> Result<WeightedVector> {
    check_time(t)?;
    if v.len() != op.len() {
        return Err(Error::DimensionMismatch { expected: op.len(), found: v.len() });
    }
    let values = taylor_action(|x| op.apply(x), op.one_norm(), t, &v.values)?;
    Ok(WeightedVector::new(values, op.measure().clone()))
}

/// Dense `exp(−tA)` in vertex coordinates.
pub fn expm_dense(op: &TruncatedOperator, t: f64) -> Result<DMatrix<f64>> {
    check_time(t)?;
    let a = op.dense()?;
    let e = (a * -t).exp();
    if e.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!("matrix exponential overflowed at t = {t}")));
    }
    Ok(e)
}

fn similar(op: &TruncatedOperator, e: &DMatrix<f64>) -> DMatrix<f64> {
    let s: Vec<f64> = op.measure().iter().map(|m| m.sqrt()).collect();
    DMatrix::from_fn(e.nrows(), e.ncols(), |i, j| s[i] * e[(i, j)] / s[j])
}

fn spectral_norm(m: DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let sv = m
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge (n = {n})")))?
        .singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// `‖exp(−tA)‖_m`: exact via SVD up to [`DENSE_LIMIT`], power iteration above.
pub fn operator_norm_expm(op: &TruncatedOperator, t: f64) -> Result<f64> {
    check_time(t)?;
    if op.len() > DENSE_LIMIT {
        return Ok(operator_norm_expm_power(op, t, 500, 1e-12)?.estimate);
    }
    let e = expm_dense(op, t)?;
    spectral_norm(similar(op, &e))
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerNorm {
    /// `√μ` for the final Rayleigh quotient `μ` of `E*E`.
    pub estimate: f64,
    /// `‖E*E f − μ f‖_m` at the final unit iterate.
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration on `E*E`, `E = exp(−tA)` applied matrix-free and `E*` the
/// weighted adjoint `D⁻¹ Eᵀ D`. The estimate is a lower bound on the norm; the
/// residual bounds the distance of `μ` to the spectrum of `E*E`.
pub fn operator_norm_expm_power(op: &TruncatedOperator, t: f64, max_iter: usize, tol: f64) -> Result<PowerNorm> {
    check_time(t)?;
    let n = op.len();
    let m = op.measure().clone();
    let norm1 = op.one_norm();
    let weighted_norm = |v: &[Complex64]| -> f64 { v.iter().zip(m.iter()).map(|(z, w)| w * z.norm_sqr()).sum::<f64>().sqrt() };
    let gram = |f: &[Complex64]| -> Result<Vec<Complex64>> {
        let ef = taylor_action(|x| op.apply(x), norm1, t, f)?;
        let dx: Vec<Complex64> = ef.iter().zip(m.iter()).map(|(z, w)| z * w).collect();
        let v = taylor_action(|x| op.apply_transpose(x), norm1, t, &dx)?;
        Ok(v.iter().zip(m.iter()).map(|(z, w)| z / w).collect())
    };
    // deterministic, non-symmetric start to avoid orthogonality to the top vector
    let mut f: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + (i as f64 * 0.618).fract(), 0.0)).collect();
    let f_norm = weighted_norm(&f);
    f.iter_mut().for_each(|z| *z /= f_norm);
    let mut mu = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=max_iter {
        iterations = it;
        let g = gram(&f)?;
        mu = g.iter().zip(&f).zip(m.iter()).map(|((a, b), w)| (a * b.conj()).re * w).sum::<f64>();
        let r: Vec<Complex64> = g.iter().zip(&f).map(|(a, b)| a - b * mu).collect();
        residual = weighted_norm(&r);
        let g_norm = weighted_norm(&g);
        if g_norm == 0.0 {
            break;
        }
        f = g.into_iter().map(|z| z / g_norm).collect();
        if residual <= tol * mu.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(PowerNorm { estimate: mu.max(0.0).sqrt(), residual, iterations })
}

/// `‖(A + λ)⁻¹‖_m = 1/σ_min(Â + λ)`.
pub fn resolvent_norm(op: &TruncatedOperator, lambda: Complex64) -> Result<f64> {
    // written so that NaN is rejected too
    if lambda.re.is_nan() || lambda.re <= 0.0 {
        return Err(Error::Precondition(format!("resolvent needs Re λ > 0, got {lambda}")));
    }
    let a = similarity_to_standard(op)?;
    let n = a.nrows();
    let shifted = DMatrix::from_fn(n, n, |i, j| Complex64::new(a[(i, j)], 0.0) + if i == j { lambda } else { Complex64::new(0.0, 0.0) });
    let sv = shifted
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge (n = {n})")))?
        .singular_values;
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 || !smin.is_finite() {
        return Err(Error::Numeric(format!("A + λ is numerically singular at λ = {lambda}")));
    }
    Ok(1.0 / smin)
}

/// `‖exp(−zA)‖_m` at a complex time `z` with `Re z ≥ 0`. Used for optional
/// holomorphic-semigroup probes; no default pipeline calls it.
pub fn complex_time_norm(op: &TruncatedOperator, z: Complex64) -> Result<f64> {
    if z.re < 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Precondition(format!("complex time needs finite z with Re z >= 0, got {z}")));
    }
    let a = similarity_to_standard(op)?;
    let e = a.map(|x| Complex64::new(x, 0.0) * -z).exp();
    let n = e.nrows();
    let sv = e
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge (n = {n})")))?
        .singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

#[derive(Clone, Debug, Serialize)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub operator_norms: Vec<f64>,
    /// `min(1, e^{−λ₀ t})`.
    pub bounds: Vec<f64>,
    pub lambda0: f64,
    /// `state_norms[k][i] = ‖exp(−t_i A) v_k‖_m`.
    pub state_norms: Vec<Vec<f64>>,
    /// Indices of times where the norm exceeds the bound by more than [`NORM_SLACK`].
    pub flagged: Vec<usize>,
    /// Whether every state norm is non-increasing along the grid (same slack).
    pub states_monotone: bool,
}

impl EvolutionTrace {
    pub fn passed(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Parse `start:stop:step` into a grid that includes `stop` when it lands on it.
pub fn parse_time_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Spec(format!("bad number {s:?} in time grid {spec:?}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, stop, step] => {
            let (a, b, h) = (parse(start)?, parse(stop)?, parse(step)?);
            if !(a >= 0.0 && b >= a && h > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::Spec(format!("time grid {spec:?} needs 0 <= start <= stop and step > 0")));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| a + i as f64 * h).collect())
        }
        _ => Err(Error::Spec(format!("time grid must be start:stop:step, got {spec:?}"))),
    }
}

/// Operator and state norms on a sorted non-negative time grid.
pub fn evolve_trace(op: &TruncatedOperator, initial: &[WeightedVector], times: &[f64], lambda0: Option<f64>) -> Result<EvolutionTrace> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition("time grid must be sorted".into()));
    }
    for &t in times {
        check_time(t)?;
    }
    let lambda0 = lambda0.unwrap_or(0.0);
    if !lambda0.is_finite() {
        return Err(Error::Precondition("λ₀ must be finite".into()));
    }
    let operator_norms = times
        .par_iter()
        .map(|&t| operator_norm_expm(op, t))
        .collect::<Result<Vec<_>>>()?;
    let bounds: Vec<f64> = times.iter().map(|&t| (-lambda0 * t).exp().min(1.0)).collect();
    let flagged = operator_norms
        .iter()
        .zip(&bounds)
        .enumerate()
        .filter(|(_, (n, b))| **n > **b + NORM_SLACK)
        .map(|(i, _)| i)
        .collect();
    let state_norms = initial
        .iter()
        .map(|v| {
            times
                .par_iter()
                .map(|&t| expm_apply(op, t, v).map(|w| w.norm()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let states_monotone = state_norms
        .iter()
        .all(|s| s.windows(2).all(|w| w[1] <= w[0] + NORM_SLACK * w[0].max(1.0)));
    Ok(EvolutionTrace { times: times.to_vec(), operator_norms, bounds, lambda0, state_norms, flagged, states_monotone })
}

/// Entrywise non-negativity of `exp(−tA)` up to `−1e−12`.
pub fn positivity_check(op: &TruncatedOperator, t: f64) -> Result<bool> {
    if op.kind() == OperatorKind::SkewPart {
        return Err(Error::Precondition("positivity is not defined for the skew part".into()));
    }
    let e = expm_dense(op, t)?;
    Ok(e.iter().all(|&x| x >= -1e-12))
}

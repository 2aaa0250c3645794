//! Rotation numbers with rigorous error bounds, continued-fraction
//! convergents, and the (*)_β Diophantine test.
//!
//! For a lifting of a circle homeomorphism, |Fᴺ(x) − x − Nρ| ≤ 1, so the
//! orbit average carries the classical error bound 1/N. The (*)_β condition —
//! only finitely many rationals with |ρ − p/q| < q^{−(2+β)} — is decidable
//! only up to q_max and the estimate's uncertainty, so the report states its
//! verdict conditionally.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::eval_map_solve;
use crate::lifting::{Lifting, DEFAULT_GRID};
use crate::probe::Probe;

/// Orbit-average rotation number with the 1/N error bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RotationEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: u64,
    pub x0: f64,
}

impl RotationEstimate {
    /// Wraps an exactly known rotation number (error bound 0), e.g. for rigid
    /// rotations or analytically derived values.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_bound: 0.0,
            iterations: 0,
            x0: 0.0,
        }
    }
}

/// (Fᴺ(x₀) − x₀)/N for a certified diffeomorphism lifting.
pub fn rotation_number(f: &Lifting, iterations: u64, x0: f64) -> Result<RotationEstimate> {
    let cert = f.validate_diffeo(DEFAULT_GRID);
    if !cert.is_diffeo {
        return Err(Error::NotADiffeo(cert.min_derivative));
    }
    let n = iterations.max(1);
    let value = (f.iterate(x0, n) - x0) / n as f64;
    Ok(RotationEstimate {
        value,
        error_bound: 1.0 / n as f64,
        iterations: n,
        x0,
    })
}

/// A continued-fraction convergent p/q in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub p: i64,
    pub q: u64,
}

/// Continued-fraction convergents of rho with q ≤ q_max, in increasing q.
///
/// Reciprocals within 1e−9 of an integer are snapped so that decimal inputs
/// like 0.3 recover their exact expansion; the recursion stops once the
/// fractional part falls below 1e−12 or the precision floor is reached.
pub fn convergents(rho: f64, q_max: u64) -> Vec<Convergent> {
    let mut out = Vec::new();
    let a0 = rho.floor();
    let (mut p_prev, mut q_prev) = (1i64, 0u64);
    let (mut p, mut q) = (a0 as i64, 1u64);
    out.push(Convergent { p, q });
    let mut frac = rho - a0;
    for _ in 0..64 {
        if frac.abs() < 1e-12 {
            break;
        }
        let mut v = 1.0 / frac;
        if (v - v.round()).abs() < 1e-9 {
            v = v.round();
        }
        let a = v.floor();
        frac = v - a;
        let a = a as i64;
        let p_next = a * p + p_prev;
        let q_next = a as u64 * q + q_prev;
        if q_next > q_max {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        out.push(Convergent { p, q });
    }
    out
}

/// A rational approximation beating the (*)_β threshold.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Violation {
    pub p: i64,
    pub q: u64,
    pub gap: f64,
}

/// Conditional verdict of the (*)_β test up to q_max.
#[derive(Clone, Debug, Serialize)]
pub struct DiophantineReport {
    pub beta: f64,
    pub q_max: u64,
    /// Convergents with |ρ̂ − p/q| < q^{−(2+β)} + error_bound.
    pub violations: Vec<Violation>,
    /// No violation with q above q_threshold.
    pub satisfied_up_to_qmax: bool,
    pub q_threshold: u64,
    /// Carried over from the estimate so the verdict is explicitly conditional.
    pub error_bound: f64,
    /// False when β ≥ 1 (outside the 0 < β < 1 conjugacy regime) — a warning,
    /// not a failure.
    pub beta_in_yoccoz_range: bool,
    /// A convergent indistinguishable from ρ̂ at the estimate's accuracy; when
    /// present the (*)_β enumeration is bypassed.
    pub possibly_rational: Option<Convergent>,
}

/// Runs the (*)_β test over the convergents of the estimate, with the default
/// finiteness threshold q_max/10.
pub fn check_star_beta(est: &RotationEstimate, beta: f64, q_max: u64) -> Result<DiophantineReport> {
    check_star_beta_with_threshold(est, beta, q_max, (q_max / 10).max(1))
}

pub fn check_star_beta_with_threshold(
    est: &RotationEstimate,
    beta: f64,
    q_max: u64,
    q_threshold: u64,
) -> Result<DiophantineReport> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::BetaOutOfRange(beta));
    }
    let convs = convergents(est.value, q_max.max(1));
    let rational = convs
        .iter()
        .find(|c| (est.value - c.p as f64 / c.q as f64).abs() <= est.error_bound)
        .copied();
    let mut violations = Vec::new();
    if rational.is_none() {
        for c in &convs {
            let gap = (est.value - c.p as f64 / c.q as f64).abs();
            if gap < (c.q as f64).powf(-(2.0 + beta)) + est.error_bound {
                violations.push(Violation {
                    p: c.p,
                    q: c.q,
                    gap,
                });
            }
        }
    }
    let satisfied = violations.iter().all(|v| v.q <= q_threshold);
    Ok(DiophantineReport {
        beta,
        q_max,
        violations,
        satisfied_up_to_qmax: satisfied,
        q_threshold,
        error_bound: est.error_bound,
        beta_in_yoccoz_range: beta < 1.0,
        possibly_rational: rational,
    })
}

/// A certified periodic orbit: F^q(x) = x + p within the stated residual.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeriodicOrbitCertificate {
    pub x: f64,
    pub p: i64,
    pub q: u64,
    pub residual: f64,
}

/// Attempts to certify a rational rotation number p/q by locating a periodic
/// orbit of F. Runs the evaluation-map solver on the Type I probe F + λ and
/// looks for an x with Δ_q(x) = 0 (a sign change of λ(x), or λ ≈ 0 outright).
pub fn certify_rational(
    f: &Lifting,
    p: i64,
    q: u64,
    x_grid: usize,
) -> Result<Option<PeriodicOrbitCertificate>> {
    let probe = Probe::type_i(f.clone(), 1.0)?;
    let window = (-10.0, 10.0);
    let n = u32::try_from(q.max(1)).map_err(|_| Error::InvalidShift(q as f64))?;
    let m = x_grid.max(8);
    let lambda_at = |x: f64| -> Option<f64> {
        eval_map_solve(&probe, x, n, p, window)
            .ok()
            .flatten()
            .map(|pt| pt.lambda)
    };
    let make_cert = |x: f64| {
        let residual = (f.iterate(x, q) - x - p as f64).abs();
        (residual <= 1e-9).then_some(PeriodicOrbitCertificate { x, p, q, residual })
    };

    let mut prev: Option<(f64, f64)> = None;
    for j in 0..=m {
        let x = j as f64 / m as f64;
        let Some(lam) = lambda_at(x) else {
            prev = None;
            continue;
        };
        if lam.abs() <= 1e-9 {
            return Ok(make_cert(x));
        }
        if let Some((xp, lp)) = prev {
            if lp.signum() != lam.signum() {
                // bisect the sign change of λ(x) down to λ ≈ 0
                let (mut xa, mut xb, mut la) = (xp, x, lp);
                for _ in 0..80 {
                    let xm = 0.5 * (xa + xb);
                    let Some(lm) = lambda_at(xm) else { break };
                    if lm.abs() <= 1e-10 {
                        return Ok(make_cert(xm));
                    }
                    if lm.signum() == la.signum() {
                        xa = xm;
                        la = lm;
                    } else {
                        xb = xm;
                    }
                }
                return Ok(make_cert(0.5 * (xa + xb)));
            }
        }
        prev = Some((x, lam));
    }
    Ok(None)
}

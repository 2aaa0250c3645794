//! The n-evaluation map: for a probe path α_λ and a point x, the parameter
//! λ = Δₙ(x) at which x is n-periodic (on the chosen integer branch), together
//! with the orbit derivatives in x and λ and the derivative Δₙ'(x).
//!
//! Δₙ'(x) = (1 − dα_λⁿ/dx) / (dα_λⁿ/dx · Σ_{k<n} (dα_λ^{k+1}/dx)⁻¹ (G−F)(α_λᵏ)),
//! whose denominator equals ∂α_λⁿ/∂λ; the two are computed by independent
//! recursions so the implicit-function identity can be cross-checked.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifting::Lifting;
use crate::probe::{LambdaDomain, Probe};

/// Residual target for the λ solve.
const SOLVE_TOL: f64 = 1e-12;

/// |Δₙ'| threshold accepted by the degenerate-point bisection.
const CRITICAL_TOL: f64 = 1e-10;

/// A solved point of the n-evaluation map.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvaluationPoint {
    /// Base point on the circle.
    pub x: f64,
    /// Period.
    pub n: u32,
    /// Integer branch m with α_λⁿ(x) = x + m.
    pub branch: i64,
    /// Solved parameter λ = Δₙ(x).
    pub lambda: f64,
    /// dα_λⁿ/dx at x.
    pub d_x: f64,
    /// ∂α_λⁿ/∂λ at x (chain-rule recursion).
    pub d_lambda: f64,
    /// Δₙ'(x) from the closed-form quotient.
    pub delta_prime: f64,
}

/// Π_{j<n} A'(Aʲ(x)): derivative of the n-th iterate.
pub fn orbit_derivative_x(map: &Lifting, x: f64, n: u64) -> f64 {
    let mut prod = 1.0;
    let mut y = x;
    for _ in 0..n {
        prod *= map.deriv1(y);
        y = map.eval(y);
    }
    prod
}

/// ∂α_λⁿ/∂λ at fixed x, by the forward recursion
/// u ← α_λ'(y)·u + (G−F)(y), y ← α_λ(y).
pub fn orbit_derivative_lambda(probe: &Probe, lambda: f64, x: f64, n: u64) -> f64 {
    let mut u = 0.0;
    let mut y = x;
    for _ in 0..n {
        u = probe.alpha_deriv1(lambda, y) * u + probe.difference_at(y);
        y = probe.alpha_eval(lambda, y);
    }
    u
}

/// One pass along the orbit of x under α_λ, returning
/// (Dₙ, Σ_{k<n} (G−F)(α_λᵏ(x)) / D_{k+1}) with D_m the m-iterate derivative.
fn orbit_quotient_sum(probe: &Probe, lambda: f64, x: f64, n: u32) -> (f64, f64) {
    let mut prod = 1.0;
    let mut sum = 0.0;
    let mut y = x;
    for _ in 0..n {
        prod *= probe.alpha_deriv1(lambda, y);
        sum += probe.difference_at(y) / prod;
        y = probe.alpha_eval(lambda, y);
    }
    (prod, sum)
}

fn window_in_domain(domain: LambdaDomain, lo: f64, hi: f64) -> bool {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return false;
    }
    match domain {
        LambdaDomain::Unbounded => true,
        LambdaDomain::Bounded { a, b } => lo >= a && hi <= b,
    }
}

/// Solves α_λⁿ(x) = x + branch for λ in the window.
///
/// g(λ) = α_λⁿ(x) − x − branch is strictly monotone when G − F keeps one sign
/// on the path, so a sign change brackets the unique root; safeguarded
/// bisection plus Newton polishing drives |g| ≤ 1e−12. Returns `None` when g
/// has no sign change on the window.
pub fn eval_map_solve(
    probe: &Probe,
    x: f64,
    n: u32,
    branch: i64,
    window: (f64, f64),
) -> Result<Option<EvaluationPoint>> {
    let (lo, hi) = window;
    if !window_in_domain(probe.domain(), lo, hi) {
        return Err(Error::WindowOutsideDomain { lo, hi });
    }
    let target = x + branch as f64;
    let g = |lambda: f64| probe.alpha_iterate(lambda, x, n as u64) - target;

    let g_lo = g(lo);
    let g_hi = g(hi);
    let mut a = lo;
    let mut b = hi;
    let mut ga = g_lo;
    if g_lo == 0.0 {
        b = lo;
    } else if g_hi == 0.0 {
        a = hi;
        ga = 0.0;
    } else if g_lo.signum() == g_hi.signum() {
        return Ok(None);
    }

    let mut lambda = 0.5 * (a + b);
    let mut gv = g(lambda);
    for _ in 0..80 {
        if gv.abs() <= SOLVE_TOL || (b - a) <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
        // shrink the bracket with the current midpoint sample
        if gv == 0.0 {
            break;
        }
        if gv.signum() == ga.signum() {
            a = lambda;
            ga = gv;
        } else {
            b = lambda;
        }
        // Newton step when it stays inside the bracket, bisection otherwise
        let slope = orbit_derivative_lambda(probe, lambda, x, n as u64);
        let newton = lambda - gv / slope;
        lambda = if slope != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        gv = g(lambda);
    }

    let (d_x, quotient_sum) = orbit_quotient_sum(probe, lambda, x, n);
    let d_lambda = orbit_derivative_lambda(probe, lambda, x, n as u64);
    if d_lambda == 0.0 {
        return Err(Error::ZeroLambdaDerivative);
    }
    let delta_prime = (1.0 - d_x) / (d_x * quotient_sum);
    if !delta_prime.is_finite() {
        return Err(Error::ZeroLambdaDerivative);
    }
    Ok(Some(EvaluationPoint {
        x,
        n,
        branch,
        lambda,
        d_x,
        d_lambda,
        delta_prime,
    }))
}

/// Δₙ'(x) recomputed from the closed-form quotient at an already-solved point.
pub fn eval_map_derivative(probe: &Probe, pt: &EvaluationPoint) -> Result<f64> {
    let (d_x, quotient_sum) = orbit_quotient_sum(probe, pt.lambda, pt.x, pt.n);
    let value = (1.0 - d_x) / (d_x * quotient_sum);
    if !value.is_finite() {
        return Err(Error::ZeroLambdaDerivative);
    }
    Ok(value)
}

/// Locates the degenerate parameters on one branch: x with Δₙ'(x) = 0, each
/// verified as an n-periodic point with iterate derivative 1.
///
/// Scans the x-grid, brackets sign changes of Δₙ' between adjacent solvable
/// points, and bisects to |Δₙ'| ≤ 1e−10. Points solved exactly on the grid
/// with |Δₙ'| already below the tolerance are kept directly. Constant-Δₙ
/// probes (rigid translation families) have no isolated sign change and yield
/// an empty list.
pub fn critical_points(
    probe: &Probe,
    n: u32,
    branch: i64,
    grid_points: usize,
) -> Result<Vec<EvaluationPoint>> {
    let window = probe.solve_window(None)?;
    let m = grid_points.max(2);
    let solved: Vec<Option<EvaluationPoint>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 / m as f64;
            eval_map_solve(probe, x, n, branch, window).ok().flatten()
        })
        .collect();

    // Grid points already below the tolerance count only when isolated: on a
    // constant-Δₙ probe every point is degenerate and none should be reported.
    let mut candidates: Vec<EvaluationPoint> = Vec::new();
    for (j, pt) in solved.iter().enumerate() {
        let Some(pt) = pt else { continue };
        if pt.delta_prime.abs() > CRITICAL_TOL {
            continue;
        }
        let isolated = [(j + m - 1) % m, (j + 1) % m]
            .iter()
            .any(|&jn| solved[jn].is_some_and(|nb| nb.delta_prime.abs() > CRITICAL_TOL));
        if isolated {
            candidates.push(*pt);
        }
    }
    for pair in solved.windows(2) {
        let (Some(p0), Some(p1)) = (&pair[0], &pair[1]) else {
            continue;
        };
        if p0.delta_prime.abs() <= CRITICAL_TOL || p1.delta_prime.abs() <= CRITICAL_TOL {
            continue;
        }
        if p0.delta_prime.signum() == p1.delta_prime.signum() {
            continue;
        }
        if let Some(pt) = bisect_critical(probe, n, branch, window, *p0, *p1) {
            candidates.push(pt);
        }
    }

    candidates.sort_by(|u, v| u.x.total_cmp(&v.x));
    candidates.dedup_by(|u, v| (u.x - v.x).abs() < 1e-8);
    Ok(candidates
        .into_iter()
        .filter(|pt| {
            let residual =
                probe.alpha_iterate(pt.lambda, pt.x, pt.n as u64) - pt.x - pt.branch as f64;
            residual.abs() <= 1e-10 && (pt.d_x - 1.0).abs() <= 1e-6
        })
        .collect())
}

fn bisect_critical(
    probe: &Probe,
    n: u32,
    branch: i64,
    window: (f64, f64),
    mut left: EvaluationPoint,
    right: EvaluationPoint,
) -> Option<EvaluationPoint> {
    let mut xa = left.x;
    let mut xb = right.x;
    for _ in 0..80 {
        let xm = 0.5 * (xa + xb);
        let mid = eval_map_solve(probe, xm, n, branch, window)
            .ok()
            .flatten()?;
        if mid.delta_prime.abs() <= CRITICAL_TOL {
            return Some(mid);
        }
        if mid.delta_prime.signum() == left.delta_prime.signum() {
            xa = xm;
            left = mid;
        } else {
            xb = xm;
        }
        if xb - xa <= f64::EPSILON * xb.abs().max(1.0) {
            return Some(mid);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::Lifting;
    use crate::testutil::{paper_map, paper_type_i, paper_type_ii};

    #[test]
    fn orbit_derivative_of_rotation_is_one() {
        let rot = Lifting::rotation(0.3, 2);
        assert_eq!(orbit_derivative_x(&rot, 0.42, 7), 1.0);
    }

    #[test]
    fn orbit_derivative_single_step() {
        let f = paper_map();
        // F'(0.75) = 1 + (2/2.1)cos(3π/2) = 1
        assert!((orbit_derivative_x(&f, 0.75, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orbit_derivative_matches_finite_difference() {
        let f = paper_map();
        for &x in &[0.05, 0.3, 0.62] {
            let h = 1e-6;
            let fd = (f.iterate(x + h, 2) - f.iterate(x - h, 2)) / (2.0 * h);
            let exact = orbit_derivative_x(&f, x, 2);
            assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn lambda_derivative_type_i() {
        let p = paper_type_i();
        // n = 1: ∂(F + λk)/∂λ = k
        assert_eq!(orbit_derivative_lambda(&p, 0.3, 0.2, 1), 1.0);
        // n = 2: k (1 + α_λ'(α_λ(x)))
        let lambda = 0.2;
        let x = 0.4;
        let alpha = p.alpha_at(lambda);
        let expected = 1.0 + alpha.eval_derivative(alpha.eval(x), 1).unwrap();
        let got = orbit_derivative_lambda(&p, lambda, x, 2);
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn lambda_derivative_matches_finite_difference() {
        let p = paper_type_ii();
        for &(lambda, x) in &[(0.2, 0.1), (0.7, 0.55), (1.4, 0.9)] {
            let h = 1e-6;
            let fd =
                (p.alpha_iterate(lambda + h, x, 3) - p.alpha_iterate(lambda - h, x, 3)) / (2.0 * h);
            let exact = orbit_derivative_lambda(&p, lambda, x, 3);
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "fd {fd} vs exact {exact} at lambda {lambda}, x {x}"
            );
        }
    }

    #[test]
    fn solve_type_i_closed_form() {
        let p = paper_type_i();
        let window = (-10.0, 10.0);
        // λ = (x − F(x))/k
        let pt = eval_map_solve(&p, 0.0, 1, 0, window).unwrap().unwrap();
        assert!((pt.lambda - (-0.1)).abs() < 1e-11);

        let pt = eval_map_solve(&p, 0.75, 1, 0, window).unwrap().unwrap();
        let expected = -(0.1 - 1.0 / (2.1 * std::f64::consts::PI));
        assert!((pt.lambda - expected).abs() < 1e-11);
    }

    #[test]
    fn solve_rigid_rotation_probe() {
        let p = Probe::type_i(Lifting::rotation(0.3, 2), 1.0).unwrap();
        for &x in &[0.0, 0.33, 0.9] {
            let pt = eval_map_solve(&p, x, 1, 0, (-10.0, 10.0)).unwrap().unwrap();
            assert!((pt.lambda - (-0.3)).abs() < 1e-11);
        }
    }

    #[test]
    fn solve_returns_none_without_sign_change() {
        let p = paper_type_i();
        // branch 5 is unreachable inside a [-2, 2] window for this map
        assert!(eval_map_solve(&p, 0.3, 1, 5, (-2.0, 2.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn solve_handles_root_at_window_endpoint() {
        // rigid probe at x = 0 makes g(λ) = 0.3 + λ exact, so the root sits
        // bitwise on the window boundary
        let p = Probe::type_i(Lifting::rotation(0.3, 2), 1.0).unwrap();
        let pt = eval_map_solve(&p, 0.0, 1, 0, (-0.3, 0.7)).unwrap().unwrap();
        assert!((pt.lambda + 0.3).abs() <= 1e-11);
        let pt = eval_map_solve(&p, 0.0, 1, 0, (-1.3, -0.3))
            .unwrap()
            .unwrap();
        assert!((pt.lambda + 0.3).abs() <= 1e-11);
    }

    #[test]
    fn solve_rejects_window_outside_domain() {
        let p = paper_type_ii();
        let res = eval_map_solve(&p, 0.3, 1, 0, (-1.0, 1.0));
        assert!(matches!(res, Err(Error::WindowOutsideDomain { .. })));
    }

    #[test]
    fn derivative_at_degenerate_point_vanishes() {
        let p = paper_type_i();
        let pt = eval_map_solve(&p, 0.75, 1, 0, (-10.0, 10.0))
            .unwrap()
            .unwrap();
        // F'(0.75) = 1, so the numerator 1 − d_x vanishes
        assert!(eval_map_derivative(&p, &pt).unwrap().abs() < 1e-12);
    }

    #[test]
    fn derivative_type_i_closed_form() {
        let p = paper_type_i();
        let pt = eval_map_solve(&p, 0.0, 1, 0, (-10.0, 10.0))
            .unwrap()
            .unwrap();
        // λ(x) = (x − F(x))/k gives λ' = (1 − F')/k = −2/2.1 at x = 0
        let expected = -2.0 / 2.1;
        assert!((pt.delta_prime - expected).abs() < 1e-11);
        assert!((eval_map_derivative(&p, &pt).unwrap() - expected).abs() < 1e-11);
    }

    #[test]
    fn implicit_function_identity() {
        let p = paper_type_ii();
        let window = p.solve_window(None).unwrap();
        for n in 1..=3u32 {
            for j in 0..64 {
                let x = j as f64 / 64.0;
                if let Some(pt) = eval_map_solve(&p, x, n, 0, window).unwrap() {
                    let residual = pt.delta_prime * pt.d_lambda + pt.d_x - 1.0;
                    assert!(
                        residual.abs() <= 1e-8,
                        "residual {residual} at x {x}, n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn solve_is_monotone_in_lambda() {
        let p = paper_type_ii();
        let (lo, hi) = p.solve_window(None).unwrap();
        // G > F pointwise here, so g(λ) must increase
        for j in 0..8 {
            let x = j as f64 / 8.0;
            let mut prev = f64::NEG_INFINITY;
            for i in 0..10 {
                let lambda = lo + (hi - lo) * (i as f64 + 0.5) / 10.0;
                let val = p.alpha_iterate(lambda, x, 2) - x;
                assert!(val > prev);
                prev = val;
            }
        }
    }

    #[test]
    fn branch_consistency_under_translation() {
        let p = paper_type_ii();
        let window = p.solve_window(None).unwrap();
        for &x in &[0.1, 0.6] {
            let a = eval_map_solve(&p, x, 2, 1, window).unwrap();
            let b = eval_map_solve(&p, x + 1.0, 2, 1, window).unwrap();
            match (a, b) {
                (Some(pa), Some(pb)) => {
                    assert!((pa.lambda - pb.lambda).abs() < 1e-9)
                }
                (None, None) => {}
                _ => panic!("translation changed solvability at x = {x}"),
            }
        }
    }

    #[test]
    fn critical_points_of_paper_type_i() {
        let p = paper_type_i();
        let pts = critical_points(&p, 1, 0, 512).unwrap();
        assert_eq!(pts.len(), 2, "expected the two saddle-node parameters");
        let lam_lo = -(0.1 + 1.0 / (2.1 * std::f64::consts::PI));
        let lam_hi = -(0.1 - 1.0 / (2.1 * std::f64::consts::PI));
        assert!(
            (pts[0].lambda - lam_lo).abs() < 1e-8,
            "lambda {}",
            pts[0].lambda
        );
        assert!(
            (pts[1].lambda - lam_hi).abs() < 1e-8,
            "lambda {}",
            pts[1].lambda
        );
        assert!((pts[0].x - 0.25).abs() < 1e-6);
        assert!((pts[1].x - 0.75).abs() < 1e-6);
        for pt in &pts {
            assert!((pt.d_x - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn critical_points_empty_for_rigid_probe() {
        let p = Probe::type_i(Lifting::rotation(0.3, 2), 1.0).unwrap();
        assert!(critical_points(&p, 1, 0, 256).unwrap().is_empty());
    }
}

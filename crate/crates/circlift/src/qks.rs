//! Quantitative Kupka-Smale estimator.
//!
//! For a probe α_λ, E_γⁿ collects the λ-solvable grid points whose n-iterate
//! derivative sits within γ of 1, and Z_γⁿ is the set of parameters they map
//! to. Its Lebesgue measure is estimated by clustering the solved λ values
//! into intervals and compared against the bound cₙ·γ/σ with
//! bₙ = Σ_{i<n} u^{n−i+1}, cₙ = 1/bₙ, u the minimal path derivative along the
//! orbits of the kept points.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::{eval_map_solve, EvaluationPoint};
use crate::probe::Probe;

/// Kept solutions of one (n, γ) scan.
#[derive(Clone, Debug)]
pub struct HyperbolicityScan {
    pub probe: Probe,
    pub n: u32,
    pub gamma: f64,
    pub x_grid: usize,
    pub branches: Vec<i64>,
    pub window: (f64, f64),
    /// Entries with |dα_λⁿ/dx − 1| ≤ γ, ordered by (branch, x).
    pub entries: Vec<EvaluationPoint>,
}

/// Interval-union estimate of m(Z_γⁿ) with the theoretical bound attached.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureEstimate {
    pub measured: f64,
    /// Disjoint, sorted λ-intervals; singletons have zero width.
    pub intervals: Vec<(f64, f64)>,
    /// Minimal path derivative along the orbits of kept entries (1 by
    /// convention when the scan is empty).
    pub u: f64,
    pub b_n: f64,
    pub c_n: f64,
    /// cₙ·γ/σ.
    pub bound: f64,
    pub merge_gap: f64,
    pub entry_count: usize,
}

/// Integer branches m that can satisfy α_λⁿ(x) = x + m somewhere on the
/// window. Displacements increase with λ, so the window endpoints bound the
/// reachable range; widened by one on each side for safety.
pub fn feasible_branches(probe: &Probe, n: u32, window: (f64, f64), coarse: usize) -> Vec<i64> {
    let m = coarse.max(16);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..m {
        let x = j as f64 / m as f64;
        lo = lo.min(probe.alpha_iterate(window.0, x, n as u64) - x);
        hi = hi.max(probe.alpha_iterate(window.1, x, n as u64) - x);
    }
    let first = lo.floor() as i64 - 1;
    let last = hi.ceil() as i64 + 1;
    (first..=last).collect()
}

/// Scans the x-grid over the given branches and keeps the solutions with
/// |dα_λⁿ/dx − 1| ≤ γ.
pub fn scan_e_gamma(
    probe: &Probe,
    n: u32,
    gamma: f64,
    x_grid: usize,
    branches: &[i64],
) -> Result<HyperbolicityScan> {
    if probe.sigma() <= 0.0 {
        return Err(Error::SigmaZero(probe.sigma()));
    }
    let window = probe.solve_window(None)?;
    let m = x_grid.max(2);
    let entries: Vec<EvaluationPoint> = branches
        .iter()
        .flat_map(|&branch| {
            let kept: Vec<EvaluationPoint> = (0..m)
                .into_par_iter()
                .filter_map(|j| {
                    let x = j as f64 / m as f64;
                    eval_map_solve(probe, x, n, branch, window)
                        .ok()
                        .flatten()
                        .filter(|pt| (pt.d_x - 1.0).abs() <= gamma)
                })
                .collect();
            kept
        })
        .collect();
    Ok(HyperbolicityScan {
        probe: probe.clone(),
        n,
        gamma,
        x_grid: m,
        branches: branches.to_vec(),
        window,
        entries,
    })
}

/// 4 × the largest λ-gap between solutions at adjacent grid points, the
/// spacing scale of a connected cluster. Falls back to 1e−9 when the scan has
/// no adjacent pairs.
pub fn default_merge_gap(scan: &HyperbolicityScan) -> f64 {
    let h = 1.0 / scan.x_grid as f64;
    let mut spread = 0.0f64;
    for pair in scan.entries.windows(2) {
        let same_branch = pair[0].branch == pair[1].branch;
        let adjacent = (pair[1].x - pair[0].x) <= 1.5 * h && pair[1].x > pair[0].x;
        if same_branch && adjacent {
            spread = spread.max((pair[1].lambda - pair[0].lambda).abs());
        }
    }
    if spread > 0.0 {
        4.0 * spread
    } else {
        1e-9
    }
}

/// Clusters the entry λ values into intervals (gaps ≤ merge_gap merge) and
/// fills in the theorem quantities.
pub fn measure_z(scan: &HyperbolicityScan, merge_gap: f64) -> MeasureEstimate {
    let n = scan.n;
    let (intervals, u) = if scan.entries.is_empty() {
        (Vec::new(), 1.0)
    } else {
        let mut lambdas: Vec<f64> = scan.entries.iter().map(|e| e.lambda).collect();
        lambdas.sort_by(f64::total_cmp);
        let mut intervals = Vec::new();
        let mut start = lambdas[0];
        let mut prev = lambdas[0];
        for &lam in &lambdas[1..] {
            if lam - prev > merge_gap {
                intervals.push((start, prev));
                start = lam;
            }
            prev = lam;
        }
        intervals.push((start, prev));

        let mut u = f64::INFINITY;
        for e in &scan.entries {
            let mut y = e.x;
            for _ in 0..n {
                u = u.min(scan.probe.alpha_deriv1(e.lambda, y));
                y = scan.probe.alpha_eval(e.lambda, y);
            }
        }
        (intervals, u)
    };
    debug_assert!(u > 0.0, "kept orbits stay inside the diffeomorphism set");
    let measured = intervals.iter().map(|(lo, hi)| hi - lo).sum();
    let b_n: f64 = (0..n).map(|i| u.powi((n - i + 1) as i32)).sum();
    let c_n = 1.0 / b_n;
    MeasureEstimate {
        measured,
        intervals,
        u,
        b_n,
        c_n,
        bound: c_n * scan.gamma / scan.probe.sigma(),
        merge_gap,
        entry_count: scan.entries.len(),
    }
}

/// One (n, γ) cell of the experiment table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QksRow {
    pub n: u32,
    pub gamma: f64,
    pub measured: f64,
    pub u: f64,
    pub b_n: f64,
    pub c_n: f64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
    /// Σ_{n' ≤ n} 1/b_{n'} within the same γ column.
    pub inv_b_cumsum: f64,
    /// The caveat flag: the 1/bₙ series only converges outright when u > 1.
    pub u_below_one: bool,
    pub entry_count: usize,
}

/// Per-cell interval detail for the JSON side channel.
#[derive(Clone, Debug, Serialize)]
pub struct QksDetail {
    pub n: u32,
    pub gamma: f64,
    pub merge_gap: f64,
    pub intervals: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QksReport {
    pub rows: Vec<QksRow>,
    pub details: Vec<QksDetail>,
    pub slack: f64,
}

/// Default discretization slack for the bound check.
pub const DEFAULT_SLACK: f64 = 0.05;

/// Runs the scan and measure for every n ≤ n_max and γ, checking
/// measured ≤ bound·(1 + slack) per cell. Branches default to the feasible
/// range of the probe.
pub fn qks_report(
    probe: &Probe,
    n_max: u32,
    gammas: &[f64],
    x_grid: usize,
    branches: Option<&[i64]>,
    slack: f64,
) -> Result<QksReport> {
    let mut rows = Vec::new();
    let mut details = Vec::new();
    for &gamma in gammas {
        let mut cumsum = 0.0;
        for n in 1..=n_max.max(1) {
            let branch_list: Vec<i64> = match branches {
                Some(bs) => bs.to_vec(),
                None => {
                    let window = probe.solve_window(None)?;
                    feasible_branches(probe, n, window, 256)
                }
            };
            let scan = scan_e_gamma(probe, n, gamma, x_grid, &branch_list)?;
            let gap = default_merge_gap(&scan);
            let est = measure_z(&scan, gap);
            cumsum += 1.0 / est.b_n;
            rows.push(QksRow {
                n,
                gamma,
                measured: est.measured,
                u: est.u,
                b_n: est.b_n,
                c_n: est.c_n,
                bound: est.bound,
                ratio: if est.bound > 0.0 {
                    est.measured / est.bound
                } else {
                    f64::NAN
                },
                holds: est.measured <= est.bound * (1.0 + slack),
                inv_b_cumsum: cumsum,
                u_below_one: est.u < 1.0,
                entry_count: est.entry_count,
            });
            details.push(QksDetail {
                n,
                gamma,
                merge_gap: est.merge_gap,
                intervals: est.intervals,
            });
        }
    }
    Ok(QksReport {
        rows,
        details,
        slack,
    })
}

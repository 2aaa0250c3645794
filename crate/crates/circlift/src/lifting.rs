//! Degree-1 liftings of circle maps as trigonometric polynomials over the identity.
//!
//! A lifting is F(x) = x + c0 + Σ_k (s_k sin(2πkx) + c_k cos(2πkx)). The non-identity
//! part is 1-periodic, so F(x+1) = F(x) + 1 holds structurally. The representation is
//! closed under affine combinations and analytically differentiable to any order,
//! which keeps every downstream formula closed-form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default spatial grid for certificates and metrics.
pub const DEFAULT_GRID: usize = 4096;

const TAU: f64 = 2.0 * PI;

/// One harmonic term: `sin` and `cos` coefficients at integer frequency `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: u32,
    pub sin: f64,
    pub cos: f64,
}

/// A lifting of an order-preserving degree-1 circle map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLifting")]
pub struct Lifting {
    c0: f64,
    r: u32,
    harmonics: Vec<Harmonic>,
}

/// Unvalidated mirror of the JSON schema
/// `{"c0": number, "r": integer, "harmonics": [{"k":…, "sin":…, "cos":…}]}`.
#[derive(Deserialize)]
struct RawLifting {
    c0: f64,
    r: u32,
    #[serde(default)]
    harmonics: Vec<Harmonic>,
}

impl TryFrom<RawLifting> for Lifting {
    type Error = Error;

    fn try_from(raw: RawLifting) -> Result<Self> {
        Lifting::new(raw.c0, raw.r, raw.harmonics)
    }
}

impl Lifting {
    /// Builds a validated lifting. Harmonics are sorted by frequency; duplicate
    /// frequencies, zero frequencies and non-finite coefficients are rejected,
    /// as is r = 0.
    pub fn new(c0: f64, r: u32, mut harmonics: Vec<Harmonic>) -> Result<Self> {
        if !c0.is_finite() {
            return Err(Error::InvalidLifting(format!("non-finite c0: {c0}")));
        }
        if r < 1 {
            return Err(Error::InvalidLifting("regularity r must be >= 1".into()));
        }
        for h in &harmonics {
            if h.k == 0 {
                return Err(Error::InvalidLifting("harmonic frequency k = 0".into()));
            }
            if !h.sin.is_finite() || !h.cos.is_finite() {
                return Err(Error::InvalidLifting(format!(
                    "non-finite coefficient at k = {}",
                    h.k
                )));
            }
        }
        harmonics.sort_by_key(|h| h.k);
        if harmonics.windows(2).any(|w| w[0].k == w[1].k) {
            return Err(Error::InvalidLifting("duplicate harmonic frequency".into()));
        }
        Ok(Self { c0, r, harmonics })
    }

    /// The identity lifting x ↦ x.
    pub fn identity(r: u32) -> Self {
        Self {
            c0: 0.0,
            r,
            harmonics: Vec::new(),
        }
    }

    /// Rigid translation x ↦ x + c0.
    pub fn rotation(c0: f64, r: u32) -> Self {
        Self {
            c0,
            r,
            harmonics: Vec::new(),
        }
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    /// The lifting F + k (same harmonics, offset shifted by k).
    pub fn shifted(&self, k: f64) -> Self {
        Self {
            c0: self.c0 + k,
            r: self.r,
            harmonics: self.harmonics.clone(),
        }
    }

    /// F(x) = x + c0 + Σ (s_k sin(2πkx) + c_k cos(2πkx)).
    pub fn eval(&self, x: f64) -> f64 {
        let mut y = x + self.c0;
        for h in &self.harmonics {
            let (s, c) = (TAU * h.k as f64 * x).sin_cos();
            y += h.sin * s + h.cos * c;
        }
        y
    }

    /// Exact analytic derivative of the given order; order 0 is `eval`.
    pub fn eval_derivative(&self, x: f64, order: u32) -> Result<f64> {
        if order > self.r {
            return Err(Error::OrderOutOfRange { order, r: self.r });
        }
        Ok(self.deriv_unchecked(x, order))
    }

    /// Derivative of any order without the r check; liftings are analytic, the
    /// public bound only guards the metric contract.
    pub(crate) fn deriv_unchecked(&self, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        let mut y = if order == 1 { 1.0 } else { 0.0 };
        for h in &self.harmonics {
            let omega = TAU * h.k as f64;
            // each differentiation maps (s, c) -> (-omega c, omega s)
            let (mut s, mut c) = (h.sin, h.cos);
            for _ in 0..order {
                let ns = -omega * c;
                let nc = omega * s;
                s = ns;
                c = nc;
            }
            let (sv, cv) = (omega * x).sin_cos();
            y += s * sv + c * cv;
        }
        y
    }

    /// First derivative, used in hot loops.
    pub(crate) fn deriv1(&self, x: f64) -> f64 {
        let mut y = 1.0;
        for h in &self.harmonics {
            let omega = TAU * h.k as f64;
            let (s, c) = (omega * x).sin_cos();
            y += omega * (h.sin * c - h.cos * s);
        }
        y
    }

    /// n-fold composition F∘…∘F.
    pub fn iterate(&self, x: f64, n: u64) -> f64 {
        let mut y = x;
        for _ in 0..n {
            y = self.eval(y);
        }
        y
    }

    /// F(x) mod 1, in [0, 1).
    pub fn project_circle(&self, x: f64) -> f64 {
        let y = self.eval(x).rem_euclid(1.0);
        // rem_euclid can return exactly 1.0 when the argument is a tiny negative
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    }

    /// Σ (2πk)^order (|s_k| + |c_k|): a sup bound on the order-th derivative of
    /// the periodic part.
    pub fn periodic_derivative_bound(&self, order: u32) -> f64 {
        self.harmonics
            .iter()
            .map(|h| (TAU * h.k as f64).powi(order as i32) * (h.sin.abs() + h.cos.abs()))
            .sum()
    }

    /// Range of the displacement F(x) − x over a grid (min, max). A fixed point
    /// on the circle exists for branch m iff min ≤ m ≤ max.
    pub fn displacement_range(&self, grid_points: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..grid_points.max(2) {
            let x = j as f64 / grid_points.max(2) as f64;
            let d = self.eval(x) - x;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (lo, hi)
    }

    /// Rigorous certificate that F' > 0 on the circle.
    ///
    /// Short-circuits on the sufficient coefficient bound Σ 2πk (|s_k|+|c_k|) < 1;
    /// otherwise takes the grid minimum of F' minus the Lipschitz slack
    /// (h/2)·Σ (2πk)² (|s_k|+|c_k|).
    pub fn validate_diffeo(&self, grid_points: usize) -> DiffeoCertificate {
        let lip1 = self.periodic_derivative_bound(1);
        if lip1 < 1.0 {
            return DiffeoCertificate {
                is_diffeo: true,
                min_derivative: 1.0 - lip1,
                method: CertificateMethod::CoefficientBound,
            };
        }
        let n = grid_points.max(2);
        let h = 1.0 / n as f64;
        let slack = 0.5 * h * self.periodic_derivative_bound(2);
        let mut grid_min = f64::INFINITY;
        for j in 0..n {
            grid_min = grid_min.min(self.deriv1(j as f64 * h));
        }
        let bound = grid_min - slack;
        DiffeoCertificate {
            is_diffeo: bound > 0.0,
            min_derivative: bound,
            method: CertificateMethod::GridPlusLipschitz,
        }
    }

    /// Affine combination Σ aᵢ Fᵢ, coefficient-wise; missing harmonics count as
    /// zero. The aᵢ must sum to 1 so the result stays degree-1, and all inputs
    /// must share r.
    pub fn affine_combination(terms: &[(f64, &Lifting)]) -> Result<Lifting> {
        let first = terms
            .first()
            .expect("affine combination needs at least one term");
        let r = first.1.r;
        debug_assert!(
            (terms.iter().map(|(a, _)| a).sum::<f64>() - 1.0).abs() < 1e-6,
            "affine combination coefficients must sum to 1"
        );
        let mut c0 = 0.0;
        let mut freqs: Vec<u32> = Vec::new();
        for (_, w) in terms {
            if w.r != r {
                return Err(Error::RegularityMismatch(r, w.r));
            }
            for h in &w.harmonics {
                if !freqs.contains(&h.k) {
                    freqs.push(h.k);
                }
            }
        }
        freqs.sort_unstable();
        let mut harmonics: Vec<Harmonic> = freqs
            .iter()
            .map(|&k| Harmonic {
                k,
                sin: 0.0,
                cos: 0.0,
            })
            .collect();
        for (a, w) in terms {
            c0 += a * w.c0;
            for h in &w.harmonics {
                let slot = harmonics.iter_mut().find(|t| t.k == h.k).unwrap();
                slot.sin += a * h.sin;
                slot.cos += a * h.cos;
            }
        }
        Ok(Lifting { c0, r, harmonics })
    }

    /// Coefficient-wise comparison within an absolute tolerance.
    pub fn approx_eq(&self, other: &Lifting, tol: f64) -> bool {
        if (self.c0 - other.c0).abs() > tol {
            return false;
        }
        let keys: Vec<u32> = {
            let mut ks: Vec<u32> = self
                .harmonics
                .iter()
                .chain(other.harmonics.iter())
                .map(|h| h.k)
                .collect();
            ks.sort_unstable();
            ks.dedup();
            ks
        };
        let coeff = |l: &Lifting, k: u32| -> (f64, f64) {
            l.harmonics
                .iter()
                .find(|h| h.k == k)
                .map_or((0.0, 0.0), |h| (h.sin, h.cos))
        };
        keys.iter().all(|&k| {
            let (s1, c1) = coeff(self, k);
            let (s2, c2) = coeff(other, k);
            (s1 - s2).abs() <= tol && (c1 - c2).abs() <= tol
        })
    }
}

/// Bound method recorded in a [`DiffeoCertificate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMethod {
    GridPlusLipschitz,
    CoefficientBound,
}

/// Rigorous lower-bound certificate for F' on the circle.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DiffeoCertificate {
    pub is_diffeo: bool,
    pub min_derivative: f64,
    pub method: CertificateMethod,
}

/// Truncated C^r distance Σ_{i=0}^{r} max_grid |F⁽ⁱ⁾ − G⁽ⁱ⁾|: a lower bound on
/// the true metric that converges as the grid refines.
pub fn cr_metric(f: &Lifting, g: &Lifting, grid_points: usize) -> Result<f64> {
    if f.r != g.r {
        return Err(Error::RegularityMismatch(f.r, g.r));
    }
    let n = grid_points.max(2);
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    for order in 0..=f.r {
        let mut sup = 0.0f64;
        for j in 0..n {
            let x = j as f64 * h;
            sup = sup.max((f.deriv_unchecked(x, order) - g.deriv_unchecked(x, order)).abs());
        }
        total += sup;
    }
    Ok(total)
}

/// Grid minimum of `g` over the circle minus the first-order Lipschitz slack
/// (h/2)·`lipschitz`. Rigorous whenever `lipschitz` bounds sup |g'|.
pub(crate) fn certified_min_on_circle<G: Fn(f64) -> f64>(
    g: G,
    lipschitz: f64,
    grid_points: usize,
) -> f64 {
    let n = grid_points.max(2);
    let h = 1.0 / n as f64;
    let mut grid_min = f64::INFINITY;
    for j in 0..n {
        grid_min = grid_min.min(g(j as f64 * h));
    }
    grid_min - 0.5 * h * lipschitz
}

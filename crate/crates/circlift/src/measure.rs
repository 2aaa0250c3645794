//! Constructive measure machinery: the countable convex convolution (CCC)
//! coefficients with their Euler-product limit sin(1), and the grid
//! push-forward measure on box unions with its reflection scaling law.
//!
//! With λₙ = 1/(π²n²) the partial products pₙ = Π (1−λₙ) converge to sin(1)
//! by Euler's sine product, and the infinite reflection composition collapses
//! to the convex combination sin(1)·w₁ + Σ sin(1)(λⱼ/pⱼ)·w_{j+1}.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifting::Lifting;

/// Truncated CCC coefficient data.
#[derive(Clone, Debug, Serialize)]
pub struct CccCoefficients {
    pub n_terms: usize,
    /// λ₁ … λ_{n_terms}, λᵢ = 1/(π²i²).
    pub lambdas: Vec<f64>,
    /// p₁ … p_{n_terms}, pₙ = Π_{i≤n} (1−λᵢ); strictly decreasing to sin(1).
    pub partial_products: Vec<f64>,
    /// Weights of w₁, w₂, …: sin(1), then sin(1)·λⱼ/pⱼ for j ≥ 1.
    pub coefficients: Vec<f64>,
}

impl CccCoefficients {
    /// Gap of the deepest partial product to the sin(1) limit.
    pub fn euler_gap(&self) -> f64 {
        self.partial_products.last().copied().unwrap_or(1.0) - 1f64.sin()
    }

    /// Σ coefficients; at n terms this telescopes to sin(1)/p_{n−1} ≤ 1.
    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }
}

/// λᵢ, pₙ, and the limit-scaled coefficient sequence for the first n_terms
/// witnesses.
pub fn ccc_coefficients(n_terms: usize) -> CccCoefficients {
    let n = n_terms.max(1);
    let mut lambdas = Vec::with_capacity(n);
    let mut partial_products = Vec::with_capacity(n);
    let mut p = 1.0;
    for i in 1..=n {
        let lambda = 1.0 / (PI * PI * (i * i) as f64);
        p *= 1.0 - lambda;
        lambdas.push(lambda);
        partial_products.push(p);
    }
    let sin1 = 1f64.sin();
    let mut coefficients = Vec::with_capacity(n);
    coefficients.push(sin1);
    for j in 1..n {
        coefficients.push(sin1 * lambdas[j - 1] / partial_products[j - 1]);
    }
    CccCoefficients {
        n_terms: n,
        lambdas,
        partial_products,
        coefficients,
    }
}

/// Truncated convex combination Σ cⱼ w_{j+1}, renormalized by the coefficient
/// sum so the output is an exact convex combination. The renormalization
/// cancels the sin(1) scaling, so the result equals the literal reflection
/// composition ψ_{λ_{n−1},wₙ} ∘ … ∘ ψ_{λ₁,w₂}(w₁).
pub fn ccc_apply(coeffs: &CccCoefficients, ws: &[Lifting]) -> Result<Lifting> {
    if ws.len() != coeffs.n_terms {
        return Err(Error::LengthMismatch(coeffs.coefficients.len(), ws.len()));
    }
    let total = coeffs.coefficient_sum();
    let pairs: Vec<(f64, &Lifting)> = coeffs
        .coefficients
        .iter()
        .zip(ws)
        .map(|(c, w)| (c / total, w))
        .collect();
    Lifting::affine_combination(&pairs)
}

/// One closed interval of a box, JSON `{"lo": …, "hi": …}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Side {
    pub lo: f64,
    pub hi: f64,
}

/// A finite union of pairwise interior-disjoint axis-aligned boxes in R^dim.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawBoxUnion")]
pub struct BoxUnion {
    dim: usize,
    boxes: Vec<Vec<Side>>,
}

#[derive(Deserialize)]
struct RawBoxUnion {
    dim: usize,
    boxes: Vec<Vec<Side>>,
}

impl TryFrom<RawBoxUnion> for BoxUnion {
    type Error = Error;

    fn try_from(raw: RawBoxUnion) -> Result<Self> {
        BoxUnion::new(raw.dim, raw.boxes)
    }
}

impl BoxUnion {
    pub fn new(dim: usize, boxes: Vec<Vec<Side>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBoxUnion("dimension must be positive".into()));
        }
        for (i, b) in boxes.iter().enumerate() {
            if b.len() != dim {
                return Err(Error::InvalidBoxUnion(format!(
                    "box {i} has {} coordinates, expected {dim}",
                    b.len()
                )));
            }
            for s in b {
                if !s.lo.is_finite() || !s.hi.is_finite() || s.lo > s.hi {
                    return Err(Error::InvalidBoxUnion(format!(
                        "box {i} has an invalid side [{}, {}]",
                        s.lo, s.hi
                    )));
                }
            }
        }
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let overlap = (0..dim).all(|k| {
                    boxes[i][k].lo.max(boxes[j][k].lo) < boxes[i][k].hi.min(boxes[j][k].hi)
                });
                if overlap {
                    return Err(Error::InvalidBoxUnion(format!(
                        "boxes {i} and {j} have overlapping interiors"
                    )));
                }
            }
        }
        Ok(Self { dim, boxes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[Vec<Side>] {
        &self.boxes
    }

    /// The unit cube [0,1]^dim.
    pub fn unit_cube(dim: usize) -> Self {
        Self {
            dim,
            boxes: vec![vec![Side { lo: 0.0, hi: 1.0 }; dim]],
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            boxes: Vec::new(),
        }
    }
}

/// Coordinate-wise image under the reflection v ↦ (1−λ)v + λh: each side maps
/// to [(1−λ)lo + λh_k, (1−λ)hi + λh_k], endpoints swapped when 1−λ < 0.
/// Affine maps preserve disjointness.
pub fn reflect_box_union(bu: &BoxUnion, lambda: f64, h: &[f64]) -> Result<BoxUnion> {
    if lambda == 1.0 || !lambda.is_finite() {
        return Err(Error::LambdaOne);
    }
    if h.len() != bu.dim {
        return Err(Error::LengthMismatch(h.len(), bu.dim));
    }
    let scale = 1.0 - lambda;
    let boxes = bu
        .boxes
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(k, s)| {
                    let a = scale * s.lo + lambda * h[k];
                    let b = scale * s.hi + lambda * h[k];
                    if a <= b {
                        Side { lo: a, hi: b }
                    } else {
                        Side { lo: b, hi: a }
                    }
                })
                .collect()
        })
        .collect();
    Ok(BoxUnion { dim: bu.dim, boxes })
}

/// Π over coordinates of the length of the projected union (projection of a
/// box union is a union of intervals, merged before summing). This is the
/// displayed grid functional, not the Lebesgue measure of the union itself.
pub fn product_projection_measure(bu: &BoxUnion) -> f64 {
    if bu.boxes.is_empty() {
        return 0.0;
    }
    (0..bu.dim)
        .map(|k| {
            let mut intervals: Vec<(f64, f64)> =
                bu.boxes.iter().map(|b| (b[k].lo, b[k].hi)).collect();
            intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut total = 0.0;
            let (mut lo, mut hi) = intervals[0];
            for &(a, b) in &intervals[1..] {
                if a <= hi {
                    hi = hi.max(b);
                } else {
                    total += hi - lo;
                    lo = a;
                    hi = b;
                }
            }
            total + (hi - lo)
        })
        .product()
}

/// Before/after measures under a reflection, with their ratio (NaN when the
/// union is null). The scaling law is after = |1−λ|^dim · before.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InvarianceCheck {
    pub before: f64,
    pub after: f64,
    pub ratio: f64,
}

pub fn invariance_check(bu: &BoxUnion, lambda: f64, h: &[f64]) -> Result<InvarianceCheck> {
    let before = product_projection_measure(bu);
    let after = product_projection_measure(&reflect_box_union(bu, lambda, h)?);
    let ratio = if before > 0.0 {
        after / before
    } else {
        f64::NAN
    };
    Ok(InvarianceCheck {
        before,
        after,
        ratio,
    })
}

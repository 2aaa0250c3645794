//! The reflection group acting on the convex set of liftings.
//!
//! A reflection ψ_{λ,w} sends v to (1−λ)v + λw with λ ≠ 1. Composites normalize
//! to the flat form ψ(v) = (1−δ)v + Σ aᵢ wᵢ with Σ aᵢ = δ ≠ 1, which keeps
//! application O(terms) and the fixed point closed-form (the center of mass of
//! the witnesses).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifting::Lifting;

/// A single reflection ψ_{λ,w}.
#[derive(Clone, Debug)]
pub struct Reflection {
    lambda: f64,
    witness: Lifting,
}

impl Reflection {
    pub fn new(lambda: f64, witness: Lifting) -> Result<Self> {
        if lambda == 1.0 || !lambda.is_finite() {
            return Err(Error::LambdaOne);
        }
        Ok(Self { lambda, witness })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn witness(&self) -> &Lifting {
        &self.witness
    }

    /// ψ_{λ,w}(v) = (1−λ)v + λw.
    pub fn apply(&self, v: &Lifting) -> Result<Lifting> {
        Lifting::affine_combination(&[(1.0 - self.lambda, v), (self.lambda, &self.witness)])
    }

    /// ψ_{λ,w}⁻¹ = ψ_{λ/(λ−1),w}; the identity (λ = 0) is its own inverse.
    pub fn inverse(&self) -> Reflection {
        if self.lambda == 0.0 {
            return self.clone();
        }
        Reflection {
            lambda: self.lambda / (self.lambda - 1.0),
            witness: self.witness.clone(),
        }
    }

    fn term(&self) -> Term {
        Term {
            a: self.lambda,
            w: self.witness.clone(),
        }
    }
}

/// One weighted witness of a group element, JSON `{"a": number, "w": <Lifting>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Term {
    pub a: f64,
    pub w: Lifting,
}

/// Normal form of a finite reflection composite: v ↦ (1−δ)v + Σ aᵢ wᵢ.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGroupElement")]
pub struct GroupElement {
    delta: f64,
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawGroupElement {
    delta: f64,
    #[serde(default)]
    terms: Vec<Term>,
}

impl TryFrom<RawGroupElement> for GroupElement {
    type Error = Error;

    fn try_from(raw: RawGroupElement) -> Result<Self> {
        GroupElement::new(raw.delta, raw.terms)
    }
}

impl GroupElement {
    /// Validates δ ≠ 1 and Σ aᵢ = δ (to 1e−12, scale-relative).
    pub fn new(delta: f64, terms: Vec<Term>) -> Result<Self> {
        if delta == 1.0 || !delta.is_finite() {
            return Err(Error::InvalidGroupElement(
                "delta must differ from 1".into(),
            ));
        }
        let sum: f64 = terms.iter().map(|t| t.a).sum();
        if (sum - delta).abs() > 1e-12 * delta.abs().max(1.0) {
            return Err(Error::InvalidGroupElement(format!(
                "term weights sum to {sum}, expected delta = {delta}"
            )));
        }
        Ok(Self { delta, terms })
    }

    /// The identity element (δ = 0, no witnesses).
    pub fn identity() -> Self {
        Self {
            delta: 0.0,
            terms: Vec::new(),
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.delta == 0.0 && self.terms.is_empty()
    }

    /// ψ(v) = (1−δ)v + Σ aᵢ wᵢ.
    pub fn apply(&self, v: &Lifting) -> Result<Lifting> {
        let mut pairs: Vec<(f64, &Lifting)> = vec![(1.0 - self.delta, v)];
        pairs.extend(self.terms.iter().map(|t| (t.a, &t.w)));
        Lifting::affine_combination(&pairs)
    }

    /// self ∘ other in the flat normal form: δ ← δ₁ + δ₂ − δ₁δ₂ and the inner
    /// element's weights pick up the factor (1−δ₁).
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let delta = self.delta + other.delta - self.delta * other.delta;
        if delta == 1.0 {
            return Err(Error::DegenerateComposition);
        }
        let mut terms: Vec<Term> = other
            .terms
            .iter()
            .map(|t| Term {
                a: (1.0 - self.delta) * t.a,
                w: t.w.clone(),
            })
            .collect();
        terms.extend(self.terms.iter().cloned());
        Ok(GroupElement { delta, terms })
    }

    /// The unique fixed point (1/δ) Σ aᵢ wᵢ of a non-identity element.
    pub fn fixed_point(&self) -> Result<Lifting> {
        if self.delta == 0.0 {
            return Err(Error::IdentityHasAllFixedPoints);
        }
        let pairs: Vec<(f64, &Lifting)> = self
            .terms
            .iter()
            .map(|t| (t.a / self.delta, &t.w))
            .collect();
        Lifting::affine_combination(&pairs)
    }

    /// Collapses the element to the single equivalent reflection
    /// ψ_{δ, (1/δ)Σaᵢwᵢ}. Fails for δ = 0 composites, which are the identity
    /// only when the weighted witnesses cancel.
    pub fn as_reflection(&self) -> Result<Reflection> {
        let witness = self.fixed_point()?;
        Reflection::new(self.delta, witness)
    }

    /// G₀ membership: every witness is a certified diffeomorphism lifting.
    pub fn is_conditional(&self, grid_points: usize) -> bool {
        self.terms
            .iter()
            .all(|t| t.w.validate_diffeo(grid_points).is_diffeo)
    }
}

impl From<&Reflection> for GroupElement {
    fn from(r: &Reflection) -> Self {
        if r.lambda == 0.0 {
            GroupElement::identity()
        } else {
            GroupElement {
                delta: r.lambda,
                terms: vec![r.term()],
            }
        }
    }
}

/// ψ_{λ,w} ∘ ψ_{σ,u}: δ = λ + σ − λσ, terms [(δ−λ, u), (λ, w)].
pub fn compose(g: &Reflection, h: &Reflection) -> Result<GroupElement> {
    let delta = g.lambda + h.lambda - g.lambda * h.lambda;
    if delta == 1.0 {
        return Err(Error::DegenerateComposition);
    }
    Ok(GroupElement {
        delta,
        terms: vec![
            Term {
                a: delta - g.lambda,
                w: h.witness.clone(),
            },
            Term {
                a: g.lambda,
                w: g.witness.clone(),
            },
        ],
    })
}

/// Left-to-right composition fold: the first reflection is outermost (applied
/// last). Errors if any running δ hits 1.
pub fn compose_many(gs: &[Reflection]) -> Result<GroupElement> {
    let mut iter = gs.iter();
    let first = iter.next().ok_or(Error::EmptyComposition)?;
    let mut acc = GroupElement::from(first);
    for r in iter {
        acc = acc.compose(&GroupElement::from(r))?;
    }
    Ok(acc)
}

/// The reflection ψ_{λ,w} with w = (1/λ)v_to + (1 − 1/λ)v_from, which maps
/// v_from to v_to.
pub fn solve_transitivity(v_from: &Lifting, v_to: &Lifting, lambda: f64) -> Result<Reflection> {
    if lambda == 0.0 || lambda == 1.0 || !lambda.is_finite() {
        return Err(Error::SingularTransitivity(lambda));
    }
    let witness =
        Lifting::affine_combination(&[(1.0 / lambda, v_to), (1.0 - 1.0 / lambda, v_from)])?;
    Reflection::new(lambda, witness)
}

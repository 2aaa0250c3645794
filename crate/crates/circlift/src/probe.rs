//! One-parameter probe paths α_λ = (1−λ)F + λG.
//!
//! Type I probes translate: G = F + k, so α_λ = F + λk stays a diffeomorphism
//! lifting for every real λ. Type II probes pair two liftings with a certified
//! gap σ = min |G − F| > 0 and carry the maximal λ-interval (a, b) ⊃ [0, 1] on
//! which α_λ keeps a positive derivative.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lifting::{certified_min_on_circle, Lifting, DEFAULT_GRID};

/// Default λ clamp for scans over unbounded domains.
pub const DEFAULT_LAMBDA_WINDOW: (f64, f64) = (-10.0, 10.0);

/// Probe flavor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeKind {
    /// G = F + k with k ∈ (0, 1].
    TypeI { k: f64 },
    /// Arbitrary pair with min |G − F| = σ > 0.
    TypeII,
}

/// λ-interval on which the path stays inside the diffeomorphism liftings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaDomain {
    /// Every real λ works (translation paths).
    Unbounded,
    /// Maximal open interval (a, b) ⊃ [0, 1].
    Bounded { a: f64, b: f64 },
}

impl LambdaDomain {
    pub fn contains(&self, lambda: f64) -> bool {
        match *self {
            LambdaDomain::Unbounded => lambda.is_finite(),
            LambdaDomain::Bounded { a, b } => lambda > a && lambda < b,
        }
    }

    pub fn as_bounded(&self) -> Option<(f64, f64)> {
        match *self {
            LambdaDomain::Unbounded => None,
            LambdaDomain::Bounded { a, b } => Some((a, b)),
        }
    }

    /// Intersection with a finite fallback window.
    pub fn clamped(&self, window: (f64, f64)) -> (f64, f64) {
        match *self {
            LambdaDomain::Unbounded => window,
            LambdaDomain::Bounded { a, b } => (a.max(window.0), b.min(window.1)),
        }
    }
}

/// A probe path with its certified gap and λ-domain.
#[derive(Clone, Debug)]
pub struct Probe {
    f: Lifting,
    g: Lifting,
    kind: ProbeKind,
    sigma: f64,
    domain: LambdaDomain,
}

impl Probe {
    /// Type I probe: α_λ = F + λk. Requires k ∈ (0, 1] and F certified.
    pub fn type_i(f: Lifting, k: f64) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::InvalidShift(k));
        }
        let cert = f.validate_diffeo(DEFAULT_GRID);
        if !cert.is_diffeo {
            return Err(Error::NotADiffeo(cert.min_derivative));
        }
        let g = f.shifted(k);
        Ok(Self {
            f,
            g,
            kind: ProbeKind::TypeI { k },
            sigma: k,
            domain: LambdaDomain::Unbounded,
        })
    }

    /// Type II probe with the default certification grid.
    pub fn type_ii(f: Lifting, g: Lifting) -> Result<Self> {
        Self::type_ii_with_grid(f, g, DEFAULT_GRID)
    }

    /// Type II probe: both endpoints must be certified diffeomorphisms and the
    /// certified σ = min |G − F| must be positive.
    pub fn type_ii_with_grid(f: Lifting, g: Lifting, grid_points: usize) -> Result<Self> {
        if f.r() != g.r() {
            return Err(Error::RegularityMismatch(f.r(), g.r()));
        }
        let cf = f.validate_diffeo(grid_points);
        if !cf.is_diffeo {
            return Err(Error::NotADiffeo(cf.min_derivative));
        }
        let cg = g.validate_diffeo(grid_points);
        if !cg.is_diffeo {
            return Err(Error::NotADiffeo(cg.min_derivative));
        }
        let sigma = sigma_of(&f, &g, grid_points);
        if sigma <= 0.0 {
            return Err(Error::SigmaZero(sigma));
        }
        let domain = compute_domain(&f, &g, grid_points)?;
        Ok(Self {
            f,
            g,
            kind: ProbeKind::TypeII,
            sigma,
            domain,
        })
    }

    pub fn f(&self) -> &Lifting {
        &self.f
    }

    pub fn g(&self) -> &Lifting {
        &self.g
    }

    pub fn kind(&self) -> ProbeKind {
        self.kind
    }

    /// Certified lower bound on min |G − F| (exact k for Type I).
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Domain certified at construction time.
    pub fn domain(&self) -> LambdaDomain {
        self.domain
    }

    /// α_λ as a lifting. For Type I this is F with c0 shifted by λk, keeping
    /// the harmonic coefficients bit-identical.
    pub fn alpha_at(&self, lambda: f64) -> Lifting {
        match self.kind {
            ProbeKind::TypeI { k } => self.f.shifted(lambda * k),
            ProbeKind::TypeII => {
                Lifting::affine_combination(&[(1.0 - lambda, &self.f), (lambda, &self.g)])
                    .expect("probe endpoints share regularity")
            }
        }
    }

    /// Recomputes the maximal λ-interval at the given grid.
    pub fn domain_interval(&self, grid_points: usize) -> Result<LambdaDomain> {
        match self.kind {
            ProbeKind::TypeI { .. } => Ok(LambdaDomain::Unbounded),
            ProbeKind::TypeII => compute_domain(&self.f, &self.g, grid_points),
        }
    }

    /// Graph samples of α_λ for each requested λ, flagged by certification.
    pub fn foliation_samples(&self, lambdas: &[f64], grid_points: usize) -> Vec<FoliationSample> {
        let n = grid_points.max(2);
        lambdas
            .iter()
            .map(|&lambda| {
                let alpha = self.alpha_at(lambda);
                let in_h0 = alpha.validate_diffeo(n).is_diffeo;
                let samples = (0..n)
                    .map(|j| {
                        let x = j as f64 / n as f64;
                        (x, alpha.eval(x))
                    })
                    .collect();
                FoliationSample {
                    lambda,
                    in_h0,
                    samples,
                }
            })
            .collect()
    }

    /// Resolves a solve window: a requested window must sit inside the domain;
    /// otherwise the domain itself, clamped to the default window when unbounded.
    pub fn solve_window(&self, requested: Option<(f64, f64)>) -> Result<(f64, f64)> {
        match requested {
            Some((lo, hi)) => {
                if lo >= hi || !self.domain.contains(lo) || !self.domain.contains(hi) {
                    return Err(Error::WindowOutsideDomain { lo, hi });
                }
                Ok((lo, hi))
            }
            None => Ok(self.domain.clamped(DEFAULT_LAMBDA_WINDOW)),
        }
    }

    // Hot-loop evaluations that avoid building intermediate liftings.

    pub(crate) fn alpha_eval(&self, lambda: f64, x: f64) -> f64 {
        match self.kind {
            ProbeKind::TypeI { k } => self.f.eval(x) + lambda * k,
            ProbeKind::TypeII => (1.0 - lambda) * self.f.eval(x) + lambda * self.g.eval(x),
        }
    }

    pub(crate) fn alpha_deriv1(&self, lambda: f64, x: f64) -> f64 {
        match self.kind {
            ProbeKind::TypeI { .. } => self.f.deriv1(x),
            ProbeKind::TypeII => (1.0 - lambda) * self.f.deriv1(x) + lambda * self.g.deriv1(x),
        }
    }

    /// (G − F)(x); constant k for Type I.
    pub(crate) fn difference_at(&self, x: f64) -> f64 {
        match self.kind {
            ProbeKind::TypeI { k } => k,
            ProbeKind::TypeII => self.g.eval(x) - self.f.eval(x),
        }
    }

    pub(crate) fn alpha_iterate(&self, lambda: f64, x: f64, n: u64) -> f64 {
        let mut y = x;
        for _ in 0..n {
            y = self.alpha_eval(lambda, y);
        }
        y
    }
}

/// Graph of α_λ on a uniform grid, flagged by whether α_λ is certified in ℋ₀.
#[derive(Clone, Debug, Serialize)]
pub struct FoliationSample {
    pub lambda: f64,
    pub in_h0: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Certified lower bound for min_x |G(x) − F(x)|: grid minimum minus the
/// Lipschitz slack of (G − F). Returns 0 when the bound is non-positive.
/// The difference is evaluated from its own coefficients, so exactly-equal
/// harmonics cancel without rounding.
pub fn sigma_of(f: &Lifting, g: &Lifting, grid_points: usize) -> f64 {
    let diff = Difference::new(f, g);
    let lipschitz = diff.coeff_bound(1);
    let certified = certified_min_on_circle(|x| diff.eval(x).abs(), lipschitz, grid_points);
    certified.max(0.0)
}

/// The 1-periodic difference (G − F)(x) = Δc0 + Σ (Δs_k sin + Δc_k cos).
struct Difference {
    dc0: f64,
    harmonics: Vec<(f64, f64, f64)>, // (ω = 2πk, Δs, Δc)
}

impl Difference {
    fn new(f: &Lifting, g: &Lifting) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let mut keys: Vec<u32> = f
            .harmonics()
            .iter()
            .chain(g.harmonics().iter())
            .map(|h| h.k)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let coeff = |l: &Lifting, k: u32| {
            l.harmonics()
                .iter()
                .find(|h| h.k == k)
                .map_or((0.0, 0.0), |h| (h.sin, h.cos))
        };
        let harmonics = keys
            .iter()
            .map(|&k| {
                let (sf, cf) = coeff(f, k);
                let (sg, cg) = coeff(g, k);
                (tau * k as f64, sg - sf, cg - cf)
            })
            .filter(|(_, ds, dc)| *ds != 0.0 || *dc != 0.0)
            .collect();
        Self {
            dc0: g.c0() - f.c0(),
            harmonics,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let mut y = self.dc0;
        for &(omega, ds, dc) in &self.harmonics {
            let (s, c) = (omega * x).sin_cos();
            y += ds * s + dc * c;
        }
        y
    }

    /// Σ ω^order (|Δs| + |Δc|).
    fn coeff_bound(&self, order: u32) -> f64 {
        self.harmonics
            .iter()
            .map(|&(omega, ds, dc)| omega.powi(order as i32) * (ds.abs() + dc.abs()))
            .sum()
    }
}

/// Maximal λ-interval with min_x α_λ'(x) > 0, containing [0, 1].
///
/// α_λ'(x) = F'(x) + λ(G' − F')(x) is affine in λ, so each grid point
/// contributes a closed-form half-line of feasible λ. A first pass intersects
/// the raw constraints; a second pass repeats them against a curvature slack
/// M·h²/8 (M bounding |∂²_x α_λ'| over the first-pass interval), which makes
/// the endpoint-only constraints rigorous between grid points.
fn compute_domain(f: &Lifting, g: &Lifting, grid_points: usize) -> Result<LambdaDomain> {
    let diff = Difference::new(f, g);
    if diff.coeff_bound(1) == 0.0 {
        // pure translation difference: derivative independent of λ
        return Ok(LambdaDomain::Unbounded);
    }
    let n = grid_points.max(2);
    let h = 1.0 / n as f64;

    let pass = |slack: f64| -> Option<(f64, f64)> {
        let mut a = f64::NEG_INFINITY;
        let mut b = f64::INFINITY;
        for j in 0..n {
            let x = j as f64 * h;
            let fp = f.deriv1(x);
            let d = g.deriv1(x) - fp;
            if d == 0.0 {
                if fp <= slack {
                    return None;
                }
            } else if d > 0.0 {
                a = a.max((slack - fp) / d);
            } else {
                b = b.min((slack - fp) / d);
            }
        }
        (a < b).then_some((a, b))
    };

    let (a0, b0) = pass(0.0).ok_or(Error::NotADiffeoPath)?;
    if !(a0 < 0.0 && b0 > 0.0) {
        return Err(Error::NotADiffeoPath);
    }
    let lambda_mag = a0.abs().max(b0.abs());
    let curvature = f.periodic_derivative_bound(3) + lambda_mag * diff.coeff_bound(3);
    let slack = curvature * h * h / 8.0;
    let (a, b) = pass(slack).ok_or(Error::NotADiffeoPath)?;
    if !(a < 0.0 && b > 0.0) {
        return Err(Error::NotADiffeoPath);
    }
    Ok(LambdaDomain::Bounded { a, b })
}

// JSON schema: {"F": <Lifting>, "kind": "I"|"II", "k": number, "G": <Lifting>}

/// Unvalidated probe file contents; [`ProbeSpec::build`] runs the full
/// certification, keeping schema problems separable from semantic failures.
#[derive(Debug, Deserialize)]
pub struct ProbeSpec {
    #[serde(rename = "F")]
    pub f: Lifting,
    pub kind: String,
    #[serde(default)]
    pub k: Option<f64>,
    #[serde(rename = "G", default)]
    pub g: Option<Lifting>,
}

impl ProbeSpec {
    pub fn build(self) -> Result<Probe> {
        match self.kind.as_str() {
            "I" => {
                let k = self
                    .k
                    .ok_or_else(|| Error::InvalidLifting("Type I probe requires \"k\"".into()))?;
                Probe::type_i(self.f, k)
            }
            "II" => {
                let g = self
                    .g
                    .ok_or_else(|| Error::InvalidLifting("Type II probe requires \"G\"".into()))?;
                Probe::type_ii(self.f, g)
            }
            other => Err(Error::InvalidLifting(format!(
                "unknown probe kind {other:?}"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for Probe {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let spec = ProbeSpec::deserialize(deserializer)?;
        spec.build().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Probe {
    fn serialize<S>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error>
    where
        S: Serializer,
    {
        match self.kind {
            ProbeKind::TypeI { k } => {
                let mut st = serializer.serialize_struct("Probe", 3)?;
                st.serialize_field("F", &self.f)?;
                st.serialize_field("kind", "I")?;
                st.serialize_field("k", &k)?;
                st.end()
            }
            ProbeKind::TypeII => {
                let mut st = serializer.serialize_struct("Probe", 3)?;
                st.serialize_field("F", &self.f)?;
                st.serialize_field("kind", "II")?;
                st.serialize_field("G", &self.g)?;
                st.end()
            }
        }
    }
}

//! circlift — a toolkit for liftings of circle diffeomorphisms.
//!
//! The library represents degree-1 liftings F(x) = x + c0 + Σ (s_k sin 2πkx +
//! c_k cos 2πkx) and builds, on top of them:
//!
//! - the reflection group ψ_{λ,w}(v) = (1−λ)v + λw with its composition
//!   algebra, inverses, fixed points and transitivity solver ([`reflection`]);
//! - one-parameter probe paths α_λ = (1−λ)F + λG of Type I (G = F + k) and
//!   Type II (min |G − F| = σ > 0), with certified λ-domains ([`probe`]);
//! - the n-evaluation map Δₙ: the parameter at which a point is n-periodic,
//!   its derivative, and degenerate-parameter detection ([`evaluation`]);
//! - rotation numbers with rigorous error bounds, continued-fraction
//!   convergents and the (*)_β Diophantine test ([`rotation`]);
//! - a quantitative Kupka-Smale estimator comparing the measure of
//!   near-degenerate parameter sets against the bound cₙγ/σ ([`qks`]);
//! - the countable-convex-convolution coefficients with their Euler-product
//!   limit sin(1), and a grid push-forward measure on box unions with its
//!   reflection scaling law ([`measure`]).
//!
//! Every operation is pure and deterministic; values are immutable after
//! construction and safe to share across threads. The `examples/` directory
//! has one runnable example per capability, and the thin `circlift` binary
//! exposes the same operations as subcommands.

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod lifting;
pub mod measure;
pub mod probe;
pub mod qks;
pub mod reflection;
pub mod rotation;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use evaluation::{
    critical_points, eval_map_derivative, eval_map_solve, orbit_derivative_lambda,
    orbit_derivative_x, EvaluationPoint,
};
pub use lifting::{
    cr_metric, CertificateMethod, DiffeoCertificate, Harmonic, Lifting, DEFAULT_GRID,
};
pub use measure::{
    ccc_apply, ccc_coefficients, invariance_check, product_projection_measure, reflect_box_union,
    BoxUnion, CccCoefficients, Side,
};
pub use probe::{sigma_of, FoliationSample, LambdaDomain, Probe, ProbeKind, ProbeSpec};
pub use qks::{
    default_merge_gap, feasible_branches, measure_z, qks_report, scan_e_gamma, HyperbolicityScan,
    MeasureEstimate, QksReport, QksRow,
};
pub use reflection::{compose, compose_many, solve_transitivity, GroupElement, Reflection, Term};
pub use rotation::{
    certify_rational, check_star_beta, check_star_beta_with_threshold, convergents,
    rotation_number, Convergent, DiophantineReport, PeriodicOrbitCertificate, RotationEstimate,
};

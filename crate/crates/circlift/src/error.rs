use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lifting: {0}")]
    InvalidLifting(String),

    #[error("derivative order {order} exceeds the stored regularity r = {r}")]
    OrderOutOfRange { order: u32, r: u32 },

    #[error("regularity mismatch: r = {0} vs r = {1}")]
    RegularityMismatch(u32, u32),

    #[error("reflection parameter lambda must differ from 1")]
    LambdaOne,

    #[error("transitivity solver needs lambda outside {{0, 1}}, got {0}")]
    SingularTransitivity(f64),

    #[error("degenerate composition: running delta reached 1, leaving the group")]
    DegenerateComposition,

    #[error("cannot compose an empty reflection list")]
    EmptyComposition,

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("the identity fixes every lifting; no unique fixed point")]
    IdentityHasAllFixedPoints,

    #[error("map is not a certified diffeomorphism (certified min derivative {0})")]
    NotADiffeo(f64),

    #[error("path leaves the diffeomorphism set already at lambda = 0")]
    NotADiffeoPath,

    #[error("certified sigma is not positive ({0}); Type II probes need min |G - F| > 0")]
    SigmaZero(f64),

    #[error("probe kind parameter k must lie in (0, 1], got {0}")]
    InvalidShift(f64),

    #[error("lambda window [{lo}, {hi}] is not contained in the probe domain")]
    WindowOutsideDomain { lo: f64, hi: f64 },

    #[error("lambda-derivative vanished during an evaluation-map solve")]
    ZeroLambdaDerivative,

    #[error("beta must be positive, got {0}")]
    BetaOutOfRange(f64),

    #[error("coefficient count {0} does not match witness count {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid box union: {0}")]
    InvalidBoxUnion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A generator cannot produce the requested index.
    #[error("horizon exceeded: weight generator cannot evaluate index {0}")]
    HorizonExceeded(usize),

    /// A weight evaluated to zero (weights must be non-zero scalars).
    #[error("invalid weight: w_{0} evaluates to zero")]
    InvalidWeight(usize),

    /// An operation requiring a summable product series was called on a
    /// sequence whose series did not certify convergent.
    #[error("series sum 1/|w_1..w_n|^p not certified convergent (status {0})")]
    NotSummable(&'static str),

    /// The witness index set was empty.
    #[error("empty witness set")]
    EmptyWitnessSet,

    /// A scalar argument that must be non-zero was zero.
    #[error("scalar argument must be non-zero")]
    ZeroScalar,

    /// A discrete support contained zero.
    #[error("discrete support contains zero")]
    SupportContainsZero,

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failure: estimated error {err} above tolerance {tol} after {intervals} intervals")]
    QuadratureFailure { err: f64, tol: f64, intervals: usize },

    /// Marginal pair has no computable density ratio.
    #[error("no computable density ratio for the marginal pair")]
    NoDensity,

    /// The marginal Hellinger product did not drop below the requested level
    /// within the horizon.
    #[error("insufficient horizon: product of marginal overlaps is {product} >= {epsilon} at N = {at}")]
    InsufficientHorizon { product: f64, epsilon: f64, at: usize },

    /// Monte Carlo search found no witness time within the horizon.
    #[error("no witness time found up to horizon {0}")]
    NoWitnessFound(usize),

    /// Measure kind cannot represent the requested transform exactly.
    #[error("unsupported measure kind for this transform: {0}")]
    UnsupportedKind(&'static str),

    /// Declared smoothness class contradicts the discontinuity list.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(&'static str),

    /// One-sided slope extraction needs an explicit discontinuity list.
    #[error("profile carries no discontinuity list")]
    NoDiscontinuityList,

    /// A moment required by the operation is infinite or not computable.
    #[error("required absolute moment of order {0} is not finite")]
    InfiniteMoment(f64),

    /// Two certified verdicts contradict each other; this indicates a bug and
    /// is used as a test oracle.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Invalid experiment configuration.
    #[error("config error: {0}")]
    ConfigError(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

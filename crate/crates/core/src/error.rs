use thiserror::Error;

/// Every failure mode of the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("orbit escaped at step {step}")]
    Escaped { step: usize },
    #[error("orbit overflowed at step {step}")]
    Overflow { step: usize },
    #[error("Newton iteration did not converge after {steps} steps (residual {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },
    #[error("orbit has exact period {divisor}, a proper divisor of the requested period")]
    WrongPeriod { divisor: usize },
    #[error("trapezoid rule did not settle with {nodes} nodes (last change {change:e})")]
    NoQuadratureConvergence { nodes: usize, change: f64 },
    #[error("integrand is not finite on the contour")]
    NonFiniteIntegrand,
    #[error("a fixed point lies within {clearance:e} of the contour")]
    FixedPointOnContour { clearance: f64 },
    #[error("contour encloses {found} fixed points, expected {expected}")]
    ContourEnclosure { expected: i64, found: i64 },
    #[error("no admissible contour radius found")]
    NoAdmissibleRadius,
    #[error("multiplicity integral {value} is not near an integer")]
    RoundingAmbiguous { value: f64 },
    #[error("derivative leaves the disk where the principal logarithm is used")]
    LogBranchViolation,
    #[error("critical value already lands on the fixed point after {m} blocks")]
    NotMinimal { m: usize },
    #[error("continuation step fell below {min_step:e} at path parameter {at}")]
    ContinuationFailure { at: f64, min_step: f64 },
    #[error("Jacobian is singular")]
    SingularJacobian,
    #[error("lambda^q lies on the branch cut of the logarithm")]
    BranchCut,
    #[error("no scanned pixel next to the sublimb root is a member")]
    RootNotMember,
    #[error("point is outside the right half-plane")]
    OutOfDomain,
    #[error("{p}/{q} is not in lowest terms")]
    NotCoprime { p: i64, q: i64 },
    #[error("point sits on the pole of the Mobius map")]
    PoleHit,
    #[error("parallelogram sides are linearly dependent")]
    DegenerateParallelogram,
    #[error("no lattice quadruple passed validation")]
    SearchExhausted,
    #[error("least-squares fit is ill-conditioned ({points} usable points)")]
    IllConditionedFit { points: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

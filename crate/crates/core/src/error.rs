use thiserror::Error;

/// Errors raised by the library. The CLI maps `Parse` to a schema error and
/// everything else except `Internal`/`VerificationFailed` to a domain error.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("singular linear system")]
    SingularSystem,
    #[error("point is not on the graph")]
    PointNotOnGraph,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("zeta lies in the support of the measure")]
    ZetaInSupport,
    #[error("measure has a type I atom")]
    TypeIAtom,
    #[error("candidate point outside E")]
    CandidatesOutsideE,
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),
    #[error("fiber multiplicities do not sum to the degree")]
    FiberMultiplicityMismatch,
    #[error("iteration depth {0} exceeds the guard {1}")]
    DepthGuard(u32, u32),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero #{index} has modulus {modulus}; zeros must lie strictly inside the unit disk")]
    ZeroOnOrOutsideDisk { index: usize, modulus: f64 },
    #[error("unimodular constant has modulus {0}")]
    ConstantNotUnimodular(f64),
    #[error("point #{index} has modulus {modulus}; expected a point on the unit circle")]
    PointOffCircle { index: usize, modulus: f64 },
    #[error("point #{index} has modulus {modulus}; expected a point in the open unit disk")]
    PointOutsideDisk { index: usize, modulus: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("evaluation point coincides with the pole {pole}")]
    PoleEvaluation { pole: num_complex::Complex64 },
    #[error("level-set root finding failed (residual {0:e})")]
    RootFindingFailure(f64),
    #[error("resolvent I - zA is numerically singular (reciprocal condition {0:e})")]
    SingularResolvent(f64),
    #[error("kernel denominator 1 - z*u vanishes at the expansion center")]
    DegenerateDenominator,
    #[error("points #{0} and #{1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("point #{point}: {needed} jet entries required, {available} available")]
    InsufficientJet {
        point: usize,
        needed: usize,
        available: usize,
    },
    #[error("leading jet value has modulus {0}; cannot solve for the supplementary entry")]
    ZeroLeadingValue(f64),
    #[error("principal submatrix is not positive definite")]
    PrincipalNotPD,
    #[error("Hermitian eigensolver did not converge")]
    ConvergenceFailure,
    #[error("numerical rank {found} contradicts the expected rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

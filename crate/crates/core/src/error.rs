use thiserror::Error;

/// Errors raised by the numerical kernels, state/channel constructors and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),

    #[error("matrix is not antisymmetric (max deviation {0:.3e})")]
    NotAntisymmetric(f64),

    #[error("matrix is not orthogonal (max deviation {0:.3e})")]
    NotOrthogonal(f64),

    #[error("index {index} out of range (largest valid index {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("mode count {0} outside the supported range 1..={max}", max = crate::MAX_MODES)]
    UnsupportedModes(usize),

    #[error("invalid attenuation coefficient b[{index}] = {value}")]
    InvalidCoefficient { index: usize, value: f64 },

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("bit string has odd weight {0}")]
    OddWeight(u32),

    #[error("covariance matrix is not admissible (largest singular value {0:.12})")]
    Inadmissible(f64),

    #[error("state is not pure (largest eigenvalue {0:.12})")]
    NotPure(f64),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("vector is not normalized (norm {0:.12})")]
    NotNormalized(f64),

    #[error("majorization hypothesis violated at k = {k}: {detail}")]
    HypothesisViolated { k: usize, detail: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True when the error stems from caller-supplied values rather than a
    /// numerical failure.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::OddDimension(_)
                | Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::LengthMismatch(..)
                | Error::UnsupportedModes(_)
                | Error::InvalidCoefficient { .. }
                | Error::OutOfRange(_)
                | Error::OddWeight(_)
                | Error::InvalidConfig(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

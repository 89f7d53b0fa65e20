use thiserror::Error;

use crate::finsupp::{FinSuppVec, Index};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Variants carry enough data to be rendered as a machine-readable error
/// object by the command-line front end (see [`Error::kind`]).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("mixed scalar fields: {0} and {1}")]
    MixedFields(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("scalar {0} has no image in {1}")]
    NotRepresentable(String, String),

    #[error("vector is not in the span of the given basis (residual {residual})")]
    NotInSpan { residual: FinSuppVec },

    #[error("vectors are linearly dependent")]
    NotFree { witness: Vec<crate::finsupp::Scalar> },

    #[error("vector {position} of the subspace basis is not in the ambient span")]
    NotSubspace { position: usize },

    #[error("degree {needed} is beyond the horizon {horizon}")]
    HorizonExceeded { needed: u32, horizon: u32 },

    #[error("operation needs a finite horizon")]
    UnboundedHorizon,

    #[error("ambient index {0} cannot be decomposed over the subspace and its complement")]
    DecompositionFailed(Index),

    #[error("column {column} has degree {degree}, above the declared bound {bound}")]
    DegreeBoundViolated { column: Index, degree: u32, bound: i64 },

    #[error("operator is not injective: kernel contains {witness}")]
    NotInjective {
        witness: FinSuppVec,
        obstruction: Box<crate::duals::Functional>,
    },

    #[error("linear system is inconsistent at equation {0}")]
    InconsistentSystem(Index),

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("weak limit diverges at degrees {0:?}")]
    Divergent(Vec<Vec<u32>>),

    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cardinal arithmetic overflow")]
    CardinalOverflow,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable snake-case tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MixedFields(..) => "mixed_fields",
            Error::NotPrime(_) => "not_prime",
            Error::NotRepresentable(..) => "not_representable",
            Error::NotInSpan { .. } => "not_in_span",
            Error::NotFree { .. } => "not_free",
            Error::NotSubspace { .. } => "not_subspace",
            Error::HorizonExceeded { .. } => "horizon_exceeded",
            Error::UnboundedHorizon => "unbounded_horizon",
            Error::DecompositionFailed(_) => "decomposition_failed",
            Error::DegreeBoundViolated { .. } => "degree_bound_violated",
            Error::NotInjective { .. } => "not_injective",
            Error::InconsistentSystem(_) => "inconsistent_system",
            Error::Syntax { .. } => "syntax_error",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::Divergent(_) => "divergent",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::CardinalOverflow => "cardinal_overflow",
            Error::Invalid(_) => "invalid_input",
        }
    }
}

use std::fmt;

use thiserror::Error;

/// Which of the two vertex-lattice inclusions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexFailure {
    /// `Λ^♯ ⊄ Λ`
    DualNotContained,
    /// `πΛ ⊄ Λ^♯`
    PiMultipleNotInDual,
}

impl fmt::Display for VertexFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexFailure::DualNotContained => write!(f, "dual lattice is not contained in the lattice"),
            VertexFailure::PiMultipleNotInDual => write!(f, "pi times the lattice is not contained in the dual"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("{0} is not a unit modulo p")]
    NotUnit(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("generators do not span a full-rank lattice")]
    RankDeficient,
    #[error("variant does not match the parity of n = {0}")]
    ParityMismatch(usize),
    #[error("not a vertex lattice: {0}")]
    NotVertex(VertexFailure),
    #[error("no vertex lattice of type {t} exists in this space (maximum {max})")]
    TypeUnavailable { t: usize, max: usize },
    #[error("space was not built by standard_space")]
    NotStandard,
    #[error("search needs more than the budget of {budget} candidates")]
    SearchTooLarge { budget: u64 },
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("subspace is not defined over F_p")]
    NotRational,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("intersection chain dropped by more than one at step {step}")]
    ChainViolation { step: usize },
    #[error("Weyl group of rank {0} exceeds the supported rank 8")]
    GroupTooLarge(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("matrix rank is below the requested minor order")]
    RankDeficient,
    #[error("vector entries are not coprime")]
    NotCoprime,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("determinantal divisor is not 1")]
    DeterminantalNotOne,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("divisor {0} does not divide the corresponding modulus {1}")]
    NotADivisor(u64, u64),
    #[error("determinantal divisor shares a factor with the group order")]
    DeterminantalObstruction,
}

#[derive(Debug, Error, Clone)]
pub enum PipelineError {
    #[error("determinantal divisor is not 1")]
    DeterminantalNotOne,
    #[error("matrix is plain; reduce plain coordinates first")]
    PlainInput,
    #[error("matrix is not in (I_r|B) form")]
    NotIdentityForm,
    #[error("matrix is not simple")]
    NotSimple,
    #[error("matrix is not circular")]
    NotCircular,
    #[error("matrix has too few columns for distinct color classes")]
    TooFewColumns,
    #[error("a row of B is zero")]
    ZeroRow,
    #[error("matrix does not have the required shape")]
    WrongShape,
    #[error("representation shape does not match the extension")]
    ShapeMismatch,
    #[error("matrix is fully plain: the zero tuple is the only solution")]
    Degenerate(crate::system::PlainReport),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone)]
pub enum HypergraphError {
    #[error("enumeration size {size} exceeds budget {budget}")]
    BudgetExceeded { size: String, budget: String },
    #[error("removal set is not a subset of the edge set for color {0}")]
    NotASubsetOfEdges(usize),
    #[error("representation failed verification on this group")]
    UnverifiedRepresentation,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("solver found no witness for a verified representation: {0}")]
    InternalInconsistency(String),
}

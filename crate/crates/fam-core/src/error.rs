//! Error type shared by every module in the crate.

use thiserror::Error;

/// Failure cases surfaced by the measure, kernel, operator and solver layers.
///
/// `UndecidedLimit` is the one "soft" case: it means a filter functional was
/// asked about a set outside its decided subalgebra while integrating, and the
/// computation refuses to guess.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("ground space mismatch: expected {expected}, found {found}")]
    GroundMismatch { expected: String, found: String },

    #[error("point {point} does not belong to ground {ground}")]
    PointOutsideGround { point: String, ground: String },

    #[error("set leaf {leaf} is not valid on ground {ground}")]
    InvalidSetLeaf { leaf: String, ground: String },

    #[error("invalid tail family: {reason}")]
    InvalidTailFamily { reason: String },

    #[error("conflicting filter definitions for id {id}")]
    ConflictingFilter { id: String },

    #[error("negative coefficient {coef} in {context}")]
    NegativeCoefficient { coef: String, context: String },

    #[error("row mass {mass} exceeds 1 on piece {piece}")]
    RowMassExceedsOne { mass: String, piece: String },

    #[error("pieces do not partition the ground: {detail}")]
    PartitionViolation { detail: String },

    #[error("undecided limit along filter {filter} at piece {piece}")]
    UndecidedLimit { filter: String, piece: String },

    #[error("signed measure where a nonnegative one is required: {context}")]
    SignedMeasure { context: String },

    #[error("measure is not a probability: total mass {mass}")]
    NotProbability { mass: String },

    #[error("kernel is not markov: {detail}")]
    NotMarkov { detail: String },

    #[error("orbit closure exceeded the generator cap {cap}")]
    ClosureDiverged { cap: usize },

    #[error("{0}")]
    Invalid(String),
}

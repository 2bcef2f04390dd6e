use thiserror::Error;

use crate::poly::{Family, Variable};

/// Every fallible operation in the crate reports through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: Family, found: Family },

    #[error("no value assigned to variable {0}")]
    Unassigned(Variable),

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("partition has {blocks} blocks but at most {max} are allowed")]
    TooManyBlocks { blocks: usize, max: usize },

    #[error("trace word or index set must be nonempty")]
    EmptyIndexSet,

    #[error("input is not multilinear: {0}")]
    NotMultilinear(String),

    #[error("polynomial is not S_n-invariant")]
    NotInvariant,

    #[error("nonzero residual after basis expansion: {0}")]
    NonzeroResidual(String),

    #[error("expected {expected} arguments, found {found}")]
    ArgumentCount { expected: usize, found: usize },

    #[error("polynomial is not homogeneous of degree {expected} in copy {copy}")]
    NotHomogeneous { copy: u32, expected: usize },

    #[error("target copy {0} collides with a copy already in use")]
    TargetCollision(u32),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} exceeds desk-scale bounds (pass --allow-large to override)")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Formal contexts, concept enumeration and attribute-subset reductions,
//! in both the crisp and the finite-chain fuzzy setting.

pub mod context;
pub mod fuzzy;

use thiserror::Error;

use crate::lattice::FiniteLattice;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FcaError {
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error("the attribute subset is empty")]
    EmptyAttributeSet,
    #[error("grade {0} is not in the chain")]
    GradeNotInChain(String),
    #[error("the class has no maximum, so it is not an induced class")]
    NotInducedClass,
    #[error("context too large to enumerate ({0} candidate extents)")]
    ContextTooLarge(u128),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("malformed context file: {0}")]
    Malformed(String),
}

/// The unique maximum of a block of concept indices, if it has one.
pub(crate) fn block_maximum(lattice: &FiniteLattice, block: &[usize]) -> Result<usize, FcaError> {
    block
        .iter()
        .copied()
        .find(|&m| block.iter().all(|&x| lattice.leq(x, m)))
        .ok_or(FcaError::NotInducedClass)
}

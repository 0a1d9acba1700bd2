use thiserror::Error;

use crate::group::ElemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("degree mismatch: expected {expected} points, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("group of order {order} is not a {p}-group")]
    NotAPGroup { order: usize, p: u32 },
    #[error("group of order {order} exceeds the exhaustive-search limit of {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("the given generators do not generate the domain subgroup")]
    GeneratorsDontGenerate,
    #[error("image of f lies inside H, so the restriction has index 1")]
    DegenerateRestriction,
    #[error("transversal inconsistency: element {0} should lie in H")]
    NotInH(ElemId),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

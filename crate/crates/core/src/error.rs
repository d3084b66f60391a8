use alloc::string::String;

/// Errors shared by the certified pipeline.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("Gram matrix has an unknown dotted weight")]
    UnknownEntry,
    #[error("signs could not be certified at maximum precision")]
    CertificationFailure,
    #[error("edge-label cap {0} is too small")]
    CapTooSmall(u32),
    #[error("facet subset mentions unknown facet {0}")]
    InvalidSubset(usize),
    #[error("{0} facets exceed the exhaustive face-scan bound")]
    TooLarge(usize),
    #[error("no dotted weights > 1 satisfy the rank condition")]
    NoSolution,
    #[error("dotted weights are not determined by the rank condition")]
    Underdetermined,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource budget exceeded")]
    BudgetExceeded,
}

pub type Result<T> = core::result::Result<T, Error>;

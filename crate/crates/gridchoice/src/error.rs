use thiserror::Error;

/// Errors reported by the library.
///
/// Input-validation variants correspond to CLI exit code 2, `ResourceCap`
/// to exit code 4, and `Internal` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({k},{m}) lies outside the grid of size {n}")]
    PointOutsideGrid { k: usize, m: usize, n: usize },

    #[error("invalid list: {0}")]
    InvalidAbList(String),

    #[error("invalid quota sequence: {0}")]
    InvalidQuotaSequence(String),

    #[error("profile has {got} ballots but the society size is {want}")]
    ProfileLength { got: usize, want: usize },

    #[error("function is not dually monotone")]
    NotDuallyMonotone,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

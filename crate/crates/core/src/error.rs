use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ground set has {size} elements, above the configured limit of {limit}")]
    GroundSetTooLarge { size: usize, limit: usize },

    #[error("element index {index} out of range for a ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("{0} is not a T-flat")]
    NotATFlat(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("presentation is not multihomogeneous at {}", fmt_positions(.0))]
    NotHomogeneous(Vec<(usize, usize)>),
}

fn fmt_positions(ps: &[(usize, usize)]) -> String {
    ps.iter()
        .map(|(i, j)| format!("({i},{j})"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

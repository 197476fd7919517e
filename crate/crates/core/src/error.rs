use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("class functions live at different levels ({left} vs {right})")]
    LevelMismatch { left: u32, right: u32 },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("no polynomial of degree <= {degree} fits")]
    NoFit { degree: u32 },

    #[error("insufficient samples: unconstrained basis directions {}", .0.join(", "))]
    InsufficientSamples(Vec<String>),

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("invalid Betti profile: {0}")]
    InvalidBetti(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A computation would exceed the configured work or size limits.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

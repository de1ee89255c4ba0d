use thiserror::Error;

/// Errors raised by presentations, deciders and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("relation {index} is not homogeneous: {detail}")]
    NonhomogeneousRelation { index: usize, detail: String },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid degree window {lo}:{hi}")]
    InvalidWindow { lo: i32, hi: i32 },

    #[error("window too small: need hi >= {required}, got {hi}")]
    WindowTooSmall { required: i32, hi: i32 },

    #[error("hypothesis violated in degree {degree}: {hypothesis}")]
    HypothesisViolated { degree: i32, hypothesis: String },

    #[error("no reduction applies: {0}")]
    ReductionUnavailable(String),

    #[error("unsupported root system type {0}")]
    UnsupportedType(String),

    #[error("embedding hint insufficient: {0}")]
    UnsupportedEmbedding(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn hypothesis(degree: i32, hypothesis: impl Into<String>) -> Self {
        Error::HypothesisViolated {
            degree,
            hypothesis: hypothesis.into(),
        }
    }
}

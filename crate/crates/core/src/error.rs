use alloc::string::String;

/// Errors reported by the solver library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("singular matrix: no acceptable pivot in column {column}")]
    SingularMatrix { column: usize },
    #[error("singular corner coupling (denominator magnitude {0:e})")]
    SingularCorner(f64),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("unknown scenario `{name}`; valid names: {valid}")]
    UnknownScenario { name: String, valid: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

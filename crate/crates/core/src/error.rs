use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown benchmark `{0}` (expected f1..f12)")]
    UnknownProblem(String),
    #[error("benchmark {name} does not accept dimension {dim}")]
    InvalidDimension { name: String, dim: usize },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

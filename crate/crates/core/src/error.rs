use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
    #[error("malformed input at {field}: {detail}")]
    Malformed { field: String, detail: String },
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(what: &'static str, detail: impl Into<String>) -> Result<T> {
    Err(Error::Invalid {
        what,
        detail: detail.into(),
    })
}

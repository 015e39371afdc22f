use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid reduction source: {0}")]
    InvalidSource(String),

    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),

    #[error("{what}: size {size} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("method not applicable: {0}")]
    Inapplicable(String),

    /// A solver produced an outcome that its own certifier rejects.
    #[error("internal failure: {0}")]
    Internal(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

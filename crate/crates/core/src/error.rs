use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request is well-formed but exceeds a configured size cap.
    #[error("resource bound exceeded: {what} (limit {limit}; estimated size {estimate})")]
    ResourceBound {
        what: String,
        limit: String,
        estimate: String,
    },

    /// An internal identity that must always hold was violated.
    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn bound(
        what: impl Into<String>,
        limit: impl ToString,
        estimate: impl ToString,
    ) -> Self {
        Error::ResourceBound {
            what: what.into(),
            limit: limit.to_string(),
            estimate: estimate.to_string(),
        }
    }
}

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The operation would exceed a configured memory or scan budget.
    #[error("resource budget exceeded: {what} ({hint})")]
    Resource { what: String, hint: String },

    /// A step budget ran out before the computation finished.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn resource(what: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::Resource {
            what: what.into(),
            hint: hint.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

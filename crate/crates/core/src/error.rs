use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A function argument is outside its accepted range.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Input data violates a precondition (negative values for Chi², non-finite features, ...).
    #[error("data error: {0}")]
    Data(String),
    /// Input is structurally valid but too degenerate to fit (single class, n < 2).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A value falls outside the domain of the requested method.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;

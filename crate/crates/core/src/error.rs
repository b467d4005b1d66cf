use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid entropic index: {0}")]
    InvalidIndex(String),
    #[error("invalid retinex parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate conditional entropy: {0}")]
    DegenerateConditional(String),
}

pub type Result<T> = std::result::Result<T, Error>;

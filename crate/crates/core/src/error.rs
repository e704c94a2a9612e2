use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("gluing failed: {0}")]
    Gluing(String),
    #[error("not 2-Segal at n={n} for triangulation {triangulation}: {detail}")]
    NotTwoSegal {
        n: usize,
        triangulation: String,
        detail: String,
    },
    #[error("truncation exceeded: level {needed} requested, data stops at {top}")]
    Truncation { needed: usize, top: usize },
    #[error("not Frobenius: {0}")]
    NotFrobenius(String),
    #[error("not commutative: {0}")]
    NotCommutative(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

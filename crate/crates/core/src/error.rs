use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power in the supported range 2..=2^20")]
    NotPrimePower(u64),
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("field mismatch: q={0} vs q={1}")]
    FieldMismatch(u32, u32),
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("cap too small: {0}; regenerate with a larger cap")]
    CapTooSmall(String),
    #[error("q-1 = {0} is square-free, so the lattice has no infinite ascending chain")]
    SquareFree(u32),
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("bound mismatch: {0} vs {1}")]
    BoundMismatch(String, String),
    #[error("{0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level n = {n} outside supported range {min}..={max}")]
    LevelOutOfRange { n: u32, min: u32, max: u32 },
    #[error("level n = {n} too small, need n >= {min}")]
    LevelTooSmall { n: u32, min: u32 },
    #[error("operands live at different levels ({left} vs {right})")]
    LevelMismatch { left: u32, right: u32 },
    #[error("Galois index {0} is even")]
    EvenGaloisIndex(i64),
    #[error("element is not a unit (norm {norm})")]
    NotAUnit { norm: String },
    #[error("element is not fixed by complex conjugation")]
    NotReal,
    #[error("index {index} out of range ({what})")]
    IndexOutOfRange { index: i64, what: &'static str },
    #[error("index {j} is not admissible for q({k}, .)")]
    IndexNotInPartition { k: u32, j: u32 },
    #[error("word has alpha exponent {0}, only real words have special coordinates")]
    NonRealWord(i64),
    #[error("trace coefficient gamma_{index} is not integral")]
    NotIntegral { index: usize },
    #[error("exhaustive and linearized methods disagree: {0}")]
    Disagreement(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

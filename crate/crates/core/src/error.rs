use thiserror::Error;

use crate::combinat::Root;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root [{lo},{hi}]")]
    InvalidRoot { lo: usize, hi: usize },
    #[error("{0} is simple; this operation needs a root of length at least 2")]
    SimpleRoot(Root),
    #[error("cannot cut {root} at {at}")]
    BadCut { at: usize, root: Root },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid U-set: {0}")]
    InvalidUSet(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("ring size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

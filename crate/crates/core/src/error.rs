use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{a} is not invertible modulo {r}")]
    NotInvertible { a: i64, r: i64 },
    #[error("inconsistent local data: {0}")]
    InconsistentLocalData(String),
    #[error("not a classification basket: {0}")]
    NotClassified(String),
    #[error("undefined order: zero polynomial")]
    ZeroPolynomial,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("equation {equation} is not semi-invariant: monomial {monomial} has weight {found} mod {n}, expected {expected}")]
    SemiInvariance {
        equation: usize,
        monomial: String,
        found: i64,
        expected: i64,
        n: i64,
    },
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("weights not in the lattice: {0}")]
    NotInLattice(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown example id {0}")]
    UnknownExample(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),
    #[error("{0} is not prime")]
    BadPrime(u32),
    #[error("backend kind mismatch: {0}")]
    KindMismatch(String),
    #[error("element index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudgetExceeded(String),
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("type mismatch at {path}: {message}")]
    TypeMismatch { path: String, message: String },
    #[error("unbound generator `{0}`")]
    UnboundGenerator(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("parse error at byte {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("backend is not Mal'cev: {0}")]
    NotMalcevBackend(String),
    #[error("structure fails the Frobenius axioms: {0}")]
    NotFrobenius(String),
    #[error("invalid internal groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("mult/unit pair is not unital: {0}")]
    NotUnital(String),
    #[error("not a quantum structure: {0}")]
    NotQuantumStructure(String),
    #[error("morphism is not completely positive: {0}")]
    NotCP(String),
    #[error("internal invariant violated: {0}")]
    InternalError(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;

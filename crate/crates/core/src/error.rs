use thiserror::Error;

use crate::companion::VerifyFailure;
use crate::quiver::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expected {expected} vectors, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("vector is not a root (norm {norm})")]
    NotARoot { norm: String },
    #[error("integer overflow")]
    Overflow,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid quiver: {0}")]
    InvalidQuiver(Violation),
    #[error("no string from {from} to {to}")]
    NoString { from: usize, to: usize },
    #[error("more than one string from {from} to {to}")]
    AmbiguousString { from: usize, to: usize },
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("quiver is not of mutation type A")]
    NotTypeA,
    #[error("vertex {vertex} is not an end vertex")]
    NotEndVertex { vertex: usize },
    #[error("invalid end-vertex pair: {0}")]
    InvalidPair(String),
    #[error("not mutation type D: {0}")]
    NotTypeD(String),
    #[error("labelling does not match the quiver structure: {0}")]
    StructureMismatch(String),
    #[error("input basis is not a companion basis: {0}")]
    UnverifiedBasis(VerifyFailure),
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

use thiserror::Error;

use crate::dsl::Diagnostic;

/// Errors surfaced by the library. Mathematical "no" answers (an identity
/// failing, a system having no solution) are reported through return values,
/// never through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("structure tensor has {got} entries, expected {expected}")]
    BadTable { expected: usize, got: usize },
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("basis element 0 does not act as a unit on basis element {0}")]
    Unit(usize),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("map is not a derivation: Leibniz fails on basis pair ({0}, {1})")]
    NotLeibniz(usize, usize),
    #[error("operator is not a graded derivation: {0}")]
    NotGradedDerivation(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("not idempotent: P∘P differs from P")]
    NotIdempotent,
    #[error("subspace {0} is not contained in the ambient subspace")]
    NotContained(&'static str),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    SizeCap { what: &'static str, value: usize, cap: usize },
    #[error("{0}")]
    Parse(Diagnostic),
    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

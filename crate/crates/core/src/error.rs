use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("vertex index {index} out of range for graph with {len} vertices")]
    UnknownVertex { index: usize, len: usize },

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("size must be at least 1")]
    EmptySize,

    #[error("potential truncation index {m} exceeds vertex count {len}")]
    TruncationOutOfRange { m: usize, len: usize },

    #[error("eigenvalue {index} did not converge within {budget} QL iterations")]
    NoConvergence { index: usize, budget: usize },

    #[error("eigensolve residual {residual:e} exceeds certification bound {bound:e}")]
    Uncertified { residual: f64, bound: f64 },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("potential must be nonnegative, got {value} at vertex {vertex}")]
    NegativePotential { vertex: usize, value: f64 },

    #[error("eigenvalue {index} is not simple (gap {gap:e})")]
    DegenerateEigenvalue { index: usize, gap: f64 },

    #[error("stencil [{lo}, {hi}] leaves the parameter interval [0, 1]")]
    StencilOutOfRange { lo: f64, hi: f64 },

    #[error("eigenvalue {index} changes branch inside the stencil")]
    EigenvalueCrossing { index: usize },

    #[error("spectrum has {found} eigenpairs, expected {expected}")]
    IncompleteSpectrum { expected: usize, found: usize },

    #[error("eigenvalue index {index} out of range for spectrum of size {len}")]
    UnknownEigenvalue { index: usize, len: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("at position {position}: {message}")]
    Expression { position: usize, message: String },

    #[error("truncation size {size}: {source}")]
    AtSize {
        size: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

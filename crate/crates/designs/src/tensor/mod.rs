//! Sparse multi-qudit states, reduced density operators and dense complex
//! matrices — the linear algebra every other module consumes.

mod density;
mod matrix;
mod state;

pub use density::{DensityOperator, IdentityCheck};
pub use matrix::{ComplexMatrix, MatrixJson};
pub use state::{AmplitudeJson, QuditState, StateJson};

use thiserror::Error;

/// Errors raised by state and matrix operations.
#[derive(Debug, Error)]
pub enum TensorError {
    #[error("party count must be at least 1")]
    NoParties,

    #[error("local dimension must be in 2..=255, got {0}")]
    BadLocalDimension(usize),

    #[error("state space too large: {d}^{n} does not fit a 62-bit packed index")]
    CapacityExceeded { n: usize, d: usize },

    #[error("index tuple has length {got}, expected {expected}")]
    IndexLength { expected: usize, got: usize },

    #[error("digit {digit} out of range for local dimension {d}")]
    DigitOutOfRange { digit: u8, d: usize },

    #[error("party index {party} out of range for {n} parties")]
    PartyOutOfRange { party: usize, n: usize },

    #[error("duplicate party index {0}")]
    DuplicateParty(usize),

    #[error("tracing out all parties leaves an empty complement")]
    EmptyComplement,

    #[error("states live on incompatible spaces: {0} vs {1} parties or unequal levels")]
    DimensionMismatch(String, String),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    MatrixShape(usize, usize, usize, usize),

    #[error("matrix is rank deficient: smallest singular value {sigma_min:.3e} below {tol:.3e}")]
    RankDeficient { sigma_min: f64, tol: f64 },

    #[error("duplicate amplitude index {0:?}")]
    DuplicateIndex(Vec<u8>),

    #[error("projection has zero probability for the requested outcomes")]
    ZeroProjection,
}

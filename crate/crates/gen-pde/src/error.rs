//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Checked division hit a denominator inside the guard band.
    #[error("division by near-zero operand {operand:e}")]
    DivisionByNearZero { operand: f64 },

    /// A binary jet operation was invoked without its second operand.
    #[error("binary jet operation is missing its second operand")]
    MissingOperand,

    /// A tape handle referred to a node outside the recorded range.
    #[error("dangling tape node handle {index} (tape has {len} nodes)")]
    DanglingNode { index: usize, len: usize },

    /// Parameter vector length does not match the model layout.
    #[error("parameter length mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// Invalid problem or solver configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical evaluation produced a non-finite result.
    #[error("numerical error: {what} at (x={x}, t={t})")]
    NonFinite { what: String, x: f64, t: f64 },

    /// A numerical evaluation failed without a specific point attached.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Training loss exceeded the divergence guard.
    #[error("training diverged at iteration {iteration}: loss {loss:e} exceeds {guard:e}")]
    Diverged { iteration: usize, loss: f64, guard: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

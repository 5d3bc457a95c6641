//! Crate-wide error type.

use crate::command::Command;

/// Errors reported by model construction, evaluation, and the calculators.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operands live in Hilbert spaces of different dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A command was looked up in a map that does not define it.
    #[error("unknown command `{0}`")]
    UnknownCommand(Command),

    /// Two models do not share the same command set.
    #[error("command set mismatch: {0}")]
    CommandSetMismatch(String),

    /// A state vector failed the unit-norm check. States are rejected,
    /// never silently renormalized.
    #[error("state vector is not normalized: ‖v‖ = {norm}")]
    NotNormalized { norm: f64 },

    /// A matrix failed the `U†U = 1` check.
    #[error("matrix is not unitary: ‖U†U − 1‖ = {residual:.3e}")]
    NotUnitary { residual: f64 },

    /// A spectral decomposition violated one of its projector invariants.
    #[error("invalid spectral decomposition: {0}")]
    InvalidDecomposition(String),

    /// A probability vector failed validation.
    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),

    /// Two models' observable spectra cannot be aligned by eigenvalue.
    #[error("spectrum mismatch at command `{command}`: {detail}")]
    SpectrumMismatch { command: Command, detail: String },

    /// The orthogonal perfect-fit construction does not exist for the
    /// given frequency vector.
    #[error("degenerate frequency vector: {0}")]
    DegenerateFrequencies(String),

    /// A scalar argument was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix contained NaN or infinite entries.
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Schema or consistency violation in a model, counts, or command file.
    #[error("file format error: {0}")]
    FileFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A postcondition this crate promises failed to verify numerically.
    /// Seeing this means a bug, not bad input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by caller input (bad files, bad flags, bad
    /// operands) as opposed to internal invariant violations.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

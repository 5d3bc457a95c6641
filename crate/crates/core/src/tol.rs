//! Numerical tolerances used across the crate.
//!
//! Every validation threshold lives here rather than as an ad-hoc literal at
//! the call site. All dense algebra in this crate runs in f64 at dimensions
//! up to 4096, where accumulated rounding stays several orders of magnitude
//! below these thresholds.

/// Unitarity and orthonormality checks: `‖U†U − 1‖` and `|‖v‖ − 1|`.
pub const TAU_UNIT: f64 = 1e-10;

/// Projector validation: idempotency, mutual orthogonality, completeness,
/// and observable reconstruction of a spectral decomposition.
pub const TAU_PROJ: f64 = 1e-10;

/// Probability sanity: distributions must sum to 1 within this, and no
/// entry may be more negative than this before clipping.
pub const TAU_PROB: f64 = 1e-9;

/// Eigenvalues closer than this are treated as a single eigenspace and
/// their projectors are summed. Also the threshold for declaring two
/// models' spectra misaligned.
pub const EIGENVALUE_MERGE: f64 = 1e-8;

/// Relative convergence tolerance for the power-iteration spectral norm.
pub const SPECTRAL_NORM_REL: f64 = 1e-12;

/// Iteration cap for the power-iteration spectral norm.
pub const POWER_ITER_MAX: usize = 10_000;

/// Largest supported Hilbert-space dimension (12 qubits). The dense
/// representation is exact but quadratic in memory; everything this crate
/// demonstrates is a small-N statement.
pub const MAX_DIMENSION: usize = 4096;

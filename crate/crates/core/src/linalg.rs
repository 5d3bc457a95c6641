//! Dense complex linear algebra: state vectors, unitaries, and the
//! spectral norm.
//!
//! Everything is exact double-precision dense algebra; supported dimensions
//! go up to [`crate::tol::MAX_DIMENSION`]. States are validated to unit norm
//! on construction and never silently renormalized.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol::{POWER_ITER_MAX, SPECTRAL_NORM_REL, TAU_UNIT};

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// A unit vector in the model's Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps a complex vector, rejecting anything off unit norm by more
    /// than [`TAU_UNIT`].
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > TAU_UNIT {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amplitudes })
    }

    /// The computational-basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|`: 1 iff the two states agree up to a global phase.
    pub fn overlap_magnitude(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let (n, m) = (self.dim(), other.dim());
        let mut out = DVector::zeros(n * m);
        for i in 0..n {
            for j in 0..m {
                out[i * m + j] = self.amplitudes[i] * other.amplitudes[j];
            }
        }
        StateVector { amplitudes: out }
    }
}

/// A matrix validated to satisfy `U†U = 1` within [`TAU_UNIT`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: DMatrix<C64>,
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let residual = unitarity_residual(&entries);
        if !residual.is_finite() || residual > TAU_UNIT {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix { entries })
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix {
            entries: DMatrix::identity(dim, dim),
        }
    }

    /// Wraps a matrix that is unitary by construction (reflections, signed
    /// diagonals, products of validated unitaries) without re-running the
    /// tolerance check, which could spuriously reject inputs whose factors
    /// sit at the tolerance edge.
    pub(crate) fn from_trusted(entries: DMatrix<C64>) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        // The O(N³) spot check only runs in debug builds and at small N.
        debug_assert!(entries.nrows() > 64 || unitarity_residual(&entries) < 1e-6);
        UnitaryMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            entries: self.entries.adjoint(),
        }
    }

    /// Matrix product `self · other` (applies `other` first).
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(UnitaryMatrix {
            entries: &self.entries * &other.entries,
        })
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix {
            entries: self.entries.kronecker(&other.entries),
        }
    }

    /// Conjugation `self · m · self†`.
    pub fn conjugate_matrix(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        &self.entries * m * self.entries.adjoint()
    }
}

/// The Pauli X (NOT) gate.
pub fn pauli_x() -> UnitaryMatrix {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    UnitaryMatrix {
        entries: DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
    }
}

/// Max absolute entry of `U†U − 1`.
pub fn unitarity_residual(m: &DMatrix<C64>) -> f64 {
    let gram = m.adjoint() * m;
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - C64::new(expected, 0.0)).norm());
        }
    }
    worst
}

/// Max absolute entry of `a − b`; the matrices must have equal shape.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Max absolute entry of `m − m†`.
pub fn hermiticity_residual(m: &DMatrix<C64>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Applies `u` to `s`, validating dimensions and that the result is still
/// a unit vector.
pub fn apply_unitary(u: &UnitaryMatrix, s: &StateVector) -> Result<StateVector> {
    if u.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: s.dim(),
        });
    }
    StateVector::new(u.matrix() * s.amplitudes())
}

/// Largest singular value of `m`.
///
/// Power iteration on the Gram matrix `m†m`, run to relative tolerance
/// [`SPECTRAL_NORM_REL`] on the Rayleigh quotient with an iteration cap of
/// [`POWER_ITER_MAX`]. The start vector comes from a fixed-seed generator,
/// so results are reproducible across runs and platforms.
pub fn spectral_norm(m: &DMatrix<C64>) -> Result<f64> {
    for (idx, z) in m.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite {
                row: idx % m.nrows(),
                col: idx / m.nrows(),
            });
        }
    }
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return Ok(0.0);
    }
    // Frobenius norm bounds the spectral norm; a zero matrix short-circuits.
    let frob = m.norm();
    if frob == 0.0 {
        return Ok(0.0);
    }

    let gram = m.adjoint() * m;
    let mut rng = ChaCha8Rng::seed_from_u64(0x515a);
    let mut v = DVector::from_fn(n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    v /= C64::new(v.norm(), 0.0);

    let mut lambda = 0.0f64;
    for _ in 0..POWER_ITER_MAX {
        let w = &gram * &v;
        // Rayleigh quotient of the PSD Gram matrix: real and nonnegative.
        let next = v.dotc(&w).re.max(0.0);
        let wn = w.norm();
        if wn == 0.0 {
            return Ok(0.0);
        }
        v = w / C64::new(wn, 0.0);
        if (next - lambda).abs() <= SPECTRAL_NORM_REL * next.max(f64::MIN_POSITIVE) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    Ok(lambda.sqrt())
}

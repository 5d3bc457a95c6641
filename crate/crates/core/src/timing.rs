//! Timing precision a classical controller needs when it commands
//! quantum gates.
//!
//! A NOT gate of duration `T(NOT)` is a Bloch rotation by π, so the
//! implied angular rate is `ω = π/T(NOT)` and a timing error `ΔT`
//! mis-rotates the state by `ω·ΔT`. Keeping the angle error below `ε`
//! therefore requires `ΔT/T(NOT) ≤ ε/π`, and the diffusion-operator error
//! budget of an `n`-bit search tightens that to `ΔT/T(NOT) < 2^{−n/2}`.
//! Against the hydrogen-maser figure of 1 part in 10¹⁵ this first fails at
//! `n = 100`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{apply_unitary, StateVector, UnitaryMatrix, C64};

/// Best timing precision of a hydrogen maser clock, 1 part in 10¹⁵.
pub const DEFAULT_CLOCK_PRECISION: f64 = 1e-15;

/// Gate duration and controller timing error, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingBudget {
    t_not: f64,
    delta_t: f64,
}

impl TimingBudget {
    pub fn new(t_not: f64, delta_t: f64) -> Result<Self> {
        if !t_not.is_finite() || t_not <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "T(NOT) must be positive seconds, got {t_not}"
            )));
        }
        if !delta_t.is_finite() || delta_t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "ΔT must be nonnegative seconds, got {delta_t}"
            )));
        }
        Ok(TimingBudget { t_not, delta_t })
    }

    pub fn t_not(&self) -> f64 {
        self.t_not
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Angular rotation rate `ω = π/T(NOT)` in radians per second.
    pub fn omega(&self) -> f64 {
        std::f64::consts::PI / self.t_not
    }
}

/// Largest tolerable relative timing error `ΔT/T(NOT) = ε/π` for a target
/// angle error `epsilon`.
pub fn max_relative_timing_error(epsilon: f64) -> Result<f64> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(epsilon / std::f64::consts::PI)
}

/// The search-algorithm timing bound `2^{−n/2}`, correctly rounded
/// (exact for even `n`).
pub fn search_timing_bound(n_bits: u32) -> Result<f64> {
    if n_bits == 0 {
        return Err(Error::InvalidArgument("n_bits must be at least 1".into()));
    }
    // 2^{−n} is exact down to n = 1022; its square root is correctly
    // rounded and exactly dyadic for even n.
    if n_bits > 1022 {
        return Err(Error::InvalidArgument(format!(
            "2^{{−{n_bits}}} underflows f64"
        )));
    }
    Ok((0.5f64).powi(n_bits as i32).sqrt())
}

/// Exact rational form of `2^{−n/2}`, available for even `n`.
pub fn search_timing_bound_exact(n_bits: u32) -> Option<BigRational> {
    if n_bits == 0 || n_bits % 2 != 0 {
        return None;
    }
    Some(BigRational::new(
        BigInt::from(1),
        BigInt::from(1) << (n_bits / 2),
    ))
}

/// Whether a clock of the given precision can time an `n`-bit search:
/// true iff `clock_precision < 2^{−n/2}` (strict).
pub fn maser_feasible(n_bits: u32, clock_precision: f64) -> Result<bool> {
    if !clock_precision.is_finite() || clock_precision <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "clock precision must be positive, got {clock_precision}"
        )));
    }
    Ok(clock_precision < search_timing_bound(n_bits)?)
}

/// Bloch rotation about the x axis by `angle`.
fn rotation_x(angle: f64) -> UnitaryMatrix {
    let half = angle / 2.0;
    let c = C64::new(half.cos(), 0.0);
    let s = C64::new(0.0, -half.sin());
    UnitaryMatrix::from_trusted(DMatrix::from_row_slice(2, 2, &[c, s, s, c]))
}

/// Applies a NOT gate whose duration is off by `ΔT`: an x-axis rotation by
/// `π·(1 + ΔT/T(NOT))` with the global phase dropped. Returns the rotated
/// state and the angle error `ω·ΔT = π·ΔT/T(NOT)`.
pub fn simulate_mistimed_not(
    budget: &TimingBudget,
    s: &StateVector,
) -> Result<(StateVector, f64)> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: s.dim(),
        });
    }
    let angle_error = std::f64::consts::PI * (budget.delta_t / budget.t_not);
    let angle = std::f64::consts::PI + angle_error;
    let out = apply_unitary(&rotation_x(angle), s)?;
    Ok((out, angle_error))
}

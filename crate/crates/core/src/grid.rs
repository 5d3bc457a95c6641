//! Cost of blindly refining gate commands on SU(N).
//!
//! Improving a gate command from precision `ε` to `ε′ < ε` by exhaustive
//! search means visiting every point of an ε′-grid of an ε-ball in SU(N).
//! A volume ratio bounds that count from below by `(ε/ε′)^d` with
//! `d = N² − 1 = 4^n − 1`, so the bound's log₂ is `d·log₂(ε/ε′)` —
//! astronomically large already at `n = 5`, where halving the squared
//! error (`ε/ε′ = √2`) costs about `10^154` candidate commands.
//!
//! Counts are carried in log₂. When the ratio is a half-power of two the
//! exponent is kept as an exact rational, since values like `2^{511.5}`
//! are far beyond f64 range and the headline figures must be exact.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default work budget a search is judged against: 2^60 operations.
pub const DEFAULT_BUDGET_LOG2: f64 = 60.0;

/// A grid-refinement question: register width, current and target
/// precision, and how many gate commands need refining.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridQuery {
    n_bits: u32,
    eps: f64,
    eps_prime: f64,
    n_gates: u64,
}

impl GridQuery {
    pub fn new(n_bits: u32, eps: f64, eps_prime: f64, n_gates: u64) -> Result<Self> {
        if n_bits == 0 {
            return Err(Error::InvalidArgument("n_bits must be at least 1".into()));
        }
        if !eps.is_finite() || eps <= 0.0 || !eps_prime.is_finite() || eps_prime <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "precisions must be positive, got ε = {eps}, ε′ = {eps_prime}"
            )));
        }
        if eps_prime >= eps {
            return Err(Error::InvalidArgument(format!(
                "ε′ = {eps_prime} must improve on ε = {eps}"
            )));
        }
        if n_gates == 0 {
            return Err(Error::InvalidArgument("n_gates must be at least 1".into()));
        }
        Ok(GridQuery {
            n_bits,
            eps,
            eps_prime,
            n_gates,
        })
    }

    /// Query with the precision ratio `ε/ε′` given directly (`ε′` is
    /// normalized to 1; only the trials term of a blind-search verdict
    /// depends on the absolute scale).
    pub fn from_ratio(n_bits: u32, ratio: f64, n_gates: u64) -> Result<Self> {
        Self::new(n_bits, ratio, 1.0, n_gates)
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }

    pub fn n_gates(&self) -> u64 {
        self.n_gates
    }

    pub fn ratio(&self) -> f64 {
        self.eps / self.eps_prime
    }
}

/// The dimension of SU(2^n): `d = 4^n − 1`, exact.
pub fn su_dimension(n_bits: u32) -> Result<BigUint> {
    if n_bits == 0 {
        return Err(Error::InvalidArgument("n_bits must be at least 1".into()));
    }
    Ok((BigUint::one() << (2 * n_bits as u64)) - BigUint::one())
}

/// log₂ of a count: kept as an exact rational when derivable from a
/// half-power-of-two ratio, a float otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Log2 {
    Exact(BigRational),
    Approx(f64),
}

impl Log2 {
    pub fn as_f64(&self) -> f64 {
        match self {
            Log2::Exact(r) => rational_to_f64(r),
            Log2::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Log2::Exact(_))
    }
}

impl std::fmt::Display for Log2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Log2::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Log2::Exact(r) if *r.denom() == BigInt::from(2) => {
                let whole = r.numer() / BigInt::from(2);
                write!(f, "{whole}.5")
            }
            Log2::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Log2::Approx(x) => write!(f, "{x}"),
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => {
            if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Detects ratios of the form `2^{k/2}` (within 1e-12 relative), returning
/// `k`; covers √2 and all integer powers of two.
fn half_power_exponent(ratio: f64) -> Option<i64> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return None;
    }
    let k = (2.0 * ratio.log2()).round();
    if !(-2000.0..=2000.0).contains(&k) {
        return None;
    }
    let k = k as i64;
    let back = if k.rem_euclid(2) == 0 {
        2f64.powi((k / 2) as i32)
    } else {
        2f64.powi(((k - 1) / 2) as i32) * std::f64::consts::SQRT_2
    };
    ((ratio - back).abs() <= 1e-12 * ratio).then_some(k)
}

/// Lower bound on how many grid points a refinement must visit.
#[derive(Debug, Clone, PartialEq)]
pub struct GridBound {
    /// SU(N) dimension `d = 4^n − 1`.
    pub d: BigUint,
    /// `log₂` of the point count `(ε/ε′)^d`.
    pub log2_points: Log2,
    /// The same bound as a power of ten: `log₁₀` of the point count.
    pub decimal_order: f64,
    /// The count itself, materialized when it is an exact, reasonably
    /// sized power of two.
    pub count: Option<BigUint>,
}

/// `(ε/ε′)^d` in log form: the volume-ratio lower bound on the number of
/// ε′-grid points inside an ε-ball of SU(2^n).
pub fn grid_point_lower_bound(q: &GridQuery) -> Result<GridBound> {
    let d = su_dimension(q.n_bits)?;
    let ratio = q.ratio();

    let log2_points = match half_power_exponent(ratio) {
        Some(k) => Log2::Exact(BigRational::new(
            BigInt::from(d.clone()) * BigInt::from(k),
            BigInt::from(2),
        )),
        None => Log2::Approx(
            d.to_f64().unwrap_or(f64::INFINITY) * ratio.log2(),
        ),
    };

    let count = match &log2_points {
        Log2::Exact(r) if r.is_integer() && !r.is_negative() => r
            .numer()
            .to_u64()
            .filter(|&e| e <= 1 << 20)
            .map(|e| BigUint::one() << e),
        _ => None,
    };

    let decimal_order = log2_points.as_f64() * std::f64::consts::LOG10_2;
    Ok(GridBound {
        d,
        log2_points,
        decimal_order,
        count,
    })
}

/// Verdict on refining commands by exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct BlindSearchReport {
    pub grid: GridBound,
    /// log₂ of the per-command trial count.
    pub log2_trials: f64,
    /// log₂ of the gate-command multiplicity.
    pub log2_gates: f64,
    /// log₂ of grid points × gates × trials.
    pub log2_total: f64,
    /// The budget the total is judged against, in log₂.
    pub budget_log2: f64,
    pub hopeless: bool,
}

/// Total work of a blind refinement — grid points × gate commands ×
/// trials per command — judged against a work budget (log₂ scale,
/// default [`DEFAULT_BUDGET_LOG2`]).
///
/// `trials_per_command` is the sample size each candidate command needs,
/// typically [`crate::stats::min_sample_size`] at `ε′`.
pub fn blind_search_verdict(
    q: &GridQuery,
    trials_per_command: &BigUint,
    budget_log2: f64,
) -> Result<BlindSearchReport> {
    if trials_per_command.is_zero() {
        return Err(Error::InvalidArgument(
            "trials_per_command must be at least 1".into(),
        ));
    }
    if !budget_log2.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "budget must be finite, got log₂ = {budget_log2}"
        )));
    }
    let grid = grid_point_lower_bound(q)?;
    let log2_trials = biguint_log2(trials_per_command);
    let log2_gates = (q.n_gates as f64).log2();
    let log2_total = grid.log2_points.as_f64() + log2_trials + log2_gates;
    Ok(BlindSearchReport {
        grid,
        log2_trials,
        log2_gates,
        log2_total,
        budget_log2,
        hopeless: log2_total > budget_log2,
    })
}

/// log₂ of a positive big integer, accurate to f64 precision at any size.
pub fn biguint_log2(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit in f64");
    top.log2() + shift as f64
}

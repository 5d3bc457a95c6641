//! Statistical distance, distinguishability thresholds, sample-size
//! bounds, and the orthogonal perfect-fit construction.
//!
//! The distance between outcome distributions is the Bhattacharyya angle
//! `d(p, q) = arccos Σ_j √(p_j q_j)`, a metric on the probability simplex
//! with values in `[0, π/2]`. Two distributions are treated as statistically
//! indistinguishable in `n` trials unless `√n · d > 1`, which makes
//! `⌈ε⁻²⌉` the minimum sample size for resolving a distance `ε`.
//!
//! All power-of-two bounds are carried as exact big integers; the numbers
//! involved (`2^{2n−2}` at `n = 100`) are far beyond both `u64` and exact
//! f64 range.

use indexmap::IndexMap;
use num_bigint::BigUint;
use num_traits::{FromPrimitive, One};

use crate::command::Command;
use crate::error::{Error, Result};
use crate::linalg::{StateVector, C64};
use crate::tol::{EIGENVALUE_MERGE, TAU_PROB, TAU_UNIT};

/// A probability vector over outcome indices.
///
/// Validated to sum to 1 within [`TAU_PROB`]; entries more negative than
/// `−TAU_PROB` are rejected, and round-off negatives inside that band are
/// clipped to zero so they never propagate into sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let mut sum = 0.0;
        for (j, p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "entry {j} is not finite"
                )));
            }
            if *p < -TAU_PROB {
                return Err(Error::InvalidDistribution(format!(
                    "entry {j} is {p}, more negative than −{TAU_PROB}"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > TAU_PROB {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        for p in &mut probs {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Ok(OutcomeDistribution { probs })
    }

    /// The uniform distribution over `k` outcomes.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        Ok(OutcomeDistribution {
            probs: vec![1.0 / k as f64; k],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Empirical outcome tallies for one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeCounts {
    counts: Vec<u64>,
}

impl OutcomeCounts {
    pub fn new(counts: Vec<u64>) -> Self {
        OutcomeCounts { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    /// Total number of trials behind these tallies.
    pub fn n_trials(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Merge tallies from independent runs (for instance disjoint RNG
    /// streams); addition is order-independent.
    pub fn merge(&self, other: &OutcomeCounts) -> Result<OutcomeCounts> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(OutcomeCounts {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Relative frequencies `N_j / N`. Zero counts stay exact zeros; no
    /// smoothing is applied.
    pub fn frequencies(&self) -> Result<OutcomeDistribution> {
        let n = self.n_trials();
        if n == 0 {
            return Err(Error::InvalidDistribution(
                "cannot take frequencies of zero trials".into(),
            ));
        }
        OutcomeDistribution::new(self.counts.iter().map(|&c| c as f64 / n as f64).collect())
    }
}

/// A normalized weighting over commands, the scientist's choice of how
/// much each command matters in an aggregate distance.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCommandSet {
    entries: Vec<(Command, f64)>,
}

impl WeightedCommandSet {
    pub fn new(entries: Vec<(Command, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty command weighting".into()));
        }
        let mut sum = 0.0;
        for (c, w) in &entries {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "weight {w} for command `{c}` is not a nonnegative real"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > TAU_PROB {
            return Err(Error::InvalidArgument(format!(
                "command weights sum to {sum}, not 1"
            )));
        }
        Ok(WeightedCommandSet { entries })
    }

    /// Equal weight on every listed command.
    pub fn uniform(commands: &[Command]) -> Result<Self> {
        let w = 1.0 / commands.len() as f64;
        Self::new(commands.iter().map(|c| (c.clone(), w)).collect())
    }

    pub fn entries(&self) -> &[(Command, f64)] {
        &self.entries
    }
}

/// Per-command empirical tallies, as read from a counts file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountsTable {
    entries: IndexMap<Command, OutcomeCounts>,
}

impl CountsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, command: Command, counts: OutcomeCounts) {
        self.entries.insert(command, counts);
    }

    pub fn get(&self, command: &Command) -> Option<&OutcomeCounts> {
        self.entries.get(command)
    }

    pub fn commands(&self) -> Vec<Command> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Command, &OutcomeCounts)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Anything that can produce an outcome distribution per command: a model,
/// or recorded relative frequencies.
pub trait OutcomeSource {
    fn outcome_distribution(&self, command: &Command) -> Result<OutcomeDistribution>;

    /// Sorted eigenvalues backing the outcome indices, when known.
    /// Recorded data carries none.
    fn spectrum(&self, command: &Command) -> Option<Vec<f64>>;
}

impl OutcomeSource for CountsTable {
    fn outcome_distribution(&self, command: &Command) -> Result<OutcomeDistribution> {
        self.entries
            .get(command)
            .ok_or_else(|| Error::UnknownCommand(command.clone()))?
            .frequencies()
    }

    fn spectrum(&self, _command: &Command) -> Option<Vec<f64>> {
        None
    }
}

/// Statistical distance `arccos Σ_j √(p_j q_j)` in radians.
///
/// Zero-probability outcomes contribute zero terms. The result lies in
/// `[0, π/2]`: 0 for identical distributions, `π/2` for disjoint support.
pub fn wootters_distance(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let overlap: f64 = p
        .probs
        .iter()
        .zip(&q.probs)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum();
    Ok(overlap.clamp(0.0, 1.0).acos())
}

/// Whether `n_trials` samples statistically resolve a distance `d`:
/// true iff `√n · d > 1` (strict).
pub fn distinguishable(n_trials: u64, d: f64) -> bool {
    (n_trials as f64).sqrt() * d > 1.0
}

/// Minimum sample size `⌈ε⁻²⌉` needed to resolve a distance `epsilon`.
pub fn min_sample_size(epsilon: f64) -> Result<BigUint> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let inv_sq = epsilon.powi(-2);
    if !inv_sq.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is too small: ε⁻² overflows f64"
        )));
    }
    let floor = BigUint::from_f64(inv_sq.floor()).ok_or_else(|| {
        Error::InvalidArgument(format!("cannot convert ε⁻² = {inv_sq} to an integer"))
    })?;
    if inv_sq.fract() == 0.0 {
        Ok(floor)
    } else {
        Ok(floor + BigUint::one())
    }
}

/// The cost of experimentally verifying an `n`-bit gate command at
/// search-grade precision, all fields exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n_bits: u32,
    /// Samples per preparation vector: `⌈ε⁻²⌉` at `ε = 2^{1−n/2}`,
    /// i.e. `2^{n−2}` for `n ≥ 2`.
    pub per_vector_samples: BigUint,
    /// Preparation vectors needed: `2^n`.
    pub n_vectors: BigUint,
    /// Total trials: `2^{2n−2}`.
    pub total_lower_bound: BigUint,
}

/// Sample-size lower bound for verifying that an `n_bits` gate command
/// behaves to within the precision quantum searching demands.
pub fn verification_cost(n_bits: u32) -> Result<BoundReport> {
    if n_bits == 0 {
        return Err(Error::InvalidArgument("n_bits must be at least 1".into()));
    }
    let n = n_bits as u64;
    // ⌈2^{n−2}⌉: the n = 1 exponent is negative, where the ceiling is 1.
    let per_vector_samples = if n >= 2 {
        BigUint::one() << (n - 2)
    } else {
        BigUint::one()
    };
    Ok(BoundReport {
        n_bits,
        per_vector_samples,
        n_vectors: BigUint::one() << n,
        total_lower_bound: BigUint::one() << (2 * n - 2),
    })
}

/// Weighted average of per-command statistical distances between a model
/// and either another model or recorded frequencies.
///
/// When both sides carry spectra, the sorted eigenvalues must agree within
/// [`EIGENVALUE_MERGE`] at every command; outcome indices are aligned by
/// sorted eigenvalue. Summation runs in the weighting's entry order.
pub fn weighted_model_distance<A, B>(alpha: &A, other: &B, w: &WeightedCommandSet) -> Result<f64>
where
    A: OutcomeSource + ?Sized,
    B: OutcomeSource + ?Sized,
{
    let mut total = 0.0;
    for (command, weight) in &w.entries {
        let p = alpha.outcome_distribution(command)?;
        let q = other.outcome_distribution(command)?;
        if let (Some(sa), Some(sb)) = (alpha.spectrum(command), other.spectrum(command)) {
            if sa.len() != sb.len() {
                return Err(Error::SpectrumMismatch {
                    command: command.clone(),
                    detail: format!("{} vs {} eigenvalues", sa.len(), sb.len()),
                });
            }
            for (ma, mb) in sa.iter().zip(&sb) {
                if (ma - mb).abs() > EIGENVALUE_MERGE {
                    return Err(Error::SpectrumMismatch {
                        command: command.clone(),
                        detail: format!("eigenvalue {ma} vs {mb}"),
                    });
                }
            }
        } else if p.len() != q.len() {
            return Err(Error::SpectrumMismatch {
                command: command.clone(),
                detail: format!("{} vs {} outcomes", p.len(), q.len()),
            });
        }
        total += weight * wootters_distance(&p, &q)?;
    }
    Ok(total)
}

/// Upper bound `arccos |⟨v_α|v_β⟩|` on the statistical distance between
/// the outcome distributions two states induce under any shared observable.
pub fn state_distance_bound(v_alpha: &StateVector, v_beta: &StateVector) -> Result<f64> {
    Ok(v_alpha.overlap_magnitude(v_beta)?.clamp(0.0, 1.0).acos())
}

/// Phase assignment that makes `Σ_j f_j e^{iφ_j} = 0`.
///
/// The support splits into the heaviest single point (phase 0, mass `a`)
/// and two balanced groups with masses `b` and `c` at phases `π ∓` an
/// angle pair found by bisection: the offset `x` of group B is the root of
/// the real closure equation once group C's offset is slaved to cancel the
/// imaginary part. Solving one angle and deriving the other keeps the
/// closure residual at rounding level even for degenerate splits like
/// `a = b + c`, where the two law-of-cosines angles computed independently
/// lose eight digits to the flat `arccos` near 1.
///
/// A closing assignment with moduli `√f_j` exists precisely when no single
/// frequency exceeds 1/2.
fn closing_phases(freqs: &[f64]) -> Result<Vec<f64>> {
    let support: Vec<usize> = freqs
        .iter()
        .enumerate()
        .filter(|(_, &f)| f > 0.0)
        .map(|(j, _)| j)
        .collect();
    if support.len() < 2 {
        return Err(Error::DegenerateFrequencies(format!(
            "{} positive entries; orthogonality is unattainable with identical \
             moduli on a single support point",
            support.len()
        )));
    }
    let mut heaviest = support[0];
    for &j in &support[1..] {
        if freqs[j] > freqs[heaviest] {
            heaviest = j;
        }
    }
    let a = freqs[heaviest];
    if a > 0.5 + 1e-12 {
        return Err(Error::DegenerateFrequencies(format!(
            "dominant frequency {a} exceeds 1/2; no phase assignment with \
             moduli √f_j can sum to zero"
        )));
    }

    // Balance the remaining support into two groups, heaviest element
    // first, so that |b − c| never exceeds a and the triangle closes.
    let mut rest: Vec<usize> = support.iter().copied().filter(|&j| j != heaviest).collect();
    rest.sort_by(|&i, &j| freqs[j].partial_cmp(&freqs[i]).unwrap().then(i.cmp(&j)));
    let mut group_b = Vec::new();
    let mut group_c = Vec::new();
    let (mut b, mut c) = (0.0f64, 0.0f64);
    for j in rest {
        if b <= c {
            group_b.push(j);
            b += freqs[j];
        } else {
            group_c.push(j);
            c += freqs[j];
        }
    }
    // The slaved angle sits opposite side b and must stay acute for the
    // asin branch below; at most one side can dominate, so swapping the
    // groups guarantees it.
    if b * b > a * a + c * c {
        std::mem::swap(&mut b, &mut c);
        std::mem::swap(&mut group_b, &mut group_c);
    }

    // Group C's offset cancels the imaginary part of group B exactly.
    let slave_angle = |x: f64| -> f64 {
        if c > 0.0 {
            (b * x.sin() / c).clamp(-1.0, 1.0).asin()
        } else {
            0.0
        }
    };
    // Real part of the closure as a function of group B's offset;
    // decreasing from `b + c − a ≥ 0` at 0 to `≤ 0` at π.
    let real_gap = |x: f64| -> f64 { b * x.cos() + c * slave_angle(x).cos() - a };

    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::PI;
    let x = if real_gap(lo) <= 0.0 {
        lo
    } else {
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if real_gap(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let mut phases = vec![0.0; freqs.len()];
    let angle_b = std::f64::consts::PI - x;
    for j in group_b {
        phases[j] = angle_b;
    }
    let angle_c = std::f64::consts::PI + slave_angle(x);
    for j in group_c {
        phases[j] = angle_c;
    }

    let residual: C64 = freqs
        .iter()
        .zip(&phases)
        .map(|(&f, &phi)| C64::from_polar(f, phi))
        .sum();
    if residual.norm() > TAU_UNIT {
        return Err(Error::Internal(format!(
            "phase closure residual {} exceeds {TAU_UNIT}",
            residual.norm()
        )));
    }
    Ok(phases)
}

/// Two static models (identity evolution, computational-basis measurement,
/// single empty command) that both reproduce `freqs` exactly yet have
/// mutually orthogonal state vectors.
///
/// The first model's amplitudes are `√f_j`; the second carries the same
/// moduli with phases from [`closing_phases`]. Fails for frequency vectors
/// with fewer than two positive entries or with a single entry above 1/2,
/// where no such pair exists in this form.
pub fn orthogonal_perfect_fit(
    freqs: &OutcomeDistribution,
) -> Result<(crate::model::Model, crate::model::Model)> {
    use crate::model::{Model, SpectralDecomposition};
    use nalgebra::DVector;

    let f = freqs.probs();
    let phases = closing_phases(f)?;

    let v_alpha = StateVector::new(DVector::from_iterator(
        f.len(),
        f.iter().map(|&x| C64::new(x.sqrt(), 0.0)),
    ))?;
    let v_beta = StateVector::new(DVector::from_iterator(
        f.len(),
        f.iter()
            .zip(&phases)
            .map(|(&x, &phi)| C64::from_polar(x.sqrt(), phi)),
    ))?;

    let overlap = v_alpha.overlap_magnitude(&v_beta)?;
    if overlap > TAU_UNIT {
        return Err(Error::Internal(format!(
            "constructed states have overlap {overlap}, expected 0"
        )));
    }

    let build = |v: StateVector| -> Result<Model> {
        Model::builder(f.len())
            .state(Command::empty(), v)
            .observable(Command::empty(), SpectralDecomposition::computational_basis(f.len())?)
            .command(Command::empty())
            .build()
    };
    Ok((build(v_alpha)?, build(v_beta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn dist(p: &[f64]) -> OutcomeDistribution {
        OutcomeDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn distribution_rejects_bad_sums_and_entries() {
        assert!(OutcomeDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(OutcomeDistribution::new(vec![1.1, -0.1]).is_err());
        assert!(OutcomeDistribution::new(vec![]).is_err());
        assert!(OutcomeDistribution::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn distribution_clips_round_off_negatives() {
        let d = OutcomeDistribution::new(vec![1.0 + 1e-16, -1e-16]).unwrap();
        assert_eq!(d.probs()[1], 0.0);
    }

    #[test]
    fn wootters_identical_is_zero() {
        let p = dist(&[0.25; 4]);
        assert!(wootters_distance(&p, &p).unwrap() < 1e-7);
    }

    #[test]
    fn wootters_disjoint_support_is_right_angle() {
        let p = dist(&[1.0, 0.0]);
        let q = dist(&[0.0, 1.0]);
        assert_eq!(wootters_distance(&p, &q).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn wootters_half_overlap_quarter_turn() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[1.0, 0.0]);
        let d = wootters_distance(&p, &q).unwrap();
        assert!((d - FRAC_PI_4).abs() < 1e-15, "d = {d}");
    }

    #[test]
    fn wootters_length_mismatch() {
        let p = dist(&[1.0]);
        let q = dist(&[0.5, 0.5]);
        assert!(wootters_distance(&p, &q).is_err());
    }

    #[test]
    fn distinguishable_threshold_is_strict() {
        assert!(distinguishable(1, 2.0));
        assert!(!distinguishable(100, 0.1)); // √100 · 0.1 = 1, not > 1
        assert!(distinguishable(101, 0.1));
    }

    #[test]
    fn min_sample_size_values() {
        assert_eq!(min_sample_size(1.0).unwrap(), BigUint::from(1u32));
        // ε = 2^{1−n/2} at n = 10
        assert_eq!(min_sample_size(0.0625).unwrap(), BigUint::from(256u32));
        assert_eq!(min_sample_size(0.1).unwrap(), BigUint::from(100u32));
        assert!(min_sample_size(0.0).is_err());
        assert!(min_sample_size(-1.0).is_err());
    }

    #[test]
    fn verification_cost_small_cases() {
        let r = verification_cost(2).unwrap();
        assert_eq!(r.total_lower_bound, BigUint::from(4u32));
        assert_eq!(r.per_vector_samples, BigUint::from(1u32));
        assert_eq!(r.n_vectors, BigUint::from(4u32));

        let r = verification_cost(10).unwrap();
        assert_eq!(r.total_lower_bound, BigUint::from(262_144u64));
        assert_eq!(r.per_vector_samples, BigUint::from(256u32));

        // n = 50 does not fit in u64; exact big-integer arithmetic.
        let r = verification_cost(50).unwrap();
        assert_eq!(r.total_lower_bound, BigUint::one() << 98u32);
    }

    #[test]
    fn verification_cost_total_is_power_of_four() {
        for n in 1..=100u32 {
            let r = verification_cost(n).unwrap();
            let four_pow = BigUint::from(4u32).pow(n - 1);
            assert_eq!(r.total_lower_bound, four_pow, "n = {n}");
        }
    }

    #[test]
    fn state_bound_endpoints() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(2, 1).unwrap();
        assert_eq!(state_distance_bound(&a, &a).unwrap(), 0.0);
        assert_eq!(state_distance_bound(&a, &b).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn counts_frequencies_and_merge() {
        let a = OutcomeCounts::new(vec![3, 1]);
        assert_eq!(a.n_trials(), 4);
        let f = a.frequencies().unwrap();
        assert_eq!(f.probs(), &[0.75, 0.25]);

        let b = OutcomeCounts::new(vec![1, 3]);
        assert_eq!(a.merge(&b).unwrap().counts(), &[4, 4]);
        assert!(a.merge(&OutcomeCounts::new(vec![1])).is_err());
        assert!(OutcomeCounts::new(vec![0, 0]).frequencies().is_err());
    }

    #[test]
    fn weights_validate() {
        let c: Command = "0".parse().unwrap();
        assert!(WeightedCommandSet::new(vec![(c.clone(), 0.7)]).is_err());
        assert!(WeightedCommandSet::new(vec![(c.clone(), -1.0), (c.clone(), 2.0)]).is_err());
        assert!(WeightedCommandSet::new(vec![(c, 1.0)]).is_ok());
    }

    #[test]
    fn orthofit_two_point_antipodal() {
        let (alpha, beta) = orthogonal_perfect_fit(&dist(&[0.5, 0.5])).unwrap();
        let e = Command::empty();
        let va = alpha.state_for(&e).unwrap();
        let vb = beta.state_for(&e).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((va.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((va.amplitudes()[1].re - r).abs() < 1e-15);
        // Second model flips the sign of the lighter group.
        assert!((vb.amplitudes()[0].re - r).abs() < 1e-12);
        assert!((vb.amplitudes()[1].re + r).abs() < 1e-12);
        assert!(va.overlap_magnitude(&vb).unwrap() <= 1e-12);
    }

    #[test]
    fn orthofit_rejects_single_support() {
        let e = orthogonal_perfect_fit(&dist(&[1.0, 0.0]));
        assert!(matches!(e, Err(Error::DegenerateFrequencies(_))));
    }

    #[test]
    fn orthofit_rejects_dominant_frequency() {
        let e = orthogonal_perfect_fit(&dist(&[0.9, 0.1]));
        assert!(matches!(e, Err(Error::DegenerateFrequencies(_))));
    }

    #[test]
    fn orthofit_three_point_construction() {
        let freqs = dist(&[0.2, 0.3, 0.5]);
        let (alpha, beta) = orthogonal_perfect_fit(&freqs).unwrap();
        let e = Command::empty();
        for m in [&alpha, &beta] {
            let p = m.outcome_probabilities(&e).unwrap();
            for (got, want) in p.probs().iter().zip(freqs.probs()) {
                assert!((got - want).abs() < 1e-12);
            }
        }
        let ov = alpha
            .state_for(&e)
            .unwrap()
            .overlap_magnitude(beta.state_for(&e).unwrap())
            .unwrap();
        assert!(ov <= 1e-10, "overlap {ov}");
    }
}

//! Seeded, reproducible sampling and random-object generation.
//!
//! All randomness flows through [`RandomSource`], a (seed, stream) pair
//! backed by ChaCha8. Identical sources give bit-identical draws across
//! runs and platforms; disjoint stream ids give independent streams whose
//! tallies can be merged by addition.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::command::Command;
use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix, C64};
use crate::model::{Model, SpectralDecomposition};
use crate::stats::{OutcomeCounts, OutcomeDistribution};

/// A reproducible randomness source: a 64-bit seed plus a stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RandomSource { seed, stream_id }
    }

    /// The same seed on a different stream; streams are independent.
    pub fn stream(&self, stream_id: u64) -> Self {
        RandomSource {
            seed: self.seed,
            stream_id,
        }
    }

    /// Instantiate the generator for this source.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Draws `n_trials` i.i.d. outcomes from `dist` by inverse CDF over the
/// cumulative sums in index order; a draw landing exactly on a boundary
/// resolves to the lower index.
pub fn sample_outcomes(
    dist: &OutcomeDistribution,
    n_trials: u64,
    source: &RandomSource,
) -> OutcomeCounts {
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = source.rng();
    let mut counts = vec![0u64; dist.len()];
    let last = dist.len() - 1;
    for _ in 0..n_trials {
        let u: f64 = rng.random();
        // First index whose cumulative sum reaches u. The cap absorbs the
        // sub-TAU_PROB gap a slightly short total can leave at the top.
        let idx = cdf.partition_point(|&c| c < u).min(last);
        counts[idx] += 1;
    }
    OutcomeCounts::new(counts)
}

fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box-Muller; 1 − u keeps the log argument strictly positive.
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let (re, im) = normal_pair(rng);
    C64::new(re, im)
}

/// A random unit vector with complex Gaussian entries.
pub fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return StateVector::new(v / C64::new(norm, 0.0))
                .expect("normalized Gaussian vector is a unit vector");
        }
    }
}

/// A random unitary: Gram-Schmidt (run twice for orthogonality at the
/// 1e-14 level) applied to a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    loop {
        let m = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        if let Some(q) = gram_schmidt(&m) {
            let q = gram_schmidt(&q).expect("re-orthogonalization cannot lose rank");
            return UnitaryMatrix::new(q).expect("Gram-Schmidt output is unitary");
        }
    }
}

fn gram_schmidt(m: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let n = m.nrows();
    let mut q = m.clone();
    for j in 0..n {
        for k in 0..j {
            let proj = q.column(k).dotc(&q.column(j));
            let col_k = q.column(k).into_owned();
            let mut col_j = q.column_mut(j);
            col_j.axpy(-proj, &col_k, C64::new(1.0, 0.0));
        }
        let norm = q.column(j).norm();
        if norm < 1e-10 {
            return None; // numerically rank-deficient draw; caller retries
        }
        q.column_mut(j).unscale_mut(norm);
    }
    Some(q)
}

/// A random probability vector (normalized uniform entries).
pub fn random_distribution(dim: usize, rng: &mut ChaCha8Rng) -> OutcomeDistribution {
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let sum: f64 = raw.iter().sum();
        if sum > 1e-9 {
            return OutcomeDistribution::new(raw.iter().map(|x| x / sum).collect())
                .expect("normalized positive entries form a distribution");
        }
    }
}

/// A random observable with `n_outcomes` eigenspaces: computational-basis
/// projectors grouped round-robin, conjugated by a random unitary.
/// Eigenvalues are the outcome indices.
pub fn random_observable(
    dim: usize,
    n_outcomes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SpectralDecomposition> {
    if n_outcomes == 0 || n_outcomes > dim {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ n_outcomes ≤ dim, got {n_outcomes} outcomes at dimension {dim}"
        )));
    }
    let q = random_unitary(dim, rng);
    let mut pairs = Vec::with_capacity(n_outcomes);
    for g in 0..n_outcomes {
        let mut p = DMatrix::<C64>::zeros(dim, dim);
        for i in (g..dim).step_by(n_outcomes) {
            p[(i, i)] = C64::new(1.0, 0.0);
        }
        pairs.push((g as f64, q.conjugate_matrix(&p)));
    }
    SpectralDecomposition::new(dim, pairs)
}

/// A random model over the given commands: independent random state,
/// unitary, and observable per command.
pub fn random_model(
    dim: usize,
    commands: &[Command],
    n_outcomes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Model> {
    let mut builder = Model::builder(dim);
    for c in commands {
        builder = builder
            .command(c.clone())
            .state(c.clone(), random_state(dim, rng))
            .unitary(c.clone(), random_unitary(dim, rng))
            .observable(c.clone(), random_observable(dim, n_outcomes, rng)?);
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;

    #[test]
    fn sampling_is_deterministic_per_source() {
        let dist = OutcomeDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let s = RandomSource::new(42, 7);
        let a = sample_outcomes(&dist, 10_000, &s);
        let b = sample_outcomes(&dist, 10_000, &s);
        assert_eq!(a, b);
        let c = sample_outcomes(&dist, 10_000, &s.stream(8));
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_point_mass_lands_on_support() {
        let dist = OutcomeDistribution::new(vec![1.0, 0.0]).unwrap();
        let counts = sample_outcomes(&dist, 1000, &RandomSource::new(0, 0));
        assert_eq!(counts.counts(), &[1000, 0]);
    }

    #[test]
    fn sampling_counts_sum_to_trials() {
        let dist = OutcomeDistribution::new(vec![0.25; 4]).unwrap();
        let counts = sample_outcomes(&dist, 12_345, &RandomSource::new(3, 1));
        assert_eq!(counts.n_trials(), 12_345);
    }

    #[test]
    fn fair_coin_concentrates() {
        // Binomial(10⁶, ½): 5σ band around the mean is ±2500.
        let dist = OutcomeDistribution::new(vec![0.5, 0.5]).unwrap();
        let counts = sample_outcomes(&dist, 1_000_000, &RandomSource::new(0, 0));
        let dev = (counts.counts()[0] as i64 - 500_000).unsigned_abs();
        assert!(dev <= 2500, "deviation {dev} outside 5σ");
    }

    #[test]
    fn uniform_four_passes_chi_square() {
        let dist = OutcomeDistribution::new(vec![0.25; 4]).unwrap();
        let n = 400_000u64;
        let counts = sample_outcomes(&dist, n, &RandomSource::new(1, 0));
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .counts()
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // 99.9% quantile of chi-square with 3 degrees of freedom.
        assert!(chi2 < 16.266, "chi² = {chi2}");
    }

    #[test]
    fn stream_merge_is_order_independent() {
        let dist = OutcomeDistribution::new(vec![0.7, 0.3]).unwrap();
        let s = RandomSource::new(5, 0);
        let a = sample_outcomes(&dist, 1000, &s.stream(1));
        let b = sample_outcomes(&dist, 1000, &s.stream(2));
        assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = RandomSource::new(9, 0).rng();
        for dim in [1, 2, 3, 8, 16] {
            let u = random_unitary(dim, &mut rng);
            assert!(unitarity_residual(u.matrix()) < 1e-12);
        }
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = RandomSource::new(9, 1).rng();
        let s = random_state(16, &mut rng);
        assert!((s.amplitudes().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_observable_rejects_bad_outcome_count() {
        let mut rng = RandomSource::new(0, 0).rng();
        assert!(random_observable(2, 3, &mut rng).is_err());
        assert!(random_observable(2, 0, &mut rng).is_err());
    }
}

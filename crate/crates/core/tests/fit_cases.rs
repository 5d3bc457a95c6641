//! End-to-end fit classification: exact fits, orthogonal perfect fits that
//! diverge on held-out commands, and mimicking pairs that always travel
//! together.

mod common;

use common::rng;
use indexmap::IndexMap;
use nalgebra::DMatrix;
use qontrol::sampling::random_model;
use qontrol::{
    classify_fit, mimic_models, orthogonal_perfect_fit, Command, CountsTable, FitCase, Model,
    OutcomeCounts, OutcomeDistribution, SpectralDecomposition, StateVector, WeightedCommandSet,
    C64,
};

fn cmd(s: &str) -> Command {
    s.parse().unwrap()
}

/// Extends an orthogonal-perfect-fit model with a held-out command whose
/// observable projects onto `probe` (eigenvalue 1) and its complement
/// (eigenvalue 0).
fn extend_with_probe(model: &Model, probe_cmd: &Command, probe: &StateVector) -> Model {
    let dim = model.dimension();
    let a = probe.amplitudes();
    let mut onto = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            onto[(i, j)] = a[i] * a[j].conj();
        }
    }
    let complement = DMatrix::<C64>::identity(dim, dim) - &onto;
    let sd = SpectralDecomposition::new(dim, vec![(1.0, onto), (0.0, complement)]).unwrap();

    let base = Command::empty();
    Model::builder(dim)
        .command(base.clone())
        .command(probe_cmd.clone())
        .state(base.clone(), model.state_for(&base).unwrap().clone())
        .state(probe_cmd.clone(), model.state_for(&base).unwrap().clone())
        .unitary(probe_cmd.clone(), qontrol::UnitaryMatrix::identity(dim))
        .observable(base.clone(), model.observable_for(&base).unwrap().clone())
        .observable(probe_cmd.clone(), sd)
        .build()
        .unwrap()
}

#[test]
fn orthogonal_pair_fits_data_but_diverges_on_probe() {
    // Both constructions reproduce the recorded frequencies exactly, so
    // both land inside any reasonable eps. A probe observable aligned with
    // the first model's state separates them maximally, pushing the
    // pairwise spread past the cap: the candidate set is "too big".
    let freqs = OutcomeDistribution::new(vec![0.25, 0.25, 0.5]).unwrap();
    let (alpha, beta) = orthogonal_perfect_fit(&freqs).unwrap();

    let base = Command::empty();
    let probe_cmd = cmd("1");
    let probe_state = alpha.state_for(&base).unwrap().clone();
    let alpha_ext = extend_with_probe(&alpha, &probe_cmd, &probe_state);
    let beta_ext = extend_with_probe(&beta, &probe_cmd, &probe_state);

    let mut data = CountsTable::new();
    data.insert(base.clone(), OutcomeCounts::new(vec![250, 250, 500]));
    let w = WeightedCommandSet::uniform(&[base.clone()]).unwrap();

    let eval = vec![base.clone(), probe_cmd.clone()];
    let report = classify_fit(
        &[alpha_ext, beta_ext],
        &data,
        &w,
        1e-6,
        0.1,
        Some(&eval),
    )
    .unwrap();

    assert_eq!(report.within_eps.len(), 2, "both fit the recorded data");
    // The probe sends one model to (1, 0) and the orthogonal one to (0, 1):
    // distance π/2 on the probe, halved by the uniform weighting.
    assert!(
        report.pairwise_spread > std::f64::consts::FRAC_PI_4 - 1e-9,
        "spread {} too small",
        report.pairwise_spread
    );
    assert_eq!(report.case, FitCase::TooBig);
}

#[test]
fn mimicking_pair_always_lands_together() {
    let commands = [cmd("0"), cmd("1")];
    for seed in 0..5 {
        let mut rng = rng(900 + seed, 0);
        let model = random_model(2, &commands, 2, &mut rng).unwrap();
        let w: IndexMap<Command, StateVector> = commands
            .iter()
            .map(|b| (b.clone(), StateVector::basis(2, 0).unwrap()))
            .collect();
        let w_perp: IndexMap<Command, StateVector> = commands
            .iter()
            .map(|b| (b.clone(), StateVector::basis(2, 1).unwrap()))
            .collect();
        let (m1, m2) = mimic_models(&model, &w, &w_perp).unwrap();

        // Any data over B keeps the pair's distances equal: probability-
        // identical models fit or fail together.
        let mut data = CountsTable::new();
        for b in &commands {
            let counts = qontrol::sample_outcomes(
                &model.outcome_probabilities(b).unwrap(),
                500,
                &qontrol::RandomSource::new(seed, 7),
            );
            data.insert(b.clone(), counts);
        }
        let weights = WeightedCommandSet::uniform(&commands).unwrap();
        for eps in [1e-3, 0.05, 0.3, 1.0] {
            let report =
                classify_fit(&[m1.clone(), m2.clone()], &data, &weights, eps, 10.0, None).unwrap();
            assert!(
                report.within_eps.len() % 2 == 0,
                "seed {seed}, eps {eps}: pair separated"
            );
        }
    }
}

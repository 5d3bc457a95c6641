//! `qontrol` — command-addressed quantum models and what it costs to pin
//! them down.
//!
//! A classical controller drives laboratory instruments with finite binary
//! commands; a quantum-mechanical model of the instruments maps each
//! command to a preparation state, a unitary, and an observable, and
//! predicts outcome probabilities per command. This crate simulates such
//! models exactly at small dimension and quantifies how hard it is to tell
//! rival models apart:
//!
//! - [`model`]: command-indexed models, unitary equivalence, identity-form
//!   reduction, and orthogonal mimicking models on a doubled space.
//! - [`linalg`] / [`sampling`]: the dense statevector engine, the spectral
//!   norm, and seeded reproducible outcome sampling.
//! - [`stats`]: the statistical distance between outcome distributions,
//!   distinguishability thresholds, sample-size lower bounds, and the
//!   orthogonal perfect-fit construction.
//! - [`grover`]: exact quantum search next to its perturbed variant, where
//!   an operator error of `2^{1−n/2}` stalls the search completely.
//! - [`timing`]: controller timing-precision bounds and the mistimed-NOT
//!   demonstration.
//! - [`grid`]: ε-grid cardinality bounds on SU(N) and the hopelessness of
//!   blind command refinement.
//! - [`lattice`]: property filtering over sets of models and fit
//!   classification against recorded data.
//! - [`io`]: the model/counts/report file formats.

pub mod command;
pub mod error;
pub mod grid;
pub mod grover;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod sampling;
pub mod stats;
pub mod timing;
pub mod tol;

pub use command::{Command, CommandSet, FactoredCommand};
pub use error::{Error, Result};
pub use grid::{blind_search_verdict, grid_point_lower_bound, su_dimension, GridBound, GridQuery};
pub use grover::{SearchInstance, SearchResult};
pub use lattice::{classify_fit, filter_models, FitCase, FitReport, PropertyPredicate};
pub use linalg::{apply_unitary, spectral_norm, StateVector, UnitaryMatrix, C64};
pub use model::{
    check_unitary_equivalence, compose_unitary, mimic_models, reduce_to_identity_form,
    EquivalenceWitness, Model, SpectralDecomposition,
};
pub use sampling::{sample_outcomes, RandomSource};
pub use stats::{
    distinguishable, min_sample_size, orthogonal_perfect_fit, state_distance_bound,
    verification_cost, weighted_model_distance, wootters_distance, BoundReport, CountsTable,
    OutcomeCounts, OutcomeDistribution, OutcomeSource, WeightedCommandSet,
};
pub use timing::{
    max_relative_timing_error, maser_feasible, search_timing_bound, simulate_mistimed_not,
    TimingBudget,
};

//! Command-indexed quantum models.
//!
//! A [`Model`] is a triple of finite maps from commands to a preparation
//! state, a unitary, and a spectrally decomposed observable, together with
//! the session's command set `B`. It predicts, for every command, a
//! probability distribution over measurement outcomes:
//!
//! ```text
//! Pr(j|b) = ⟨v(b)| U†(b) M_j(b) U(b) |v(b)⟩
//! ```
//!
//! Outcome indices are canonical: a [`SpectralDecomposition`] sorts its
//! eigenvalues ascending (merging any closer than
//! [`EIGENVALUE_MERGE`](crate::tol::EIGENVALUE_MERGE)), so index `j` means
//! "the j-th smallest eigenvalue" everywhere, and distributions from
//! different models align by sorted eigenvalue.
//!
//! Unitary lookups fall back to the concatenation rule
//! `U(b₁‖b₂) = U(b₂)U(b₁)` when a command is not in the table but splits
//! into known parts; the empty command is always the identity. State and
//! observable lookups are exact table lookups.
//!
//! Models are immutable after construction and all operations are pure, so
//! evaluation parallelizes freely across commands.

use indexmap::IndexMap;
use nalgebra::DMatrix;

use crate::command::{Command, CommandSet, FactoredCommand};
use crate::error::{Error, Result};
use crate::linalg::{
    apply_unitary, hermiticity_residual, max_abs_diff, StateVector, UnitaryMatrix, C64,
};
use crate::stats::{OutcomeDistribution, OutcomeSource};
use crate::tol::{EIGENVALUE_MERGE, MAX_DIMENSION, TAU_PROJ, TAU_UNIT};

/// An observable written as `Σ_j m_j M_j` with orthogonal projectors onto
/// eigenspaces.
///
/// Construction sorts eigenvalues ascending, merges eigenvalues closer
/// than [`EIGENVALUE_MERGE`] (summing their projectors), and validates
/// hermiticity, idempotency, mutual orthogonality, and completeness
/// `Σ_j M_j = 1` within [`TAU_PROJ`]. Completeness is what makes the
/// outcome probabilities a full distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<DMatrix<C64>>,
}

impl SpectralDecomposition {
    pub fn new(dim: usize, pairs: Vec<(f64, DMatrix<C64>)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDecomposition("no eigenspaces".into()));
        }
        for (m, p) in &pairs {
            if !m.is_finite() {
                return Err(Error::InvalidDecomposition(format!(
                    "eigenvalue {m} is not finite"
                )));
            }
            if p.nrows() != dim || p.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.nrows().max(p.ncols()),
                });
            }
        }

        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        // Merge near-equal eigenvalues into a single eigenspace.
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut projectors: Vec<DMatrix<C64>> = Vec::new();
        let mut cluster: Vec<f64> = Vec::new();
        for (m, p) in pairs {
            match cluster.last() {
                Some(&prev) if m - prev <= EIGENVALUE_MERGE => {
                    cluster.push(m);
                    *projectors.last_mut().unwrap() += p;
                    *eigenvalues.last_mut().unwrap() =
                        cluster.iter().sum::<f64>() / cluster.len() as f64;
                }
                _ => {
                    cluster = vec![m];
                    eigenvalues.push(m);
                    projectors.push(p);
                }
            }
        }

        for (j, p) in projectors.iter().enumerate() {
            let herm = hermiticity_residual(p);
            if herm > TAU_PROJ {
                return Err(Error::InvalidDecomposition(format!(
                    "projector {j} is not hermitian (residual {herm:.3e})"
                )));
            }
            for (k, q) in projectors.iter().enumerate() {
                let prod = p * q;
                let expect = if j == k { p.clone() } else { DMatrix::zeros(dim, dim) };
                let res = max_abs_diff(&prod, &expect);
                if res > TAU_PROJ {
                    return Err(Error::InvalidDecomposition(format!(
                        "M_{j} M_{k} ≠ δ_{{{j}{k}}} M_{j} (residual {res:.3e})"
                    )));
                }
            }
        }
        let mut sum = DMatrix::<C64>::zeros(dim, dim);
        for p in &projectors {
            sum += p;
        }
        let comp = max_abs_diff(&sum, &DMatrix::identity(dim, dim));
        if comp > TAU_PROJ {
            return Err(Error::InvalidDecomposition(format!(
                "projectors do not sum to the identity (residual {comp:.3e})"
            )));
        }

        Ok(SpectralDecomposition {
            dim,
            eigenvalues,
            projectors,
        })
    }

    /// The nondegenerate measurement diagonal in the computational basis,
    /// with eigenvalue `j` for basis state `|j⟩`.
    pub fn computational_basis(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDecomposition("dimension 0".into()));
        }
        let pairs = (0..dim)
            .map(|j| {
                let mut p = DMatrix::<C64>::zeros(dim, dim);
                p[(j, j)] = C64::new(1.0, 0.0);
                (j as f64, p)
            })
            .collect();
        Self::new(dim, pairs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Projectors aligned with [`Self::eigenvalues`].
    pub fn projectors(&self) -> &[DMatrix<C64>] {
        &self.projectors
    }

    /// The observable `Σ_j m_j M_j`.
    pub fn observable(&self) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (ev, p) in self.eigenvalues.iter().zip(&self.projectors) {
            m += p * C64::new(*ev, 0.0);
        }
        m
    }

    /// Conjugation by a unitary: same eigenvalues, projectors `Q M_j Q†`.
    pub fn conjugated(&self, q: &UnitaryMatrix) -> Result<Self> {
        if q.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.dim(),
            });
        }
        Self::new(
            self.dim,
            self.eigenvalues
                .iter()
                .zip(&self.projectors)
                .map(|(ev, p)| (*ev, q.conjugate_matrix(p)))
                .collect(),
        )
    }

    /// Extension to a product space: projectors `M_j ⊗ 1`, eigenvalues
    /// unchanged.
    pub fn tensor_with_identity(&self, extra_dim: usize) -> Result<Self> {
        let id = DMatrix::<C64>::identity(extra_dim, extra_dim);
        Self::new(
            self.dim * extra_dim,
            self.eigenvalues
                .iter()
                .zip(&self.projectors)
                .map(|(ev, p)| (*ev, p.kronecker(&id)))
                .collect(),
        )
    }

    /// Whether the two decompositions agree eigenspace by eigenspace
    /// within `tol` on projectors and [`EIGENVALUE_MERGE`] on eigenvalues.
    pub fn approx_eq(&self, other: &SpectralDecomposition, tol: f64) -> bool {
        self.dim == other.dim
            && self.n_outcomes() == other.n_outcomes()
            && self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .all(|(a, b)| (a - b).abs() <= EIGENVALUE_MERGE)
            && self
                .projectors
                .iter()
                .zip(&other.projectors)
                .all(|(p, q)| max_abs_diff(p, q) <= tol)
    }
}

/// A command-indexed family of unitaries `Q` witnessing that two models
/// are unitarily equivalent.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    q_map: IndexMap<Command, UnitaryMatrix>,
}

impl EquivalenceWitness {
    pub fn new(q_map: IndexMap<Command, UnitaryMatrix>) -> Self {
        EquivalenceWitness { q_map }
    }

    /// The same unitary for every command.
    pub fn constant(commands: &CommandSet, q: UnitaryMatrix) -> Self {
        EquivalenceWitness {
            q_map: commands.iter().map(|c| (c.clone(), q.clone())).collect(),
        }
    }

    pub fn get(&self, command: &Command) -> Result<&UnitaryMatrix> {
        self.q_map
            .get(command)
            .ok_or_else(|| Error::UnknownCommand(command.clone()))
    }
}

/// A quantum-mechanical model of commanded instruments: maps from commands
/// to states, unitaries, and observables over one Hilbert space, plus an
/// optional duration per evolution command.
#[derive(Debug, Clone)]
pub struct Model {
    dimension: usize,
    commands: CommandSet,
    states: IndexMap<Command, StateVector>,
    unitaries: IndexMap<Command, UnitaryMatrix>,
    observables: IndexMap<Command, SpectralDecomposition>,
    durations: IndexMap<Command, f64>,
}

impl Model {
    pub fn builder(dimension: usize) -> ModelBuilder {
        ModelBuilder {
            dimension,
            commands: CommandSet::new(),
            states: IndexMap::new(),
            unitaries: IndexMap::new(),
            observables: IndexMap::new(),
            durations: IndexMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The session command set `B`.
    pub fn commands(&self) -> &CommandSet {
        &self.commands
    }

    pub fn state_for(&self, b: &Command) -> Result<&StateVector> {
        self.states
            .get(b)
            .ok_or_else(|| Error::UnknownCommand(b.clone()))
    }

    pub fn observable_for(&self, b: &Command) -> Result<&SpectralDecomposition> {
        self.observables
            .get(b)
            .ok_or_else(|| Error::UnknownCommand(b.clone()))
    }

    /// Stored duration of the evolution commanded by `b`, if any. Durations
    /// are recorded per table entry and never composed across concatenation.
    pub fn duration_for(&self, b: &Command) -> Option<f64> {
        self.durations.get(b).copied()
    }

    pub fn states(&self) -> &IndexMap<Command, StateVector> {
        &self.states
    }

    pub fn unitaries(&self) -> &IndexMap<Command, UnitaryMatrix> {
        &self.unitaries
    }

    pub fn observables(&self) -> &IndexMap<Command, SpectralDecomposition> {
        &self.observables
    }

    pub fn durations(&self) -> &IndexMap<Command, f64> {
        &self.durations
    }

    /// Looks up `U(b)`, falling back to the concatenation rule
    /// `U(b₁‖b₂) = U(b₂)U(b₁)` for commands that split into known parts.
    /// The empty command is the identity. Among multiple decompositions the
    /// longest known prefix wins, with backtracking.
    pub fn resolve_unitary(&self, b: &Command) -> Result<UnitaryMatrix> {
        if b.is_empty() {
            return Ok(UnitaryMatrix::identity(self.dimension));
        }
        if let Some(u) = self.unitaries.get(b) {
            return Ok(u.clone());
        }
        for split in (1..b.len()).rev() {
            let (prefix, suffix) = b.split_at(split);
            if let Some(u_prefix) = self.unitaries.get(&prefix) {
                if let Ok(u_suffix) = self.resolve_unitary(&suffix) {
                    return u_suffix.compose(u_prefix);
                }
            }
        }
        Err(Error::UnknownCommand(b.clone()))
    }

    /// `Pr(j|b) = ⟨v(b)|U†(b) M_j(b) U(b)|v(b)⟩` for `b ∈ B`, indexed by
    /// ascending eigenvalue.
    pub fn outcome_probabilities(&self, b: &Command) -> Result<OutcomeDistribution> {
        if !self.commands.contains(b) {
            return Err(Error::UnknownCommand(b.clone()));
        }
        let v = self.state_for(b)?;
        let u = self.resolve_unitary(b)?;
        let sd = self.observable_for(b)?;
        let evolved = apply_unitary(&u, v)?;
        probabilities_of(&evolved, sd)
    }

    /// The factored form `⟨v(b_v)|U†(b_U) M_j(b_M) U(b_U)|v(b_v)⟩`; each
    /// sub-command is looked up in its own map.
    pub fn outcome_probabilities_factored(
        &self,
        f: &FactoredCommand,
    ) -> Result<OutcomeDistribution> {
        let v = self.state_for(&f.b_v)?;
        let u = self.resolve_unitary(&f.b_u)?;
        let sd = self.observable_for(&f.b_m)?;
        let evolved = apply_unitary(&u, v)?;
        probabilities_of(&evolved, sd)
    }

    /// Builds the unitarily equivalent model with every map conjugated by
    /// the witness: `v ↦ Qv`, `U ↦ QUQ†`, `M_j ↦ QM_jQ†`. Tables are
    /// restricted to `B`.
    pub fn conjugate(&self, w: &EquivalenceWitness) -> Result<Model> {
        let mut builder = Model::builder(self.dimension);
        for b in &self.commands {
            let q = w.get(b)?;
            if q.dim() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    got: q.dim(),
                });
            }
            let state = apply_unitary(q, self.state_for(b)?)?;
            // QUQ† is unitary by construction.
            let unitary =
                UnitaryMatrix::from_trusted(q.conjugate_matrix(self.resolve_unitary(b)?.matrix()));
            let observable = self.observable_for(b)?.conjugated(q)?;
            builder = builder
                .command(b.clone())
                .state(b.clone(), state)
                .unitary(b.clone(), unitary)
                .observable(b.clone(), observable);
            if let Some(t) = self.duration_for(b) {
                builder = builder.duration(b.clone(), t);
            }
        }
        builder.build()
    }
}

impl OutcomeSource for Model {
    fn outcome_distribution(&self, command: &Command) -> Result<OutcomeDistribution> {
        self.outcome_probabilities(command)
    }

    fn spectrum(&self, command: &Command) -> Option<Vec<f64>> {
        self.observables.get(command).map(|sd| sd.eigenvalues().to_vec())
    }
}

fn probabilities_of(state: &StateVector, sd: &SpectralDecomposition) -> Result<OutcomeDistribution> {
    if sd.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: sd.dim(),
        });
    }
    let probs = sd
        .projectors()
        .iter()
        .map(|p| state.amplitudes().dotc(&(p * state.amplitudes())).re)
        .collect();
    OutcomeDistribution::new(probs)
}

/// Incremental [`Model`] construction; `build` validates every invariant.
#[derive(Debug)]
pub struct ModelBuilder {
    dimension: usize,
    commands: CommandSet,
    states: IndexMap<Command, StateVector>,
    unitaries: IndexMap<Command, UnitaryMatrix>,
    observables: IndexMap<Command, SpectralDecomposition>,
    durations: IndexMap<Command, f64>,
}

impl ModelBuilder {
    /// Adds `b` to the session command set `B`.
    pub fn command(mut self, b: Command) -> Self {
        self.commands.insert(b);
        self
    }

    pub fn commands<I: IntoIterator<Item = Command>>(mut self, iter: I) -> Self {
        for b in iter {
            self.commands.insert(b);
        }
        self
    }

    pub fn state(mut self, b: Command, v: StateVector) -> Self {
        self.states.insert(b, v);
        self
    }

    pub fn unitary(mut self, b: Command, u: UnitaryMatrix) -> Self {
        self.unitaries.insert(b, u);
        self
    }

    pub fn observable(mut self, b: Command, sd: SpectralDecomposition) -> Self {
        self.observables.insert(b, sd);
        self
    }

    pub fn duration(mut self, b: Command, seconds: f64) -> Self {
        self.durations.insert(b, seconds);
        self
    }

    /// Validates dimensions, durations, and that every command of `B` has
    /// a state, an observable, and a resolvable unitary. When no command
    /// set was given explicitly, `B` defaults to the state map's keys.
    pub fn build(mut self) -> Result<Model> {
        if self.dimension == 0 || self.dimension > MAX_DIMENSION {
            return Err(Error::InvalidArgument(format!(
                "dimension must be in 1..={MAX_DIMENSION}, got {}",
                self.dimension
            )));
        }
        if self.commands.is_empty() {
            self.commands = self.states.keys().cloned().collect();
        }
        if self.commands.is_empty() {
            return Err(Error::InvalidArgument(
                "model has an empty command set".into(),
            ));
        }
        for (b, v) in &self.states {
            if v.dim() != self.dimension {
                return Err(Error::FileFormat(format!(
                    "state for command `{b}` has dimension {}, expected {}",
                    v.dim(),
                    self.dimension
                )));
            }
        }
        for (b, u) in &self.unitaries {
            if u.dim() != self.dimension {
                return Err(Error::FileFormat(format!(
                    "unitary for command `{b}` has dimension {}, expected {}",
                    u.dim(),
                    self.dimension
                )));
            }
        }
        for (b, sd) in &self.observables {
            if sd.dim() != self.dimension {
                return Err(Error::FileFormat(format!(
                    "observable for command `{b}` has dimension {}, expected {}",
                    sd.dim(),
                    self.dimension
                )));
            }
        }
        for (b, t) in &self.durations {
            if !t.is_finite() || *t <= 0.0 {
                return Err(Error::FileFormat(format!(
                    "duration for command `{b}` must be a positive number of seconds, got {t}"
                )));
            }
        }

        let model = Model {
            dimension: self.dimension,
            commands: self.commands,
            states: self.states,
            unitaries: self.unitaries,
            observables: self.observables,
            durations: self.durations,
        };
        for b in &model.commands {
            model.state_for(b)?;
            model.observable_for(b)?;
            model.resolve_unitary(b)?;
        }
        Ok(model)
    }
}

/// `U(b₁‖b₂) = U(b₂) U(b₁)` — note the order reversal: the earlier part of
/// the command acts first.
pub fn compose_unitary(model: &Model, b1: &Command, b2: &Command) -> Result<UnitaryMatrix> {
    let u1 = model.resolve_unitary(b1)?;
    let u2 = model.resolve_unitary(b2)?;
    u2.compose(&u1)
}

/// Rewrites a model into the form with identity evolution: the state map
/// becomes `b ↦ U(b)|v(b)⟩` and the observables are untouched, so every
/// outcome distribution is preserved. Tables are restricted to `B`.
pub fn reduce_to_identity_form(model: &Model) -> Result<Model> {
    let mut builder = Model::builder(model.dimension);
    for b in model.commands() {
        let u = model.resolve_unitary(b)?;
        let state = apply_unitary(&u, model.state_for(b)?)?;
        builder = builder
            .command(b.clone())
            .state(b.clone(), state)
            .unitary(b.clone(), UnitaryMatrix::identity(model.dimension))
            .observable(b.clone(), model.observable_for(b)?.clone());
        if let Some(t) = model.duration_for(b) {
            builder = builder.duration(b.clone(), t);
        }
    }
    builder.build()
}

/// Whether `w` witnesses unitary equivalence of the two models: for every
/// `b ∈ B`, `v_β = Q v_α`, `U_β = Q U_α Q†`, and `M_β = Q M_α Q†`, all
/// within [`TAU_UNIT`].
pub fn check_unitary_equivalence(
    alpha: &Model,
    beta: &Model,
    w: &EquivalenceWitness,
) -> Result<bool> {
    if alpha.dimension != beta.dimension {
        return Err(Error::DimensionMismatch {
            expected: alpha.dimension,
            got: beta.dimension,
        });
    }
    if !alpha.commands.same_set(&beta.commands) {
        return Err(Error::CommandSetMismatch(
            "models do not share a command set".into(),
        ));
    }
    for b in &alpha.commands {
        let q = w.get(b)?;
        if q.dim() != alpha.dimension {
            return Err(Error::DimensionMismatch {
                expected: alpha.dimension,
                got: q.dim(),
            });
        }

        let mapped_state = apply_unitary(q, alpha.state_for(b)?)?;
        let diff = (beta.state_for(b)?.amplitudes() - mapped_state.amplitudes()).norm();
        if diff > TAU_UNIT {
            return Ok(false);
        }

        let mapped_u = q.conjugate_matrix(alpha.resolve_unitary(b)?.matrix());
        if max_abs_diff(beta.resolve_unitary(b)?.matrix(), &mapped_u) > TAU_UNIT {
            return Ok(false);
        }

        let mapped_obs = alpha.observable_for(b)?.conjugated(q)?;
        if !beta.observable_for(b)?.approx_eq(&mapped_obs, TAU_UNIT) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two mutually orthogonal models on the doubled space `𝓗 ⊗ 𝓗` that both
/// reproduce the input model's probabilities for every command.
///
/// The state maps are `v(b) ⊗ w(b)` and `v(b) ⊗ w_perp(b)`; unitaries
/// become `U(b) ⊗ 1` and observables keep their eigenvalues with
/// projectors `M_j ⊗ 1`. The maps `w` and `w_perp` must share a domain
/// that covers `B` and be pointwise orthogonal unit vectors in `𝓗`.
pub fn mimic_models(
    model: &Model,
    w: &IndexMap<Command, StateVector>,
    w_perp: &IndexMap<Command, StateVector>,
) -> Result<(Model, Model)> {
    if w.len() != w_perp.len() || w.keys().any(|b| !w_perp.contains_key(b)) {
        return Err(Error::CommandSetMismatch(
            "w and w_perp must be defined on the same commands".into(),
        ));
    }
    for b in model.commands() {
        if !w.contains_key(b) {
            return Err(Error::CommandSetMismatch(format!(
                "w does not cover command `{b}` of the model"
            )));
        }
    }

    let dim = model.dimension();
    let mut alpha = Model::builder(dim * dim);
    let mut beta = Model::builder(dim * dim);
    for (b, wb) in w {
        let wp = &w_perp[b];
        if wb.dim() != dim || wp.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: if wb.dim() != dim { wb.dim() } else { wp.dim() },
            });
        }
        let overlap = wb.overlap_magnitude(wp)?;
        if overlap > TAU_UNIT {
            return Err(Error::InvalidArgument(format!(
                "w and w_perp are not orthogonal at command `{b}`: |⟨w|w_perp⟩| = {overlap:.3e}"
            )));
        }

        let v = model.state_for(b)?;
        let u = model.resolve_unitary(b)?.tensor(&UnitaryMatrix::identity(dim));
        let obs = model.observable_for(b)?.tensor_with_identity(dim)?;

        alpha = alpha
            .command(b.clone())
            .state(b.clone(), v.tensor(wb))
            .unitary(b.clone(), u.clone())
            .observable(b.clone(), obs.clone());
        beta = beta
            .command(b.clone())
            .state(b.clone(), v.tensor(wp))
            .unitary(b.clone(), u)
            .observable(b.clone(), obs);
        if let Some(t) = model.duration_for(b) {
            alpha = alpha.duration(b.clone(), t);
            beta = beta.duration(b.clone(), t);
        }
    }
    Ok((alpha.build()?, beta.build()?))
}

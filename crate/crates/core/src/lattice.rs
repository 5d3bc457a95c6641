//! Navigating a lattice of models: property filters and fit
//! classification.
//!
//! Subsets of a model set form a lattice under intersection; each decidable
//! property carves out a subset, and imposing several properties at once is
//! the lattice meet, i.e. sequential filtering. Against recorded data, the
//! surviving models fall into one of three cases: none fit (`NoFit`),
//! several fit but disagree in their predictions (`TooBig`), or the fitting
//! models agree (`Good`).
//!
//! Models close to the fitted data are not necessarily close to each other
//! elsewhere, so the pairwise spread is measured over an evaluation command
//! set (defaulting to the data's commands, uniformly weighted) that may
//! deliberately extend beyond the fitted commands. Both the fit radius
//! `eps` and the `spread_cap` are caller conventions; no threshold is
//! implied by the underlying theory.

use crate::command::Command;
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::model::{compose_unitary, Model};
use crate::stats::{weighted_model_distance, CountsTable, WeightedCommandSet};
use crate::tol::{TAU_PROJ, TAU_UNIT};

/// A named, decidable, side-effect-free test of a model.
pub struct PropertyPredicate {
    name: String,
    test: Box<dyn Fn(&Model) -> bool + Send + Sync>,
}

impl PropertyPredicate {
    pub fn new<F>(name: impl Into<String>, test: F) -> Self
    where
        F: Fn(&Model) -> bool + Send + Sync + 'static,
    {
        PropertyPredicate {
            name: name.into(),
            test: Box::new(test),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn test(&self, model: &Model) -> bool {
        (self.test)(model)
    }
}

impl std::fmt::Debug for PropertyPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PropertyPredicate")
            .field("name", &self.name)
            .finish()
    }
}

/// Looks up one of the built-in predicates by name:
///
/// - `identity-evolution`: every command of `B` resolves to the identity
///   unitary.
/// - `respects-concatenation`: wherever a concatenation of two tabled
///   commands is itself tabled, the table agrees with the composition rule.
/// - `diagonal-observables`: every observable is diagonal in the
///   computational basis.
/// - `factorable`: every command of `B` splits as `b_v‖b_U‖b_M` with each
///   part known to its respective map.
pub fn builtin_predicate(name: &str) -> Option<PropertyPredicate> {
    match name {
        "identity-evolution" => Some(PropertyPredicate::new(name, |m: &Model| {
            m.commands().iter().all(|b| match m.resolve_unitary(b) {
                Ok(u) => {
                    let id = nalgebra::DMatrix::identity(m.dimension(), m.dimension());
                    max_abs_diff(u.matrix(), &id) <= TAU_UNIT
                }
                Err(_) => false,
            })
        })),
        "respects-concatenation" => Some(PropertyPredicate::new(name, |m: &Model| {
            let keys: Vec<Command> = m.unitaries().keys().cloned().collect();
            keys.iter().all(|b1| {
                keys.iter().all(|b2| {
                    let joined = b1.concat(b2);
                    match m.unitaries().get(&joined) {
                        None => true,
                        Some(u) => match compose_unitary(m, b1, b2) {
                            Ok(composed) => {
                                max_abs_diff(u.matrix(), composed.matrix()) <= TAU_UNIT
                            }
                            Err(_) => false,
                        },
                    }
                })
            })
        })),
        "diagonal-observables" => Some(PropertyPredicate::new(name, |m: &Model| {
            m.observables().values().all(|sd| {
                sd.projectors().iter().all(|p| {
                    p.row_iter().enumerate().all(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .all(|(j, z)| i == j || z.norm() <= TAU_PROJ)
                    })
                })
            })
        })),
        "factorable" => Some(PropertyPredicate::new(name, |m: &Model| {
            m.commands().iter().all(|b| {
                let n = b.len();
                (0..=n).any(|i| {
                    let (b_v, rest) = b.split_at(i);
                    if !m.states().contains_key(&b_v) {
                        return false;
                    }
                    (0..=rest.len()).any(|j| {
                        let (b_u, b_m) = rest.split_at(j);
                        m.observables().contains_key(&b_m) && m.resolve_unitary(&b_u).is_ok()
                    })
                })
            })
        })),
        _ => None,
    }
}

/// Models passing every predicate, in their original order: the meet of
/// the property subsets.
pub fn filter_models<'a>(models: &'a [Model], props: &[PropertyPredicate]) -> Vec<&'a Model> {
    models
        .iter()
        .filter(|m| props.iter().all(|p| p.test(m)))
        .collect()
}

/// Which of the three exploration cases the fitting set landed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitCase {
    /// Models fit but disagree in their predictions: guess more properties.
    TooBig,
    /// Nothing fits: drop a property.
    NoFit,
    /// Fitting models agree: adopt one.
    Good,
}

impl std::fmt::Display for FitCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitCase::TooBig => "too-big",
            FitCase::NoFit => "no-fit",
            FitCase::Good => "good",
        })
    }
}

/// One model's distance to the data, for models inside the fit radius.
#[derive(Debug, Clone, PartialEq)]
pub struct FitEntry {
    /// Index into the candidate list handed to [`classify_fit`].
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Candidates within `eps` of the data, in input order.
    pub within_eps: Vec<FitEntry>,
    /// Largest pairwise weighted distance between fitting models over the
    /// evaluation command set; 0 with fewer than two fitting models.
    pub pairwise_spread: f64,
    pub case: FitCase,
}

/// Classifies candidate models against recorded frequencies.
///
/// Each model's weighted distance to the data decides membership in the
/// fitting set (`≤ eps`). The fitting models' pairwise spread is measured
/// with uniform weights over `eval_commands` (the data's command set when
/// `None`); a spread above `spread_cap` means the candidate set is still
/// too big.
pub fn classify_fit(
    models: &[Model],
    data: &CountsTable,
    w: &WeightedCommandSet,
    eps: f64,
    spread_cap: f64,
    eval_commands: Option<&[Command]>,
) -> Result<FitReport> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if !spread_cap.is_finite() || spread_cap <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "spread_cap must be positive, got {spread_cap}"
        )));
    }

    let mut within_eps = Vec::new();
    for (index, model) in models.iter().enumerate() {
        let distance = weighted_model_distance(model, data, w)?;
        if distance <= eps {
            within_eps.push(FitEntry { index, distance });
        }
    }

    let mut pairwise_spread = 0.0f64;
    if within_eps.len() >= 2 {
        let eval: Vec<Command> = match eval_commands {
            Some(cmds) => cmds.to_vec(),
            None => data.commands(),
        };
        let eval_w = WeightedCommandSet::uniform(&eval)?;
        for (i, a) in within_eps.iter().enumerate() {
            for b in &within_eps[i + 1..] {
                let d = weighted_model_distance(&models[a.index], &models[b.index], &eval_w)?;
                pairwise_spread = pairwise_spread.max(d);
            }
        }
    }

    let case = if within_eps.is_empty() {
        FitCase::NoFit
    } else if pairwise_spread > spread_cap {
        FitCase::TooBig
    } else {
        FitCase::Good
    };

    Ok(FitReport {
        within_eps,
        pairwise_spread,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, StateVector, UnitaryMatrix};
    use crate::model::SpectralDecomposition;
    use crate::stats::OutcomeCounts;

    fn cmd(s: &str) -> Command {
        s.parse().unwrap()
    }

    fn basis_model(dim: usize, index: usize, b: &Command) -> Model {
        Model::builder(dim)
            .command(b.clone())
            .state(b.clone(), StateVector::basis(dim, index).unwrap())
            .unitary(b.clone(), UnitaryMatrix::identity(dim))
            .observable(b.clone(), SpectralDecomposition::computational_basis(dim).unwrap())
            .build()
            .unwrap()
    }

    #[test]
    fn empty_property_list_is_top_of_lattice() {
        let models = vec![basis_model(2, 0, &cmd("0")), basis_model(2, 1, &cmd("0"))];
        assert_eq!(filter_models(&models, &[]).len(), 2);
    }

    #[test]
    fn always_false_is_bottom() {
        let models = vec![basis_model(2, 0, &cmd("0"))];
        let bottom = PropertyPredicate::new("never", |_| false);
        assert!(filter_models(&models, &[bottom]).is_empty());
    }

    #[test]
    fn meet_equals_sequential_filtering() {
        let models = vec![
            basis_model(2, 0, &cmd("0")),
            basis_model(2, 1, &cmd("0")),
            basis_model(4, 2, &cmd("0")),
        ];
        let p1 = || PropertyPredicate::new("dim-2", |m: &Model| m.dimension() == 2);
        let p2 = || {
            PropertyPredicate::new("starts-at-zero", |m: &Model| {
                m.commands().iter().all(|b| {
                    m.state_for(b)
                        .map(|v| v.amplitudes()[0].norm() > 0.5)
                        .unwrap_or(false)
                })
            })
        };
        let both = filter_models(&models, &[p1(), p2()]);
        let seq_first = filter_models(&models, &[p1()]);
        let seq: Vec<&Model> = seq_first
            .into_iter()
            .filter(|m| p2().test(m))
            .collect();
        assert_eq!(both.len(), seq.len());
        assert_eq!(both.len(), 1);
    }

    #[test]
    fn factorable_predicate_separates_fixtures() {
        // Factored tables: state at "0", unitary at "1", observable at "1".
        let factored = Model::builder(2)
            .command(cmd("011"))
            .state(cmd("011"), StateVector::basis(2, 0).unwrap())
            .state(cmd("0"), StateVector::basis(2, 0).unwrap())
            .unitary(cmd("011"), pauli_x())
            .unitary(cmd("1"), pauli_x())
            .observable(cmd("011"), SpectralDecomposition::computational_basis(2).unwrap())
            .observable(cmd("1"), SpectralDecomposition::computational_basis(2).unwrap())
            .build()
            .unwrap();
        // Opaque single-command model: nothing splits.
        let opaque = Model::builder(2)
            .command(cmd("011"))
            .state(cmd("011"), StateVector::basis(2, 0).unwrap())
            .unitary(cmd("011"), pauli_x())
            .observable(cmd("011"), SpectralDecomposition::computational_basis(2).unwrap())
            .build()
            .unwrap();

        let models = vec![factored, opaque];
        let kept = filter_models(&models, &[builtin_predicate("factorable").unwrap()]);
        assert_eq!(kept.len(), 1);
        assert!(std::ptr::eq(kept[0], &models[0]));
    }

    #[test]
    fn builtin_identity_evolution() {
        let id_model = basis_model(2, 0, &cmd("0"));
        let flip_model = Model::builder(2)
            .command(cmd("0"))
            .state(cmd("0"), StateVector::basis(2, 0).unwrap())
            .unitary(cmd("0"), pauli_x())
            .observable(cmd("0"), SpectralDecomposition::computational_basis(2).unwrap())
            .build()
            .unwrap();
        let p = builtin_predicate("identity-evolution").unwrap();
        assert!(p.test(&id_model));
        assert!(!p.test(&flip_model));
        assert!(builtin_predicate("no-such-property").is_none());
    }

    fn exact_counts(model: &Model, b: &Command, n: u64) -> OutcomeCounts {
        let p = model.outcome_probabilities(b).unwrap();
        OutcomeCounts::new(
            p.probs()
                .iter()
                .map(|&x| (x * n as f64).round() as u64)
                .collect(),
        )
    }

    #[test]
    fn exact_generator_classifies_good() {
        let b = cmd("0");
        let model = basis_model(2, 0, &b);
        let mut data = CountsTable::new();
        data.insert(b.clone(), exact_counts(&model, &b, 1000));
        let w = WeightedCommandSet::uniform(&[b]).unwrap();
        let report = classify_fit(&[model], &data, &w, 1e-6, 0.1, None).unwrap();
        assert_eq!(report.case, FitCase::Good);
        assert_eq!(report.within_eps.len(), 1);
        assert!(report.within_eps[0].distance < 1e-7);
    }

    #[test]
    fn wrong_model_classifies_no_fit() {
        let b = cmd("0");
        let generator = basis_model(2, 0, &b);
        let wrong = basis_model(2, 1, &b);
        let mut data = CountsTable::new();
        data.insert(b.clone(), exact_counts(&generator, &b, 1000));
        let w = WeightedCommandSet::uniform(&[b]).unwrap();
        let report = classify_fit(&[wrong], &data, &w, 0.5, 0.1, None).unwrap();
        assert_eq!(report.case, FitCase::NoFit);
    }

    #[test]
    fn classification_is_monotone_in_eps() {
        let b = cmd("0");
        let generator = basis_model(2, 0, &b);
        let wrong = basis_model(2, 1, &b);
        let mut data = CountsTable::new();
        data.insert(b.clone(), exact_counts(&generator, &b, 1000));
        let w = WeightedCommandSet::uniform(&[b.clone()]).unwrap();

        let small = classify_fit(&[wrong.clone()], &data, &w, 0.5, 10.0, None).unwrap();
        assert_eq!(small.case, FitCase::NoFit);
        // Enlarging eps admits the model; the case can only move away
        // from NoFit.
        let large = classify_fit(&[wrong], &data, &w, 2.0, 10.0, None).unwrap();
        assert_ne!(large.case, FitCase::NoFit);
    }
}

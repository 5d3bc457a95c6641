//! File formats: model documents, outcome-counts tables, command lists,
//! and structured reports.
//!
//! # Model files
//!
//! A model is a JSON document. Complex numbers are `[real, imaginary]`
//! pairs, state vectors are arrays of pairs, matrices are row-major arrays
//! of rows, and observables carry their spectral decomposition explicitly:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "commands": ["0", "1"],
//!   "states":     { "0": [[1.0, 0.0], [0.0, 0.0]], "1": ... },
//!   "unitaries":  { "0": [[[1.0, 0.0], [0.0, 0.0]],
//!                         [[0.0, 0.0], [1.0, 0.0]]], "1": ... },
//!   "observables": { "0": { "eigenvalues": [0.0, 1.0],
//!                           "projectors": [ <matrix>, <matrix> ] }, ... },
//!   "durations":  { "1": 1e-6 }
//! }
//! ```
//!
//! Command keys are bit strings; the empty command is written `-` (the
//! empty string is also accepted when reading). `durations` is optional,
//! and the `unitaries` map may omit commands that resolve through the
//! concatenation rule or the identity default for the empty command.
//! Numbers round-trip bit-exactly: values are written in the shortest
//! decimal form that recovers the same f64.
//!
//! # Counts files
//!
//! One row per command: the command, then one integer tally per outcome
//! index, whitespace-separated. Blank lines and `#` comments are ignored.
//!
//! ```text
//! # command  counts...
//! -    480 520
//! 01   251 249 250 250
//! ```
//!
//! # Reports
//!
//! Calculators emit ordered key–value reports. The structured rendering is
//! one `key=value` line per field, deterministic byte-for-byte for a given
//! seed and flags so runs can be diffed.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::command::Command;
use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix, C64};
use crate::model::{Model, SpectralDecomposition};
use crate::stats::{CountsTable, OutcomeCounts};

type JsonComplex = [f64; 2];
type JsonVector = Vec<JsonComplex>;
type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Debug, Serialize, Deserialize)]
struct ObservableDoc {
    eigenvalues: Vec<f64>,
    projectors: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelDoc {
    dimension: usize,
    commands: Vec<String>,
    #[serde(default)]
    states: BTreeMap<String, JsonVector>,
    #[serde(default)]
    unitaries: BTreeMap<String, JsonMatrix>,
    #[serde(default)]
    observables: BTreeMap<String, ObservableDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    durations: BTreeMap<String, f64>,
}

fn vector_to_json(v: &StateVector) -> JsonVector {
    v.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_to_json(m: &DMatrix<C64>) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn vector_from_json(context: &str, v: &JsonVector) -> Result<DVector<C64>> {
    if v.is_empty() {
        return Err(Error::FileFormat(format!("{context}: empty vector")));
    }
    Ok(DVector::from_iterator(
        v.len(),
        v.iter().map(|&[re, im]| C64::new(re, im)),
    ))
}

fn matrix_from_json(context: &str, rows: &JsonMatrix) -> Result<DMatrix<C64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::FileFormat(format!("{context}: empty matrix")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::FileFormat(format!(
                "{context}: row {i} has {} entries, expected {n} (matrices must be square)",
                row.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn parse_command(context: &str, s: &str) -> Result<Command> {
    Command::from_str(s)
        .map_err(|e| Error::FileFormat(format!("{context}: {e}")))
}

/// Serializes a model to its JSON document form.
pub fn model_to_string(model: &Model) -> Result<String> {
    let doc = ModelDoc {
        dimension: model.dimension(),
        commands: model.commands().iter().map(|c| c.to_string()).collect(),
        states: model
            .states()
            .iter()
            .map(|(c, v)| (c.to_string(), vector_to_json(v)))
            .collect(),
        unitaries: model
            .unitaries()
            .iter()
            .map(|(c, u)| (c.to_string(), matrix_to_json(u.matrix())))
            .collect(),
        observables: model
            .observables()
            .iter()
            .map(|(c, sd)| {
                (
                    c.to_string(),
                    ObservableDoc {
                        eigenvalues: sd.eigenvalues().to_vec(),
                        projectors: sd.projectors().iter().map(matrix_to_json).collect(),
                    },
                )
            })
            .collect(),
        durations: model
            .durations()
            .iter()
            .map(|(c, t)| (c.to_string(), *t))
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Parses a model document, reporting schema violations with their JSON
/// location and semantic violations with the offending command and field.
pub fn model_from_string(text: &str) -> Result<Model> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| {
        Error::FileFormat(format!(
            "model document is not valid (line {}, column {}): {e}",
            e.line(),
            e.column()
        ))
    })?;

    let mut builder = Model::builder(doc.dimension);
    for (i, s) in doc.commands.iter().enumerate() {
        builder = builder.command(parse_command(&format!("commands[{i}]"), s)?);
    }
    for (key, v) in &doc.states {
        let c = parse_command(&format!("states[{key}]"), key)?;
        let vec = vector_from_json(&format!("state for command `{c}`"), v)?;
        let state = StateVector::new(vec).map_err(|e| {
            Error::FileFormat(format!("state for command `{c}`: {e}"))
        })?;
        builder = builder.state(c, state);
    }
    for (key, rows) in &doc.unitaries {
        let c = parse_command(&format!("unitaries[{key}]"), key)?;
        let m = matrix_from_json(&format!("unitary for command `{c}`"), rows)?;
        let u = UnitaryMatrix::new(m).map_err(|e| {
            Error::FileFormat(format!("unitary for command `{c}`: {e}"))
        })?;
        builder = builder.unitary(c, u);
    }
    for (key, obs) in &doc.observables {
        let c = parse_command(&format!("observables[{key}]"), key)?;
        if obs.eigenvalues.len() != obs.projectors.len() {
            return Err(Error::FileFormat(format!(
                "observable for command `{c}`: {} eigenvalues but {} projectors",
                obs.eigenvalues.len(),
                obs.projectors.len()
            )));
        }
        let pairs = obs
            .eigenvalues
            .iter()
            .zip(&obs.projectors)
            .enumerate()
            .map(|(j, (&ev, rows))| {
                Ok((
                    ev,
                    matrix_from_json(
                        &format!("observable for command `{c}`, projector {j}"),
                        rows,
                    )?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let sd = SpectralDecomposition::new(doc.dimension, pairs).map_err(|e| {
            Error::FileFormat(format!("observable for command `{c}`: {e}"))
        })?;
        builder = builder.observable(c, sd);
    }
    for (key, t) in &doc.durations {
        let c = parse_command(&format!("durations[{key}]"), key)?;
        builder = builder.duration(c, *t);
    }
    builder.build()
}

pub fn read_model(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::FileFormat(format!("cannot read {}: {e}", path.display())))?;
    model_from_string(&text)
        .map_err(|e| Error::FileFormat(format!("{}: {e}", path.display())))
}

pub fn write_model(path: &Path, model: &Model) -> Result<()> {
    std::fs::write(path, model_to_string(model)?)?;
    Ok(())
}

/// Parses a counts table: one row per command, whitespace-delimited.
pub fn counts_from_string(text: &str) -> Result<CountsTable> {
    let mut table = CountsTable::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let cmd_text = fields.next().expect("non-empty line has a first field");
        let command = parse_command(&format!("counts line {}", lineno + 1), cmd_text)?;
        let counts: Vec<u64> = fields
            .map(|f| {
                f.parse::<u64>().map_err(|_| {
                    Error::FileFormat(format!(
                        "counts line {}: `{f}` is not a nonnegative integer",
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if counts.is_empty() {
            return Err(Error::FileFormat(format!(
                "counts line {}: command `{command}` has no counts",
                lineno + 1
            )));
        }
        if table.get(&command).is_some() {
            return Err(Error::FileFormat(format!(
                "counts line {}: duplicate command `{command}`",
                lineno + 1
            )));
        }
        table.insert(command, OutcomeCounts::new(counts));
    }
    if table.is_empty() {
        return Err(Error::FileFormat("counts file has no data rows".into()));
    }
    Ok(table)
}

pub fn counts_to_string(table: &CountsTable) -> String {
    let mut out = String::from("# command  counts per outcome index\n");
    for (command, counts) in table.iter() {
        out.push_str(&command.to_string());
        for c in counts.counts() {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn read_counts(path: &Path) -> Result<CountsTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::FileFormat(format!("cannot read {}: {e}", path.display())))?;
    counts_from_string(&text)
        .map_err(|e| Error::FileFormat(format!("{}: {e}", path.display())))
}

/// Parses a command list: one command per line, `#` comments allowed.
pub fn commands_from_string(text: &str) -> Result<Vec<Command>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_command(&format!("command list line {}", lineno + 1), line)?);
    }
    if out.is_empty() {
        return Err(Error::FileFormat("command list is empty".into()));
    }
    Ok(out)
}

pub fn read_commands(path: &Path) -> Result<Vec<Command>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::FileFormat(format!("cannot read {}: {e}", path.display())))?;
    commands_from_string(&text)
        .map_err(|e| Error::FileFormat(format!("{}: {e}", path.display())))
}

/// Rendering style for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Structured,
}

/// An ordered key–value report. Exact integers are rendered in decimal by
/// their `Display`; floats in shortest-round-trip form.
#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        match format {
            ReportFormat::Structured => {
                for (k, v) in &self.fields {
                    out.push_str(k);
                    out.push('=');
                    out.push_str(v);
                    out.push('\n');
                }
            }
            ReportFormat::Human => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k:<width$}  {v}\n"));
                }
            }
        }
        out
    }
}

//! File formats and IO helpers shared by the subcommands.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qudit_designs::classical::{ClassicalLatinHypercube, LatinJson, OrthogonalArray};
use qudit_designs::quantum::{QlhJson, QoaJson, QuantumLatinHypercube, QuantumOrthogonalArray};
use qudit_designs::tensor::{ComplexMatrix, MatrixJson, QuditState, StateJson};

/// Input or usage failure; always maps to exit code 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! from_error {
    ($($ty:ty),+) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError(e.to_string())
            }
        })+
    };
}

from_error!(
    std::io::Error,
    serde_json::Error,
    qudit_designs::tensor::TensorError,
    qudit_designs::classical::DesignError,
    qudit_designs::quantum::QuantumError,
    qudit_designs::uniformity::UniformityError,
    qudit_designs::multiunitary::MultiunitaryError,
    qudit_designs::constructions::ConstructionError,
    qudit_designs::search::SearchError
);

pub fn usage(message: impl Into<String>) -> CliError {
    CliError(message.into())
}

/// A list of states sharing one local dimension (basis families).
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub d: usize,
    pub states: Vec<StateJson>,
}

/// A list of classical hypercubes (the output of an array split).
#[derive(Debug, Serialize, Deserialize)]
pub struct LatinFamilyJson {
    pub cubes: Vec<LatinJson>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn parse_json<'a, T: Deserialize<'a>>(path: &Path, text: &'a str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

pub fn read_state(path: &Path) -> Result<QuditState, CliError> {
    let text = read_text(path)?;
    let json: StateJson = parse_json(path, &text)?;
    Ok(QuditState::from_json(&json)?)
}

pub fn read_qoa(path: &Path) -> Result<QuantumOrthogonalArray, CliError> {
    let text = read_text(path)?;
    let json: QoaJson = parse_json(path, &text)?;
    Ok(QuantumOrthogonalArray::from_json(&json)?)
}

pub fn read_qlh(path: &Path) -> Result<QuantumLatinHypercube, CliError> {
    let text = read_text(path)?;
    let json: QlhJson = parse_json(path, &text)?;
    Ok(QuantumLatinHypercube::from_json(&json)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = read_text(path)?;
    let json: MatrixJson = parse_json(path, &text)?;
    Ok(ComplexMatrix::from_json(&json)?)
}

pub fn read_oa(path: &Path, strength: usize, alphabet: Option<usize>) -> Result<OrthogonalArray, CliError> {
    let text = read_text(path)?;
    Ok(OrthogonalArray::from_text(&text, strength, alphabet)?)
}

/// Reads a file holding either one hypercube or a `{"cubes": [...]}` family.
pub fn read_latin_any(path: &Path) -> Result<Vec<ClassicalLatinHypercube>, CliError> {
    let text = read_text(path)?;
    if let Ok(family) = serde_json::from_str::<LatinFamilyJson>(&text) {
        return family
            .cubes
            .iter()
            .map(|json| ClassicalLatinHypercube::from_json(json).map_err(CliError::from))
            .collect();
    }
    let single: LatinJson = parse_json(path, &text)?;
    Ok(vec![ClassicalLatinHypercube::from_json(&single)?])
}

/// Serializes a report deterministically and sends it to stdout or a file.
pub fn emit<T: Serialize>(
    value: &T,
    pretty: bool,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let mut text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Writes raw text (the orthogonal-array format) to stdout or a file.
pub fn emit_raw(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn parse_party_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|token| {
            token
                .trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad party index {token:?}")))
        })
        .collect()
}

pub fn parse_pair(text: &str) -> Result<(usize, usize), CliError> {
    let parts = parse_party_list(text)?;
    match parts[..] {
        [a, b] => Ok((a, b)),
        _ => Err(usage(format!("expected two parties, got {text:?}"))),
    }
}

/// Parses `party=digit` assignments, e.g. `0=1,2=0`.
pub fn parse_outcomes(text: &str) -> Result<std::collections::BTreeMap<usize, u8>, CliError> {
    let mut outcomes = std::collections::BTreeMap::new();
    for token in text.split(',') {
        let (party, digit) = token
            .trim()
            .split_once('=')
            .ok_or_else(|| usage(format!("expected party=digit, got {token:?}")))?;
        let party: usize = party
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad party {party:?}")))?;
        let digit: u8 = digit
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad digit {digit:?}")))?;
        if outcomes.insert(party, digit).is_some() {
            return Err(usage(format!("party {party} assigned twice")));
        }
    }
    Ok(outcomes)
}

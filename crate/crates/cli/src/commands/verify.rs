//! `verify`: run a defining-condition check and exit 0/1 accordingly.

use std::path::PathBuf;

use clap::Subcommand;
use serde::Serialize;

use qudit_designs::classical::verify_mols;
use qudit_designs::quantum::{
    verify_moqlh, verify_qlh_lines, verify_qls, verify_qoa, verify_weak_orthogonality,
};
use qudit_designs::tensor::QuditState;
use qudit_designs::tol;
use qudit_designs::uniformity::certify_uniformity;

use crate::formats::{
    emit, read_latin_any, read_oa, read_qlh, read_qoa, read_state, read_text, CliError,
    FamilyJson,
};

#[derive(Subcommand)]
pub enum VerifyCmd {
    /// Strength/index and irredundancy of a classical array (text format).
    Oa {
        file: PathBuf,
        /// Claimed strength.
        #[arg(long)]
        k: usize,
        /// Alphabet size override.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Latin line condition of classical hypercubes.
    Latin { file: PathBuf },
    /// Mutual orthogonality of classical Latin squares.
    Mols { files: Vec<PathBuf> },
    /// Row/column orthonormality of a quantum Latin square.
    Qls { file: PathBuf },
    /// Line orthonormality of a quantum Latin hypercube.
    Qlh { file: PathBuf },
    /// Mutual orthogonality and line-sum uniformity of an arrangement.
    Moqlh { file: PathBuf },
    /// Weak orthogonality of two quantum Latin squares.
    WeakOrth { a: PathBuf, b: PathBuf },
    /// Defining conditions of a quantum orthogonal array.
    Qoa { file: PathBuf },
    /// k-uniformity of a state.
    Uniformity {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Mutual orthogonality and equal norms of a state family.
    Basis { file: PathBuf },
}

#[derive(Serialize)]
struct LatinReport {
    ok: bool,
    cubes: usize,
    /// First broken line as (cube, axis, fixed coordinates).
    witness: Option<(usize, usize, Vec<u8>)>,
}

#[derive(Serialize)]
struct BasisReport {
    ok: bool,
    states: usize,
    max_overlap: f64,
    norm_spread: f64,
}

pub fn run(cmd: VerifyCmd, pretty: bool) -> Result<bool, CliError> {
    match cmd {
        VerifyCmd::Oa { file, k, d } => {
            let oa = read_oa(&file, k, d)?;
            let check = oa.verify()?;
            emit(&check, pretty, None)?;
            Ok(check.strength_ok)
        }
        VerifyCmd::Latin { file } => {
            let cubes = read_latin_any(&file)?;
            let witness = cubes.iter().enumerate().find_map(|(idx, cube)| {
                cube.latin_witness().map(|(axis, fixed)| (idx, axis, fixed))
            });
            let report = LatinReport {
                ok: witness.is_none(),
                cubes: cubes.len(),
                witness,
            };
            emit(&report, pretty, None)?;
            Ok(report.ok)
        }
        VerifyCmd::Mols { files } => {
            let mut cubes = Vec::new();
            for file in &files {
                cubes.extend(read_latin_any(file)?);
            }
            let check = verify_mols(&cubes)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::Qls { file } => {
            let square = read_qlh(&file)?;
            let check = verify_qls(&square)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::Qlh { file } => {
            let cube = read_qlh(&file)?;
            let check = verify_qlh_lines(&cube)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::Moqlh { file } => {
            let family = read_qlh(&file)?;
            let check = verify_moqlh(&family)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::WeakOrth { a, b } => {
            let first = read_qlh(&a)?;
            let second = read_qlh(&b)?;
            let check = verify_weak_orthogonality(&first, &second)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::Qoa { file } => {
            let qoa = read_qoa(&file)?;
            let report = verify_qoa(&qoa)?;
            emit(&report, pretty, None)?;
            Ok(report.ok)
        }
        VerifyCmd::Uniformity { file, k } => {
            let state = read_state(&file)?;
            let check = certify_uniformity(&state, k, tol::IDENTITY)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        VerifyCmd::Basis { file } => {
            let text = read_text(&file)?;
            let family: FamilyJson =
                serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", file.display())))?;
            let states: Vec<QuditState> = family
                .states
                .iter()
                .map(QuditState::from_json)
                .collect::<Result<_, _>>()?;
            let mut max_overlap = 0.0f64;
            let mut min_norm = f64::INFINITY;
            let mut max_norm = 0.0f64;
            for (i, a) in states.iter().enumerate() {
                let norm = a.norm_sqr();
                min_norm = min_norm.min(norm);
                max_norm = max_norm.max(norm);
                for b in states.iter().skip(i + 1) {
                    let overlap =
                        a.inner_product(b)?.norm() / (a.norm_sqr() * b.norm_sqr()).sqrt();
                    max_overlap = max_overlap.max(overlap);
                }
            }
            let norm_spread = if states.is_empty() {
                0.0
            } else {
                (max_norm - min_norm) / max_norm.max(1e-300)
            };
            let report = BasisReport {
                ok: max_overlap <= tol::IDENTITY && norm_spread <= tol::IDENTITY,
                states: states.len(),
                max_overlap,
                norm_spread,
            };
            emit(&report, pretty, None)?;
            Ok(report.ok)
        }
    }
}

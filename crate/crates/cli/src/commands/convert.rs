//! `convert`: conversions between OA text, Latin JSON, array JSON and
//! state/matrix JSON.

use std::path::PathBuf;

use clap::Subcommand;

use qudit_designs::classical::{latin_to_oa, oa_to_latin};
use qudit_designs::multiunitary::state_to_matrix;
use qudit_designs::quantum::{
    qoa_to_moqlh, qoa_to_state, QuantumError, QuantumOrthogonalArray,
};

use crate::formats::{
    emit, emit_raw, parse_party_list, read_latin_any, read_oa, read_qlh, read_qoa, read_state,
    CliError, LatinFamilyJson,
};

#[derive(Subcommand)]
pub enum ConvertCmd {
    /// Split an index-unity array into Latin hypercubes.
    OaToLatin {
        file: PathBuf,
        /// Number of leading address columns.
        #[arg(long)]
        k: usize,
        /// Alphabet size override (defaults to max digit + 1).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the array addressed by one or more Latin hypercubes.
    LatinToOa {
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a classical array to basis-state rows.
    LiftOa {
        file: PathBuf,
        /// Claimed strength of the array.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum the rows of a verified array into its uniform state.
    QoaToState {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the Latin arrangement addressed by the first k columns.
    QoaToMoqlh {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the induced state of a Latin arrangement.
    QlhToState {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient matrix of a state on an even number of parties.
    StateToMatrix {
        file: PathBuf,
        /// Row parties, e.g. `0,1` (defaults to the first half).
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: ConvertCmd, pretty: bool) -> Result<bool, CliError> {
    match cmd {
        ConvertCmd::OaToLatin { file, k, d, out } => {
            let oa = read_oa(&file, k, d)?;
            let cubes = oa_to_latin(&oa, k)?;
            let family = LatinFamilyJson {
                cubes: cubes.iter().map(|c| c.to_json()).collect(),
            };
            emit(&family, pretty, out.as_ref())?;
        }
        ConvertCmd::LatinToOa { files, out } => {
            let mut cubes = Vec::new();
            for file in &files {
                cubes.extend(read_latin_any(file)?);
            }
            let oa = latin_to_oa(&cubes)?;
            emit_raw(&oa.to_text(), out.as_ref())?;
        }
        ConvertCmd::LiftOa { file, k, d, out } => {
            let oa = read_oa(&file, k, d)?;
            let qoa = QuantumOrthogonalArray::from_classical(&oa)?;
            emit(&qoa.to_json(), pretty, out.as_ref())?;
        }
        ConvertCmd::QoaToState { file, out } => {
            let qoa = read_qoa(&file)?;
            match qoa_to_state(&qoa) {
                Ok(state) => emit(&state.to_json(), pretty, out.as_ref())?,
                Err(
                    error @ (QuantumError::QoaRejected { .. }
                    | QuantumError::RowsNotOrthogonal(..)),
                ) => {
                    // A failed verification is a verdict, not a usage error.
                    eprintln!("verification failed: {error}");
                    return Ok(false);
                }
                Err(error) => return Err(error.into()),
            }
        }
        ConvertCmd::QoaToMoqlh { file, out } => {
            let qoa = read_qoa(&file)?;
            emit(&qoa_to_moqlh(&qoa)?.to_json(), pretty, out.as_ref())?;
        }
        ConvertCmd::QlhToState { file, out } => {
            let qlh = read_qlh(&file)?;
            emit(&qlh.induced_state()?.to_json(), pretty, out.as_ref())?;
        }
        ConvertCmd::StateToMatrix { file, subset, out } => {
            let state = read_state(&file)?;
            let rows = match subset {
                Some(text) => parse_party_list(&text)?,
                None => (0..state.parties() / 2).collect(),
            };
            let matrix = state_to_matrix(&state, &rows)?;
            emit(&matrix.to_json(), pretty, out.as_ref())?;
        }
    }
    Ok(true)
}

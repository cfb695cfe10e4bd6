//! `construct <name>`: emit a catalog construction as JSON (or array text).

use std::path::PathBuf;

use clap::Args;

use qudit_designs::constructions::{self, ConstructionId};
use qudit_designs::quantum::QuantumOrthogonalArray;

use crate::formats::{emit, emit_raw, read_qoa, usage, CliError, FamilyJson};

#[derive(Args)]
pub struct ConstructArgs {
    /// Catalog name, e.g. `ame5`, `qoa4522`, `bell-basis`, `oa9432`.
    pub name: String,

    /// Local dimension, where the construction is parametrized.
    #[arg(long)]
    pub d: Option<usize>,

    /// Party count (GHZ-type constructions).
    #[arg(long)]
    pub n: Option<usize>,

    /// Copy count for the payload-repetition construction.
    #[arg(long)]
    pub m: Option<usize>,

    /// Base array for `copies` (defaults to the five-column family at the
    /// given dimension, or the five-qubit array when no dimension is set).
    #[arg(long)]
    pub base: Option<PathBuf>,

    /// For `ame5`: which artifact to emit (`state`, `qoa` or `moqlh`).
    #[arg(long)]
    pub emit: Option<String>,

    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn require_d(args: &ConstructArgs) -> Result<usize, CliError> {
    args.d
        .ok_or_else(|| usage(format!("{} needs --d", args.name)))
}

pub fn run(args: ConstructArgs, pretty: bool) -> Result<bool, CliError> {
    let id: ConstructionId = args
        .name
        .parse()
        .map_err(|_| usage(format!("unknown construction {:?}", args.name)))?;
    let out = args.out.clone();

    match id {
        ConstructionId::CyclicLs => {
            let d = require_d(&args)?;
            emit(&constructions::cyclic_ls(d).to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::Oa4322 => emit_raw(&constructions::oa_4322().to_text(), out.as_ref())?,
        ConstructionId::Oa9432 => emit_raw(&constructions::oa_9432().to_text(), out.as_ref())?,
        ConstructionId::Oa8423 => emit_raw(&constructions::oa_8423().to_text(), out.as_ref())?,
        ConstructionId::Oa4321 => emit_raw(&constructions::oa_4321().to_text(), out.as_ref())?,
        ConstructionId::Ghz => {
            let d = require_d(&args)?;
            let n = args.n.ok_or_else(|| usage("ghz needs --n"))?;
            emit(&constructions::ghz(n, d)?.to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::FourierQls => {
            let d = require_d(&args)?;
            emit(&constructions::fourier_qls(d)?.to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::MustoVicaryQls => {
            emit(&constructions::musto_vicary_qls().to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::Qoa4522 => {
            emit(&constructions::qoa_4522().to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::Qoa8623 => {
            emit(&constructions::qoa_8623().to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::GhzBasis => {
            let family = FamilyJson {
                d: 2,
                states: constructions::ghz_basis_qubits()
                    .iter()
                    .map(|s| s.to_json())
                    .collect(),
            };
            emit(&family, pretty, out.as_ref())?;
        }
        ConstructionId::BellBasis => {
            let d = require_d(&args)?;
            let family = FamilyJson {
                d,
                states: constructions::bell_basis(d)?
                    .iter()
                    .map(|s| s.to_json())
                    .collect(),
            };
            emit(&family, pretty, out.as_ref())?;
        }
        ConstructionId::Ame43 => {
            emit(&constructions::ame_4_3().to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::Ame5 => {
            let d = require_d(&args)?;
            let family = constructions::ame_5_d(d)?;
            match args.emit.as_deref().unwrap_or("state") {
                "state" => emit(&family.state.to_json(), pretty, out.as_ref())?,
                "qoa" => emit(&family.qoa.to_json(), pretty, out.as_ref())?,
                "moqlh" => emit(&family.squares.to_json(), pretty, out.as_ref())?,
                other => return Err(usage(format!("unknown --emit kind {other:?}"))),
            }
        }
        ConstructionId::Psi6 => {
            let d = require_d(&args)?;
            emit(&constructions::psi_6_d(d)?.to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::CopiesExtension => {
            let copies = args.m.ok_or_else(|| usage("copies needs --m"))?;
            let base: QuantumOrthogonalArray = match (&args.base, args.d) {
                (Some(path), _) => read_qoa(path)?,
                (None, Some(d)) => constructions::ame_5_d(d)?.qoa,
                (None, None) => constructions::qoa_4522(),
            };
            let extended = constructions::copies_extension(&base, copies)?;
            emit(&extended.to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::Ame6Graph => {
            let d = require_d(&args)?;
            emit(&constructions::ame_6_d_graph(d)?.to_json(), pretty, out.as_ref())?;
        }
        ConstructionId::GhzHypercube => {
            let d = require_d(&args)?;
            let n = args.n.ok_or_else(|| usage("ghz-hypercube needs --n"))?;
            emit(
                &constructions::ghz_hypercube(n, d)?.to_json(),
                pretty,
                out.as_ref(),
            )?;
        }
        ConstructionId::Hadamard3Unitary => {
            let d = require_d(&args)?;
            emit(
                &constructions::hadamard_3unitary_matrix(d)?.to_json(),
                pretty,
                out.as_ref(),
            )?;
        }
    }
    Ok(true)
}

//! `analyze`: reports on states, arrays and matrices.

use std::path::PathBuf;

use clap::Subcommand;
use serde::Serialize;

use qudit_designs::multiunitary::{
    is_k_unitary, is_permutation_matrix, matrix_to_bell_form, state_to_matrix,
    MultiunitarityReport,
};
use qudit_designs::quantum::classify_columns;
use qudit_designs::search::verify_candidate;
use qudit_designs::tensor::MatrixJson;
use qudit_designs::tol;
use qudit_designs::uniformity::{
    connectedness_check, measure_and_check, persistency_lower_bound, uniformity_report,
};

use crate::formats::{
    emit, parse_outcomes, parse_pair, parse_party_list, read_matrix, read_qoa, read_state,
    CliError,
};

#[derive(Subcommand)]
pub enum AnalyzeCmd {
    /// Full uniformity profile: max k, support, witnesses.
    Uniformity { file: PathBuf },
    /// Unitarity residuals of every index bipartition of a state.
    Multiunitary {
        file: PathBuf,
        /// Restrict the report to one row subset, e.g. `0,1`.
        #[arg(long)]
        subset: Option<String>,
        /// Accept permutation entries with arbitrary phases.
        #[arg(long)]
        up_to_phases: bool,
    },
    /// Same residuals for a candidate matrix of size d^k.
    Candidate {
        file: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
    /// Classical/quantum column classification of an array.
    Columns { file: PathBuf },
    /// Bell-projectability of one pair under complement measurements.
    Connectedness {
        file: PathBuf,
        /// The pair to test, e.g. `3,4`.
        #[arg(long)]
        pair: String,
    },
    /// Project parties onto outcomes and certify the residual.
    Measure {
        file: PathBuf,
        /// Assignments like `0=1,2=0`.
        #[arg(long)]
        outcomes: String,
        /// Residual uniformity level to certify (0 skips the check).
        #[arg(long, default_value_t = 1)]
        residual_k: usize,
    },
    /// Certified lower bound on the persistency of entanglement.
    Persistency { file: PathBuf },
    /// Gate form: the matrix carrying the state over the Bell state.
    BellForm { file: PathBuf },
}

#[derive(Serialize)]
struct SubsetReport {
    subset: Vec<usize>,
    residual: f64,
    permutation: bool,
}

#[derive(Serialize)]
struct MultiunitaryCliReport {
    ok: bool,
    k: usize,
    worst: f64,
    residuals: Vec<SubsetEntry>,
    /// Permutation test of the default coefficient matrix.
    default_permutation: bool,
}

#[derive(Serialize)]
struct SubsetEntry {
    subset: Vec<usize>,
    residual: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    ok: bool,
    uniformity: Option<qudit_designs::uniformity::UniformityCheck>,
    residual: qudit_designs::tensor::StateJson,
}

#[derive(Serialize)]
struct PersistencyReport {
    persistency_lower_bound: usize,
}

#[derive(Serialize)]
struct BellFormReport {
    residual: f64,
    matrix: MatrixJson,
}

fn full_report(
    report: &MultiunitarityReport,
    default_permutation: bool,
) -> MultiunitaryCliReport {
    MultiunitaryCliReport {
        ok: report.ok,
        k: report.k,
        worst: report.worst,
        residuals: report
            .residuals
            .iter()
            .map(|entry| SubsetEntry {
                subset: entry.subset.clone(),
                residual: entry.residual,
            })
            .collect(),
        default_permutation,
    }
}

pub fn run(cmd: AnalyzeCmd, pretty: bool) -> Result<bool, CliError> {
    match cmd {
        AnalyzeCmd::Uniformity { file } => {
            let report = uniformity_report(&read_state(&file)?)?;
            emit(&report, pretty, None)?;
            Ok(true)
        }
        AnalyzeCmd::Multiunitary {
            file,
            subset,
            up_to_phases,
        } => {
            let state = read_state(&file)?;
            match subset {
                Some(text) => {
                    let rows = parse_party_list(&text)?;
                    let matrix = state_to_matrix(&state, &rows)?;
                    let scale = (state.levels().pow(rows.len() as u32) as f64).sqrt()
                        / state.norm_sqr().sqrt();
                    let scaled = matrix.scaled(num_complex::Complex64::new(scale, 0.0));
                    let report = SubsetReport {
                        residual: scaled.unitarity_residual()?,
                        permutation: is_permutation_matrix(&scaled, tol::IDENTITY, up_to_phases)?,
                        subset: rows,
                    };
                    emit(&report, pretty, None)?;
                    Ok(report.residual < tol::IDENTITY)
                }
                None => {
                    let report = is_k_unitary(&state)?;
                    let k = report.k;
                    let default: Vec<usize> = (0..k).collect();
                    let matrix = state_to_matrix(&state, &default)?;
                    let scale = (state.levels().pow(k as u32) as f64).sqrt()
                        / state.norm_sqr().sqrt();
                    let scaled = matrix.scaled(num_complex::Complex64::new(scale, 0.0));
                    let permutation =
                        is_permutation_matrix(&scaled, tol::IDENTITY, up_to_phases)?;
                    let cli_report = full_report(&report, permutation);
                    emit(&cli_report, pretty, None)?;
                    Ok(report.ok)
                }
            }
        }
        AnalyzeCmd::Candidate { file, d, k } => {
            let matrix = read_matrix(&file)?;
            let report = verify_candidate(&matrix, d, k)?;
            let permutation = is_permutation_matrix(&matrix, tol::IDENTITY, false)?;
            let cli_report = full_report(&report, permutation);
            emit(&cli_report, pretty, None)?;
            Ok(report.ok)
        }
        AnalyzeCmd::Columns { file } => {
            let classes = classify_columns(&read_qoa(&file)?)?;
            emit(&classes, pretty, None)?;
            Ok(true)
        }
        AnalyzeCmd::Connectedness { file, pair } => {
            let state = read_state(&file)?;
            let pair = parse_pair(&pair)?;
            let check = connectedness_check(&state, pair, None)?;
            emit(&check, pretty, None)?;
            Ok(check.ok)
        }
        AnalyzeCmd::Measure {
            file,
            outcomes,
            residual_k,
        } => {
            let state = read_state(&file)?;
            let outcomes = parse_outcomes(&outcomes)?;
            let check = measure_and_check(&state, &outcomes, residual_k)?;
            let report = MeasureReport {
                ok: check.ok,
                uniformity: check.uniformity.clone(),
                residual: check.residual.to_json(),
            };
            emit(&report, pretty, None)?;
            Ok(check.ok)
        }
        AnalyzeCmd::Persistency { file } => {
            let bound = persistency_lower_bound(&read_state(&file)?)?;
            emit(
                &PersistencyReport {
                    persistency_lower_bound: bound,
                },
                pretty,
                None,
            )?;
            Ok(true)
        }
        AnalyzeCmd::BellForm { file } => {
            let form = matrix_to_bell_form(&read_state(&file)?)?;
            let report = BellFormReport {
                residual: form.residual,
                matrix: form.matrix.to_json(),
            };
            emit(&report, pretty, None)?;
            Ok(true)
        }
    }
}

//! State/matrix correspondence for states on `2k` parties and unitarity
//! checks under all index bipartitions.

use itertools::Itertools;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::tensor::{ComplexMatrix, QuditState, TensorError};
use crate::tol;

#[derive(Debug, Error)]
pub enum MultiunitaryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error("state must have an even number of parties, got {0}")]
    OddPartyCount(usize),

    #[error("row subset must be {expected} distinct parties below {n}, got {got:?}")]
    BadSubset {
        expected: usize,
        n: usize,
        got: Vec<usize>,
    },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("default coefficient matrix is not unitary (residual {0:.3e})")]
    DefaultSubsetNotUnitary(f64),
}

/// Coefficient matrix of a `2k`-party state: rows indexed by the digits on
/// `row_parties` (ascending), columns by the complement (ascending), both
/// row-major.
pub fn state_to_matrix(
    state: &QuditState,
    row_parties: &[usize],
) -> Result<ComplexMatrix, MultiunitaryError> {
    let n = state.parties();
    if n % 2 != 0 {
        return Err(MultiunitaryError::OddPartyCount(n));
    }
    let k = n / 2;
    let mut rows: Vec<usize> = row_parties.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.len() != k || rows.iter().any(|&p| p >= n) {
        return Err(MultiunitaryError::BadSubset {
            expected: k,
            n,
            got: row_parties.to_vec(),
        });
    }
    let cols: Vec<usize> = (0..n).filter(|p| !rows.contains(p)).collect();
    let d = state.levels();
    let dim = d.pow(k as u32);
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for (digits, amp) in state.terms() {
        let mu = rows
            .iter()
            .fold(0usize, |acc, &p| acc * d + digits[p] as usize);
        let nu = cols
            .iter()
            .fold(0usize, |acc, &p| acc * d + digits[p] as usize);
        matrix.set(mu, nu, amp);
    }
    Ok(matrix)
}

/// Per-bipartition unitarity residuals.
#[derive(Debug, Clone, Serialize)]
pub struct SubsetResidual {
    pub subset: Vec<usize>,
    pub residual: f64,
}

/// Verdict on multiunitarity of a `2k`-party state.
#[derive(Debug, Clone, Serialize)]
pub struct MultiunitarityReport {
    pub ok: bool,
    pub k: usize,
    pub worst: f64,
    /// All `C(2k, k)` bipartitions in lexicographic order. A subset and its
    /// complement index transposed matrices and share their residual.
    pub residuals: Vec<SubsetResidual>,
}

/// Checks unitarity of the coefficient matrix under every choice of `k` row
/// parties, after rescaling the state so a unitary matrix has unit columns.
pub fn is_k_unitary(state: &QuditState) -> Result<MultiunitarityReport, MultiunitaryError> {
    let n = state.parties();
    if n % 2 != 0 {
        return Err(MultiunitaryError::OddPartyCount(n));
    }
    let k = n / 2;
    let d = state.levels();
    let norm = state.norm_sqr().sqrt();
    if norm == 0.0 {
        return Err(MultiunitaryError::ZeroNorm);
    }
    let scale = (d.pow(k as u32) as f64).sqrt() / norm;
    let scaled = state.scaled(Complex64::new(scale, 0.0));

    let mut residuals = Vec::new();
    let mut worst: f64 = 0.0;
    for subset in (0..n).combinations(k) {
        let matrix = state_to_matrix(&scaled, &subset)?;
        let residual = matrix.unitarity_residual()?;
        worst = worst.max(residual);
        residuals.push(SubsetResidual { subset, residual });
    }
    Ok(MultiunitarityReport {
        ok: worst < tol::IDENTITY,
        k,
        worst,
        residuals,
    })
}

/// Tests for a permutation matrix: one unit-modulus entry per row and
/// column, everything else below `tol`. With `up_to_phases` the unit
/// entries may carry arbitrary phases; otherwise they must be literal ones.
pub fn is_permutation_matrix(
    matrix: &ComplexMatrix,
    tol: f64,
    up_to_phases: bool,
) -> Result<bool, MultiunitaryError> {
    if !matrix.is_square() {
        return Err(MultiunitaryError::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let dim = matrix.rows();
    let mut column_hits = vec![0usize; dim];
    for i in 0..dim {
        let mut row_hits = 0;
        for j in 0..dim {
            let entry = matrix.get(i, j);
            let modulus = entry.norm();
            if modulus >= tol {
                if (modulus - 1.0).abs() > tol {
                    return Ok(false);
                }
                if !up_to_phases && (entry - Complex64::new(1.0, 0.0)).norm() > tol {
                    return Ok(false);
                }
                row_hits += 1;
                column_hits[j] += 1;
            }
        }
        if row_hits != 1 {
            return Ok(false);
        }
    }
    Ok(column_hits.iter().all(|&hits| hits == 1))
}

/// A gate form of the state: the matrix `A` with `(I (x) A)` applied to the
/// generalized Bell state reproducing the (rescaled) input.
#[derive(Debug, Clone)]
pub struct BellForm {
    pub matrix: ComplexMatrix,
    /// Max-norm reconstruction defect.
    pub residual: f64,
}

/// Extracts the gate form. The default bipartition must already be unitary
/// after rescaling.
pub fn matrix_to_bell_form(state: &QuditState) -> Result<BellForm, MultiunitaryError> {
    let n = state.parties();
    if n % 2 != 0 {
        return Err(MultiunitaryError::OddPartyCount(n));
    }
    let k = n / 2;
    let d = state.levels();
    let norm = state.norm_sqr().sqrt();
    if norm == 0.0 {
        return Err(MultiunitaryError::ZeroNorm);
    }
    let scale = (d.pow(k as u32) as f64).sqrt() / norm;
    let scaled = state.scaled(Complex64::new(scale, 0.0));

    let default: Vec<usize> = (0..k).collect();
    let residual = state_to_matrix(&scaled, &default)?.unitarity_residual()?;
    if residual >= tol::IDENTITY {
        return Err(MultiunitaryError::DefaultSubsetNotUnitary(residual));
    }

    // Rows indexed by the trailing parties: column v of the result is the
    // payload attached to address v, which is exactly the gate acting on
    // one half of the Bell state.
    let trailing: Vec<usize> = (k..n).collect();
    let matrix = state_to_matrix(&scaled, &trailing)?;

    let dim = d.pow(k as u32);
    let mut defect: f64 = 0.0;
    for mu in 0..dim {
        let mut address = vec![0u8; k];
        let mut rem = mu;
        for slot in address.iter_mut().rev() {
            *slot = (rem % d) as u8;
            rem /= d;
        }
        for nu in 0..dim {
            let mut payload = vec![0u8; k];
            let mut rem = nu;
            for slot in payload.iter_mut().rev() {
                *slot = (rem % d) as u8;
                rem /= d;
            }
            let digits: Vec<u8> = address.iter().chain(&payload).copied().collect();
            let expected = scaled.amplitude(&digits).expect("digits in range");
            defect = defect.max((matrix.get(nu, mu) - expected).norm());
        }
    }
    Ok(BellForm {
        matrix,
        residual: defect,
    })
}

//! Seeded numerical search for k-unitary matrices by alternating polar
//! projections over the index bipartitions.
//!
//! Each restart starts from an independent random unitary and cycles through
//! the bipartitions in a fixed order, replacing the reordered coefficient
//! matrix by its nearest unitary. The method is parameter free but carries
//! no convergence guarantee; runs that stall are cut off and reported.

use std::collections::VecDeque;
use std::time::Instant;

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::multiunitary::{is_k_unitary, MultiunitarityReport, MultiunitaryError};
use crate::quantum::{qoa_to_moqlh, QuantumError, QuantumLatinHypercube, QuantumOrthogonalArray};
use crate::tensor::{ComplexMatrix, QuditState, TensorError};
use crate::tol;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Multiunitary(#[from] MultiunitaryError),

    #[error(transparent)]
    Quantum(#[from] QuantumError),

    #[error("bad search configuration: {0}")]
    BadConfig(String),

    #[error("matrix size {got} does not equal {d}^{k}")]
    SizeMismatch { got: usize, d: usize, k: usize },

    #[error("run did not reach the target residual (best {best:.3e})")]
    NotConverged { best: f64 },
}

/// Parameters of one search, including the RNG seed; identical
/// configurations produce identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub d: usize,
    pub k: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub target_residual: f64,
    /// A restart stops when its best residual improves by less than
    /// `stall_epsilon` over `stall_window` iterations. Zero epsilon
    /// disables the rule.
    pub stall_window: usize,
    pub stall_epsilon: f64,
}

impl SearchConfig {
    pub fn new(d: usize, k: usize) -> Self {
        Self {
            d,
            k,
            restarts: 20,
            max_iters: 2000,
            seed: 0,
            target_residual: 1e-8,
            stall_window: 200,
            stall_epsilon: 1e-10,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.d < 2 {
            return Err(SearchError::BadConfig("d must be at least 2".into()));
        }
        if !(self.k == 2 || self.k == 3) {
            return Err(SearchError::BadConfig(
                "target multiunitarity k must be 2 or 3".into(),
            ));
        }
        if self.restarts == 0 {
            return Err(SearchError::BadConfig("need at least one restart".into()));
        }
        if self.target_residual <= 0.0 {
            return Err(SearchError::BadConfig(
                "target residual must be positive".into(),
            ));
        }
        if self.stall_window == 0 {
            return Err(SearchError::BadConfig("stall window must be positive".into()));
        }
        (self.d as u64)
            .checked_pow(2 * self.k as u32)
            .filter(|&v| v <= 1 << 62)
            .ok_or_else(|| SearchError::BadConfig("state space too large".into()))?;
        Ok(())
    }
}

/// One decimated trace sample. `residual` is the combined residual after
/// the iteration; `best` is the running minimum, so the best-sequence is
/// nonincreasing.
#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub restart: usize,
    pub iter: usize,
    pub residual: f64,
    pub best: f64,
}

/// Outcome of a search: per-restart bests and the winning iterate.
#[derive(Debug, Clone)]
pub struct SearchRun {
    pub d: usize,
    pub k: usize,
    pub target_residual: f64,
    pub best_restart: usize,
    pub best_residual: f64,
    /// Default-bipartition coefficient matrix of the best iterate.
    pub best_matrix: ComplexMatrix,
    pub per_restart_best: Vec<f64>,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
    pub wall_time_ms: u128,
}

/// Dense iterate over `2k` qudit indices with gather/scatter views per
/// bipartition.
struct Iterate {
    d: usize,
    k: usize,
    amps: Vec<Complex64>,
}

impl Iterate {
    fn from_matrix(matrix: &ComplexMatrix, d: usize, k: usize) -> Self {
        let dim = d.pow(k as u32);
        let mut amps = vec![Complex64::ZERO; dim * dim];
        for mu in 0..dim {
            for nu in 0..dim {
                // The default bipartition packs as high digits x low digits.
                amps[mu * dim + nu] = matrix.get(mu, nu);
            }
        }
        Self { d, k, amps }
    }

    fn dim(&self) -> usize {
        self.d.pow(self.k as u32)
    }

    /// Packed offsets contributed by `parties` for each matrix index.
    fn offsets(&self, parties: &[usize]) -> Vec<usize> {
        let n = 2 * self.k;
        let dim = self.dim();
        let strides: Vec<usize> = parties
            .iter()
            .map(|&p| self.d.pow((n - 1 - p) as u32))
            .collect();
        (0..dim)
            .map(|mut idx| {
                let mut offset = 0;
                for &stride in strides.iter().rev() {
                    offset += (idx % self.d) * stride;
                    idx /= self.d;
                }
                offset
            })
            .collect()
    }

    fn gather(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        let dim = self.dim();
        let row_offsets = self.offsets(rows);
        let col_offsets = self.offsets(cols);
        ComplexMatrix::from_fn(dim, dim, |mu, nu| {
            self.amps[row_offsets[mu] + col_offsets[nu]]
        })
    }

    fn scatter(&mut self, rows: &[usize], cols: &[usize], matrix: &ComplexMatrix) {
        let dim = self.dim();
        let row_offsets = self.offsets(rows);
        let col_offsets = self.offsets(cols);
        for mu in 0..dim {
            for nu in 0..dim {
                self.amps[row_offsets[mu] + col_offsets[nu]] = matrix.get(mu, nu);
            }
        }
    }

    fn default_matrix(&self) -> ComplexMatrix {
        let dim = self.dim();
        ComplexMatrix::from_fn(dim, dim, |mu, nu| self.amps[mu * dim + nu])
    }
}

/// Bipartitions to project on: one representative per complement pair, in
/// lexicographic order (those containing party 0).
fn projection_cycle(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = 2 * k;
    (0..n)
        .combinations(k)
        .filter(|subset| subset[0] == 0)
        .map(|subset| {
            let complement: Vec<usize> = (0..n).filter(|p| !subset.contains(p)).collect();
            (subset, complement)
        })
        .collect()
}

/// Max residual over the projection cycle; complements share residuals by
/// transposition, so the representatives cover every bipartition.
fn combined_residual(iterate: &Iterate, cycle: &[(Vec<usize>, Vec<usize>)]) -> f64 {
    cycle
        .iter()
        .map(|(rows, cols)| {
            iterate
                .gather(rows, cols)
                .unitarity_residual()
                .expect("gathered matrices are square")
        })
        .fold(0.0, f64::max)
}

fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let normal = StandardNormal;
    loop {
        let gaussian = ComplexMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(normal.sample(rng), normal.sample(rng))
        });
        // Gaussian matrices are almost surely full rank; resample on the
        // measure-zero failure.
        match gaussian.polar_unitary_factor(tol::RANK) {
            Ok(unitary) => return unitary,
            Err(_) => continue,
        }
    }
}

struct RestartOutcome {
    best_residual: f64,
    best_matrix: ComplexMatrix,
    converged: bool,
    trace: Vec<TracePoint>,
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> RestartOutcome {
    let dim = cfg.d.pow(cfg.k as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
    let mut iterate = Iterate::from_matrix(&random_unitary(dim, &mut rng), cfg.d, cfg.k);
    let cycle = projection_cycle(cfg.k);
    let stride = (cfg.max_iters / 1000).max(1);

    let mut best = combined_residual(&iterate, &cycle);
    let mut best_matrix = iterate.default_matrix();
    let mut trace = vec![TracePoint {
        restart,
        iter: 0,
        residual: best,
        best,
    }];
    let mut history: VecDeque<f64> = VecDeque::with_capacity(cfg.stall_window + 1);
    let mut converged = best < cfg.target_residual;

    let mut iter = 0;
    while !converged && iter < cfg.max_iters {
        iter += 1;
        for (rows, cols) in &cycle {
            let projected = iterate
                .gather(rows, cols)
                .polar_unitary_factor(tol::RANK);
            match projected {
                Ok(unitary) => iterate.scatter(rows, cols, &unitary),
                // A rank-deficient reordering cannot be projected; leave it
                // for the next cycle to move away from.
                Err(_) => continue,
            }
        }
        let residual = combined_residual(&iterate, &cycle);
        if residual < best {
            best = residual;
            best_matrix = iterate.default_matrix();
        }
        if iter % stride == 0 || iter == cfg.max_iters {
            trace.push(TracePoint {
                restart,
                iter,
                residual,
                best,
            });
        }
        if best < cfg.target_residual {
            converged = true;
            break;
        }
        history.push_back(best);
        if history.len() > cfg.stall_window {
            let stale = history.pop_front().expect("window is nonempty");
            if stale - best < cfg.stall_epsilon {
                break;
            }
        }
    }

    RestartOutcome {
        best_residual: best,
        best_matrix,
        converged,
        trace,
    }
}

/// Runs the full multi-restart search. Restarts are independent (and run in
/// parallel); the aggregate winner is the lowest residual with ties broken
/// by restart index, so results are deterministic for a fixed seed.
pub fn search_k_unitary(cfg: &SearchConfig) -> Result<SearchRun, SearchError> {
    cfg.validate()?;
    let started = Instant::now();
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| run_restart(cfg, restart))
        .collect();

    let mut best_restart = 0;
    for (idx, outcome) in outcomes.iter().enumerate() {
        if outcome.best_residual < outcomes[best_restart].best_residual {
            best_restart = idx;
        }
    }
    let per_restart_best: Vec<f64> = outcomes.iter().map(|o| o.best_residual).collect();
    let trace: Vec<TracePoint> = outcomes.iter().flat_map(|o| o.trace.clone()).collect();
    let winner = &outcomes[best_restart];

    Ok(SearchRun {
        d: cfg.d,
        k: cfg.k,
        target_residual: cfg.target_residual,
        best_restart,
        best_residual: winner.best_residual,
        best_matrix: winner.best_matrix.clone(),
        per_restart_best,
        converged: winner.converged,
        trace,
        wall_time_ms: started.elapsed().as_millis(),
    })
}

/// Wraps a candidate matrix as the coefficient tensor of a `2k`-party state
/// and reports all bipartition residuals.
pub fn verify_candidate(
    matrix: &ComplexMatrix,
    d: usize,
    k: usize,
) -> Result<MultiunitarityReport, SearchError> {
    let dim = d.pow(k as u32);
    if matrix.rows() != dim || matrix.cols() != dim {
        return Err(SearchError::SizeMismatch {
            got: matrix.rows(),
            d,
            k,
        });
    }
    let state = matrix_to_state(matrix, d, k)?;
    Ok(is_k_unitary(&state)?)
}

/// The `2k`-party state whose default coefficient matrix is `matrix`.
pub fn matrix_to_state(
    matrix: &ComplexMatrix,
    d: usize,
    k: usize,
) -> Result<QuditState, SearchError> {
    let dim = d.pow(k as u32);
    if matrix.rows() != dim || matrix.cols() != dim {
        return Err(SearchError::SizeMismatch {
            got: matrix.rows(),
            d,
            k,
        });
    }
    let mut state = QuditState::zero(2 * k, d)?;
    for mu in 0..dim {
        for nu in 0..dim {
            let amp = matrix.get(mu, nu);
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let mut digits = vec![0u8; 2 * k];
            let mut rem = mu;
            for slot in digits[..k].iter_mut().rev() {
                *slot = (rem % d) as u8;
                rem /= d;
            }
            let mut rem = nu;
            for slot in digits[k..].iter_mut().rev() {
                *slot = (rem % d) as u8;
                rem /= d;
            }
            state.add_term(&digits, amp)?;
        }
    }
    Ok(state)
}

/// Packages a successful run as a quantum orthogonal array with basis
/// addresses and the gate columns as payloads, plus the extracted Latin
/// arrangement.
pub fn extract_designs(
    run: &SearchRun,
) -> Result<(QuantumOrthogonalArray, QuantumLatinHypercube), SearchError> {
    if !(run.converged && run.best_residual < run.target_residual) {
        return Err(SearchError::NotConverged {
            best: run.best_residual,
        });
    }
    let (d, k) = (run.d, run.k);
    let dim = d.pow(k as u32);
    let mut rows = Vec::with_capacity(dim);
    for address_idx in 0..dim {
        let mut address = vec![0u8; k];
        let mut rem = address_idx;
        for slot in address.iter_mut().rev() {
            *slot = (rem % d) as u8;
            rem /= d;
        }
        let front = QuditState::basis(k, d, &address)?;
        let mut payload = QuditState::zero(k, d)?;
        for row in 0..dim {
            let amp = run.best_matrix.get(row, address_idx);
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let mut digits = vec![0u8; k];
            let mut rem = row;
            for slot in digits.iter_mut().rev() {
                *slot = (rem % d) as u8;
                rem /= d;
            }
            payload.add_term(&digits, amp)?;
        }
        rows.push(front.tensor(&payload)?);
    }
    let qoa = QuantumOrthogonalArray::new(2 * k, d, k, rows)?;
    let squares = qoa_to_moqlh(&qoa)?;
    Ok((qoa, squares))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ame_4_3, hadamard_3unitary_matrix};
    use crate::multiunitary::state_to_matrix;

    #[test]
    fn projection_cycle_pairs_all_bipartitions() {
        let cycle = projection_cycle(2);
        let subsets: Vec<Vec<usize>> = cycle.iter().map(|(s, _)| s.clone()).collect();
        assert_eq!(subsets, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert_eq!(projection_cycle(3).len(), 10);
    }

    #[test]
    fn candidate_verification_matches_direct_check() {
        let matrix = state_to_matrix(&ame_4_3(), &[0, 1]).unwrap();
        let report = verify_candidate(&matrix, 3, 2).unwrap();
        assert!(report.ok);
        assert!(report.worst < 1e-12);
    }

    #[test]
    fn identity_is_far_from_two_unitary() {
        let report = verify_candidate(&ComplexMatrix::identity(9), 3, 2).unwrap();
        assert!(!report.ok);
        assert!(report.worst > 1.0);
    }

    #[test]
    fn hadamard_candidate_is_three_unitary() {
        let matrix = hadamard_3unitary_matrix(2)
            .unwrap()
            .scaled(Complex64::new(1.0 / 8.0f64.sqrt(), 0.0));
        let report = verify_candidate(&matrix, 2, 3).unwrap();
        assert!(report.ok, "worst residual {}", report.worst);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(matches!(
            verify_candidate(&ComplexMatrix::identity(8), 3, 2),
            Err(SearchError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn search_is_deterministic() {
        let mut cfg = SearchConfig::new(3, 2);
        cfg.restarts = 2;
        cfg.max_iters = 40;
        cfg.seed = 11;
        let a = search_k_unitary(&cfg).unwrap();
        let b = search_k_unitary(&cfg).unwrap();
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a.trace.iter().zip(&b.trace) {
            assert_eq!((x.restart, x.iter), (y.restart, y.iter));
            assert!(x.residual.to_bits() == y.residual.to_bits());
            assert!(x.best.to_bits() == y.best.to_bits());
        }
        assert_eq!(a.best_restart, b.best_restart);
        assert!(a.best_residual.to_bits() == b.best_residual.to_bits());
    }

    #[test]
    fn projection_step_zeroes_its_own_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut iterate = Iterate::from_matrix(&random_unitary(9, &mut rng), 3, 2);
        let cycle = projection_cycle(2);
        for (rows, cols) in &cycle {
            let before = iterate
                .gather(rows, cols)
                .unitarity_residual()
                .unwrap();
            let unitary = iterate
                .gather(rows, cols)
                .polar_unitary_factor(tol::RANK)
                .unwrap();
            iterate.scatter(rows, cols, &unitary);
            let after = iterate.gather(rows, cols).unitarity_residual().unwrap();
            assert!(after <= before + 1e-12);
            assert!(after < 1e-12);
        }
    }

    #[test]
    fn failed_runs_refuse_extraction() {
        let mut cfg = SearchConfig::new(2, 2);
        cfg.restarts = 1;
        cfg.max_iters = 30;
        let run = search_k_unitary(&cfg).unwrap();
        assert!(!run.converged);
        assert!(matches!(
            extract_designs(&run),
            Err(SearchError::NotConverged { .. })
        ));
    }
}

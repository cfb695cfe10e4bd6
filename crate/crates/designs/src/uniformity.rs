//! k-uniformity certification, support analysis, column-count bounds and
//! robustness diagnostics (measurement residuals, connectedness,
//! persistency).

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::tensor::{ComplexMatrix, QuditState, TensorError};
use crate::tol;

#[derive(Debug, Error)]
pub enum UniformityError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error("k = {k} out of range: need 1 <= k <= {max} for {n} parties")]
    KOutOfRange { k: usize, n: usize, max: usize },

    #[error("projection onto the requested outcomes has zero probability")]
    ZeroProjection,

    #[error("pair ({0}, {1}) is not two distinct parties")]
    BadPair(usize, usize),

    #[error("measurement basis for party {party} must be a {d}x{d} unitary")]
    BadBasis { party: usize, d: usize },
}

/// Result of checking all `C(n,k)` reductions against the maximally mixed
/// state.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityCheck {
    pub ok: bool,
    pub worst_subset: Vec<usize>,
    pub worst_deviation: f64,
}

/// Deviations of every reduction at one uniformity level.
#[derive(Debug, Clone, Serialize)]
pub struct SubsetDeviation {
    pub subset: Vec<usize>,
    pub deviation: f64,
}

/// Aggregated uniformity profile of a state.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    pub n: usize,
    pub d: usize,
    /// Largest k with every reduction proportional to the identity.
    pub max_k: usize,
    /// Whether `max_k` reaches `floor(n/2)`.
    pub is_ame: bool,
    /// Count of nonzero computational amplitudes.
    pub support: usize,
    /// Whether the support equals `d^max_k`.
    pub minimal_support: bool,
    /// Per-subset deviations at level `max_k + 1` (empty when `max_k`
    /// already reaches `floor(n/2)`).
    pub witnesses: Vec<SubsetDeviation>,
}

/// Deviations of all `C(n,k)` reductions of a unit-norm state.
fn level_deviations(normalized: &QuditState, k: usize) -> Vec<SubsetDeviation> {
    let n = normalized.parties();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    subsets
        .into_par_iter()
        .map(|subset| {
            let traced: Vec<usize> = (0..n).filter(|p| !subset.contains(p)).collect();
            let rho = normalized
                .partial_trace(&traced)
                .expect("subset leaves a nonempty complement");
            let (_, deviation) = rho.identity_proportionality();
            SubsetDeviation { subset, deviation }
        })
        .collect()
}

fn worst_of(deviations: &[SubsetDeviation]) -> (Vec<usize>, f64) {
    let mut worst_subset = Vec::new();
    let mut worst = -1.0;
    for entry in deviations {
        if entry.deviation > worst {
            worst = entry.deviation;
            worst_subset = entry.subset.clone();
        }
    }
    (worst_subset, worst)
}

/// Checks that every reduction to `k` parties is proportional to the
/// identity, at absolute tolerance `tol` after rescaling to unit norm.
pub fn certify_uniformity(
    state: &QuditState,
    k: usize,
    tol: f64,
) -> Result<UniformityCheck, UniformityError> {
    let n = state.parties();
    let max = n / 2;
    if k == 0 || k > max {
        return Err(UniformityError::KOutOfRange { k, n, max });
    }
    let normalized = state.normalized()?;
    let deviations = level_deviations(&normalized, k);
    let (worst_subset, worst_deviation) = worst_of(&deviations);
    Ok(UniformityCheck {
        ok: worst_deviation <= tol,
        worst_subset,
        worst_deviation,
    })
}

/// Scans k upward and reports the profile of the state.
pub fn uniformity_report(state: &QuditState) -> Result<UniformityReport, UniformityError> {
    let n = state.parties();
    let d = state.levels();
    let normalized = state.normalized()?;
    let mut max_k = 0;
    let mut witnesses = Vec::new();
    for k in 1..=n / 2 {
        let deviations = level_deviations(&normalized, k);
        let (_, worst) = worst_of(&deviations);
        if worst <= tol::IDENTITY {
            max_k = k;
        } else {
            witnesses = deviations;
            break;
        }
    }
    let support = state.support();
    Ok(UniformityReport {
        n,
        d,
        max_k,
        is_ame: max_k >= 1 && max_k == n / 2,
        support,
        minimal_support: support == d.pow(max_k as u32),
        witnesses,
    })
}

/// Maximal number of classical Latin hypercubes of size `d` in dimension
/// `k` that can be mutually orthogonal.
pub fn bush_bound(d: usize, k: usize) -> usize {
    if d <= k {
        k - 1
    } else if k >= 3 {
        d + k - 4
    } else {
        d + k - 3
    }
}

/// Closed-form bound on the number of mutually orthogonal quantum Latin
/// hypercubes at maximal dimension `k = floor(n/2)`. Not tight.
pub fn scott_bound(n: usize, d: usize) -> usize {
    if n % 2 == 0 {
        2 * (d * d - 1)
    } else {
        2 * d * (d + 1) - 1
    }
}

/// Bound report for the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Classical bound with its active branch.
    pub m_c: usize,
    pub m_c_case: &'static str,
    /// Quantum bound; only stated at maximal dimension `k = floor(n/2)`.
    pub m_q: Option<usize>,
    pub m_q_case: Option<&'static str>,
}

pub fn bounds_report(n: usize, d: usize, k: usize) -> BoundsReport {
    let m_c_case = if d <= k {
        "d <= k"
    } else if k >= 3 {
        "d > k >= 3"
    } else {
        "all other cases"
    };
    let at_max_dimension = k == n / 2;
    BoundsReport {
        n,
        d,
        k,
        m_c: bush_bound(d, k),
        m_c_case,
        m_q: at_max_dimension.then(|| scott_bound(n, d)),
        m_q_case: at_max_dimension.then(|| if n % 2 == 0 { "n even" } else { "n odd" }),
    }
}

/// Result of projecting some parties and certifying the remainder.
#[derive(Debug, Clone)]
pub struct MeasurementCheck {
    pub ok: bool,
    /// Unit-norm residual state on the unmeasured parties.
    pub residual: QuditState,
    /// Present when `residual_k >= 1`.
    pub uniformity: Option<UniformityCheck>,
}

/// Projects the listed parties onto computational outcomes, drops them,
/// renormalizes and certifies `residual_k`-uniformity of what is left.
pub fn measure_and_check(
    state: &QuditState,
    outcomes: &BTreeMap<usize, u8>,
    residual_k: usize,
) -> Result<MeasurementCheck, UniformityError> {
    let projected = state.project_parties(outcomes)?;
    if projected.is_zero() {
        return Err(UniformityError::ZeroProjection);
    }
    let residual = projected.normalized()?;
    if residual_k == 0 {
        return Ok(MeasurementCheck {
            ok: true,
            residual,
            uniformity: None,
        });
    }
    let check = certify_uniformity(&residual, residual_k, tol::IDENTITY)?;
    Ok(MeasurementCheck {
        ok: check.ok,
        residual,
        uniformity: Some(check),
    })
}

/// Result of a pairwise connectedness check.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectednessCheck {
    pub ok: bool,
    pub pair: (usize, usize),
    /// Complement outcomes with nonzero probability that were examined.
    pub outcomes_checked: usize,
    /// First failing outcome tuple with the purity it produced.
    pub witness: Option<(Vec<u8>, f64)>,
}

/// Outcome tuples below this fraction of total weight are treated as
/// zero-probability and skipped.
const OUTCOME_WEIGHT_FLOOR: f64 = 1e-12;

/// Tests whether measuring the complement of `pair` in the supplied product
/// bases (computational by default) always leaves the pair maximally
/// entangled, i.e. with single-party purity `1/d`.
pub fn connectedness_check(
    state: &QuditState,
    pair: (usize, usize),
    bases: Option<&BTreeMap<usize, ComplexMatrix>>,
) -> Result<ConnectednessCheck, UniformityError> {
    let n = state.parties();
    let d = state.levels();
    let (a, b) = pair;
    if a == b || a >= n || b >= n {
        return Err(UniformityError::BadPair(a, b));
    }
    let complement: Vec<usize> = (0..n).filter(|&p| p != a && p != b).collect();

    // Rotating by the adjoint basis turns every projection onto a basis
    // column into a computational-basis projection.
    let mut working = state.normalized()?;
    if let Some(bases) = bases {
        for (&party, basis) in bases {
            if !complement.contains(&party) {
                return Err(UniformityError::BadPair(party, party));
            }
            if basis.rows() != d || basis.cols() != d {
                return Err(UniformityError::BadBasis { party, d });
            }
            working = working.apply_local(party, &basis.adjoint())?;
        }
    }

    if complement.is_empty() {
        let purity = working.partial_trace(&[1])?.normalized_purity();
        let ok = (purity - 1.0 / d as f64).abs() <= tol::IDENTITY;
        return Ok(ConnectednessCheck {
            ok,
            pair,
            outcomes_checked: 1,
            witness: (!ok).then(|| (Vec::new(), purity)),
        });
    }

    let mut outcomes_checked = 0;
    let outcome_count = d.pow(complement.len() as u32);
    for mut outcome_idx in 0..outcome_count {
        let mut outcome = vec![0u8; complement.len()];
        for slot in outcome.iter_mut().rev() {
            *slot = (outcome_idx % d) as u8;
            outcome_idx /= d;
        }
        let assignment: BTreeMap<usize, u8> = complement
            .iter()
            .copied()
            .zip(outcome.iter().copied())
            .collect();
        let residual = working.project_parties(&assignment)?;
        if residual.norm_sqr() <= OUTCOME_WEIGHT_FLOOR {
            continue;
        }
        outcomes_checked += 1;
        // The residual lives on the pair; trace out its second party.
        let purity = residual.partial_trace(&[1])?.normalized_purity();
        if (purity - 1.0 / d as f64).abs() > tol::IDENTITY {
            return Ok(ConnectednessCheck {
                ok: false,
                pair,
                outcomes_checked,
                witness: Some((outcome, purity)),
            });
        }
    }
    Ok(ConnectednessCheck {
        ok: true,
        pair,
        outcomes_checked,
        witness: None,
    })
}

/// Certified lower bound on the persistency of entanglement: the largest
/// certified uniformity level. The exact persistency is not computed.
pub fn persistency_lower_bound(state: &QuditState) -> Result<usize, UniformityError> {
    Ok(uniformity_report(state)?.max_k)
}

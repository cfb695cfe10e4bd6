//! Quantum Latin arrangements, quantum orthogonal arrays, and the
//! conversions among them and to states.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{ClassicalLatinHypercube, OrthogonalArray};
use crate::tensor::{ComplexMatrix, DensityOperator, QuditState, StateJson, TensorError};
use crate::tol;
use crate::uniformity::{certify_uniformity, UniformityCheck, UniformityError};

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Uniformity(#[from] UniformityError),

    #[error("expected a square arrangement (dimension 2), got dimension {0}")]
    ExpectedSquare(usize),

    #[error("expected single-qudit cells, got {0}-qudit cells")]
    ExpectedSingleQuditCells(usize),

    #[error("arrangements have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("cell count {got} does not match d^k = {expected}")]
    CellCount { got: usize, expected: usize },

    #[error("cell {cell} lives on the wrong space or has zero norm")]
    BadCell { cell: usize },

    #[error("row {row} lives on the wrong space or has zero norm")]
    BadRow { row: usize },

    #[error("strength {k} out of range for {n} columns")]
    BadStrength { k: usize, n: usize },

    #[error("index is not unity: {r} rows, expected {expected} = d^k")]
    IndexNotUnity { r: usize, expected: usize },

    #[error("row {row} does not factor as a basis address times a payload")]
    RowNotFactorizable { row: usize },

    #[error("two rows share the address {0:?}")]
    DuplicateAddress(Vec<u8>),

    #[error("rows {0} and {1} are not orthogonal (overlap {2:.3e})")]
    RowsNotOrthogonal(usize, usize, f64),

    #[error("array failed verification: worst deviation {worst:.3e} on subset {subset:?}")]
    QoaRejected { worst: f64, subset: Vec<usize> },
}

/// A `d^k`-cell arrangement of `m`-qudit states.
///
/// `m = 1` covers quantum Latin squares, cubes and hypercubes proper;
/// `m >= 2` covers mutually orthogonal families with entangled cells.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumLatinHypercube {
    d: usize,
    k: usize,
    m: usize,
    cells: Vec<QuditState>,
}

/// Wire format: cells keyed by comma-joined address.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QlhJson {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub cells: BTreeMap<String, StateJson>,
}

impl QuantumLatinHypercube {
    pub fn new(
        d: usize,
        k: usize,
        m: usize,
        cells: Vec<QuditState>,
    ) -> Result<Self, QuantumError> {
        if k == 0 {
            return Err(QuantumError::BadStrength { k, n: 0 });
        }
        let expected = d.pow(k as u32);
        if cells.len() != expected {
            return Err(QuantumError::CellCount {
                got: cells.len(),
                expected,
            });
        }
        for (i, cell) in cells.iter().enumerate() {
            if cell.parties() != m || cell.levels() != d || cell.is_zero() {
                return Err(QuantumError::BadCell { cell: i });
            }
        }
        Ok(Self { d, k, m, cells })
    }

    /// Lifts classical hypercubes to one arrangement of basis-state cells,
    /// one qudit per source cube.
    pub fn from_classical(cubes: &[ClassicalLatinHypercube]) -> Result<Self, QuantumError> {
        let first = cubes.first().expect("at least one cube");
        let (d, k) = (first.size(), first.dimension());
        let m = cubes.len();
        let mut cells = Vec::with_capacity(d.pow(k as u32));
        for address in first.addresses() {
            let digits: Vec<u8> = cubes.iter().map(|cube| cube.value(&address)).collect();
            cells.push(QuditState::basis(m, d, &digits)?);
        }
        Self::new(d, k, m, cells)
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn qudits_per_cell(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[QuditState] {
        &self.cells
    }

    fn offset(&self, address: &[u8]) -> usize {
        address
            .iter()
            .fold(0usize, |acc, &digit| acc * self.d + digit as usize)
    }

    pub fn cell(&self, address: &[u8]) -> &QuditState {
        &self.cells[self.offset(address)]
    }

    pub fn addresses(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let (d, k) = (self.d, self.k);
        (0..self.cells.len()).map(move |mut idx| {
            let mut address = vec![0u8; k];
            for slot in address.iter_mut().rev() {
                *slot = (idx % d) as u8;
                idx /= d;
            }
            address
        })
    }

    /// The `(k + m)`-party state `sum_addr |addr> (x) cell(addr)` induced by
    /// the arrangement.
    pub fn induced_state(&self) -> Result<QuditState, QuantumError> {
        let mut sum = QuditState::zero(self.k + self.m, self.d)?;
        for (address, cell) in self.addresses().zip(&self.cells) {
            let front = QuditState::basis(self.k, self.d, &address)?;
            sum = sum.superpose(&front.tensor(cell)?)?;
        }
        Ok(sum)
    }

    /// Axis-parallel lines as `(axis, fixed coords, cell offsets)`.
    fn lines(&self) -> Vec<(usize, Vec<u8>, Vec<usize>)> {
        let mut lines = Vec::new();
        for axis in 0..self.k {
            let others: Vec<usize> = (0..self.k).filter(|&a| a != axis).collect();
            let count = self.d.pow(others.len() as u32);
            for mut fixed_idx in 0..count {
                let fixed_digits = {
                    let mut digits = vec![0u8; others.len()];
                    for slot in digits.iter_mut().rev() {
                        *slot = (fixed_idx % self.d) as u8;
                        fixed_idx /= self.d;
                    }
                    digits
                };
                let mut address = vec![0u8; self.k];
                for (&pos, &digit) in others.iter().zip(&fixed_digits) {
                    address[pos] = digit;
                }
                let offsets = (0..self.d)
                    .map(|v| {
                        address[axis] = v as u8;
                        self.offset(&address)
                    })
                    .collect();
                lines.push((axis, fixed_digits, offsets));
            }
        }
        lines
    }

    pub fn to_json(&self) -> QlhJson {
        let cells = self
            .addresses()
            .zip(&self.cells)
            .map(|(address, cell)| (address.iter().join(","), cell.to_json()))
            .collect();
        QlhJson {
            d: self.d,
            k: self.k,
            m: self.m,
            cells,
        }
    }

    pub fn from_json(json: &QlhJson) -> Result<Self, QuantumError> {
        let expected = json.d.pow(json.k as u32);
        let mut cells = vec![None; expected];
        for (key, state_json) in &json.cells {
            let address: Vec<u8> = key
                .split(',')
                .map(|token| token.trim().parse::<u8>())
                .collect::<Result<_, _>>()
                .map_err(|_| QuantumError::CellCount {
                    got: 0,
                    expected,
                })?;
            let offset = address
                .iter()
                .fold(0usize, |acc, &digit| acc * json.d + digit as usize);
            cells[offset] = Some(QuditState::from_json(state_json)?);
        }
        let cells: Option<Vec<QuditState>> = cells.into_iter().collect();
        let cells = cells.ok_or(QuantumError::CellCount {
            got: json.cells.len(),
            expected,
        })?;
        Self::new(json.d, json.k, json.m, cells)
    }
}

/// Witness for a failed line condition.
#[derive(Debug, Clone, Serialize)]
pub struct LineWitness {
    /// Coordinate that varies along the line.
    pub axis: usize,
    /// The other coordinates, in ascending axis order.
    pub fixed: Vec<u8>,
    pub deviation: f64,
}

/// Result of a line-orthonormality check.
#[derive(Debug, Clone, Serialize)]
pub struct LatinCheck {
    pub ok: bool,
    pub witness: Option<LineWitness>,
}

/// Largest pairwise overlap among the listed unit vectors.
fn max_pairwise_overlap(cells: &[QuditState]) -> Result<(f64, Option<(usize, usize)>), QuantumError> {
    let mut max = 0.0f64;
    let mut witness = None;
    for (a, b) in (0..cells.len()).tuple_combinations() {
        let overlap = cells[a].inner_product(&cells[b])?.norm();
        if overlap > max {
            max = overlap;
            witness = Some((a, b));
        }
    }
    Ok((max, witness))
}

fn check_lines_orthonormal(h: &QuantumLatinHypercube) -> Result<LatinCheck, QuantumError> {
    let normalized: Vec<QuditState> = h
        .cells
        .iter()
        .map(QuditState::normalized)
        .collect::<Result<_, _>>()?;
    for (axis, fixed, offsets) in h.lines() {
        let line: Vec<QuditState> = offsets.iter().map(|&o| normalized[o].clone()).collect();
        let (deviation, _) = max_pairwise_overlap(&line)?;
        if deviation > tol::IDENTITY {
            return Ok(LatinCheck {
                ok: false,
                witness: Some(LineWitness {
                    axis,
                    fixed,
                    deviation,
                }),
            });
        }
    }
    Ok(LatinCheck { ok: true, witness: None })
}

/// Checks that every row and column of a `d x d` single-qudit arrangement is
/// an orthonormal basis (after rescaling cells to unit norm).
pub fn verify_qls(h: &QuantumLatinHypercube) -> Result<LatinCheck, QuantumError> {
    if h.dimension() != 2 {
        return Err(QuantumError::ExpectedSquare(h.dimension()));
    }
    verify_qlh_lines(h)
}

/// Checks that all `k * d^(k-1)` axis-parallel lines of a single-qudit
/// hypercube are orthonormal `d`-sets.
pub fn verify_qlh_lines(h: &QuantumLatinHypercube) -> Result<LatinCheck, QuantumError> {
    if h.qudits_per_cell() != 1 {
        return Err(QuantumError::ExpectedSingleQuditCells(h.qudits_per_cell()));
    }
    check_lines_orthonormal(h)
}

/// Result of the mutual-orthogonality check for quantum Latin hypercubes.
#[derive(Debug, Clone, Serialize)]
pub struct MoqlhCheck {
    pub ok: bool,
    /// Whether all `d^k` cells are mutually orthogonal.
    pub cells_orthogonal: bool,
    pub max_cell_overlap: f64,
    /// Whether every axis-parallel line sums to a 1-uniform state.
    pub lines_uniform: bool,
    pub witness: Option<LineWitness>,
}

/// Checks the two defining conditions of a mutually orthogonal family:
/// global orthogonality of the cells, and 1-uniformity of every
/// axis-parallel line sum (cells rescaled to unit norm first).
pub fn verify_moqlh(h: &QuantumLatinHypercube) -> Result<MoqlhCheck, QuantumError> {
    let normalized: Vec<QuditState> = h
        .cells
        .iter()
        .map(QuditState::normalized)
        .collect::<Result<_, _>>()?;
    let (max_cell_overlap, _) = max_pairwise_overlap(&normalized)?;
    let cells_orthogonal = max_cell_overlap <= tol::IDENTITY;

    let mut lines_uniform = true;
    let mut witness = None;
    for (axis, fixed, offsets) in h.lines() {
        let mut sum = QuditState::zero(h.m, h.d)?;
        for &offset in &offsets {
            sum = sum.superpose(&normalized[offset])?;
        }
        // A cancelled line sum is maximally non-uniform.
        let deviation = if sum.is_zero() {
            1.0
        } else if h.m == 1 {
            // Single-qudit cells: the line sum itself must be maximally
            // mixed, which a pure qudit state never is for d >= 2.
            let rho = sum.normalized()?.partial_trace(&[])?;
            rho.identity_proportionality().1
        } else {
            certify_uniformity(&sum, 1, tol::IDENTITY)?.worst_deviation
        };
        if deviation > tol::IDENTITY {
            lines_uniform = false;
            witness = Some(LineWitness {
                axis,
                fixed,
                deviation,
            });
            break;
        }
    }
    Ok(MoqlhCheck {
        ok: cells_orthogonal && lines_uniform,
        cells_orthogonal,
        max_cell_overlap,
        lines_uniform,
        witness,
    })
}

/// Result of the weak-orthogonality check between two squares.
#[derive(Debug, Clone, Serialize)]
pub struct WeakOrthogonalityCheck {
    pub ok: bool,
    /// First `(i, j)` whose overlap vector is not a basis vector, with its
    /// deviation.
    pub witness: Option<(usize, usize, f64)>,
}

/// Tests weak orthogonality of two single-qudit squares: for every pair of
/// row indices `(i, j)` the vector of cell overlaps along the rows must be a
/// computational basis vector, up to a global phase.
pub fn verify_weak_orthogonality(
    a: &QuantumLatinHypercube,
    b: &QuantumLatinHypercube,
) -> Result<WeakOrthogonalityCheck, QuantumError> {
    for h in [a, b] {
        if h.dimension() != 2 {
            return Err(QuantumError::ExpectedSquare(h.dimension()));
        }
        if h.qudits_per_cell() != 1 {
            return Err(QuantumError::ExpectedSingleQuditCells(h.qudits_per_cell()));
        }
    }
    if a.size() != b.size() {
        return Err(QuantumError::SizeMismatch(a.size(), b.size()));
    }
    let d = a.size();
    let norm_a: Vec<QuditState> = a.cells.iter().map(|c| c.normalized()).collect::<Result<_, _>>()?;
    let norm_b: Vec<QuditState> = b.cells.iter().map(|c| c.normalized()).collect::<Result<_, _>>()?;

    for i in 0..d {
        for j in 0..d {
            let overlaps: Vec<f64> = (0..d)
                .map(|l| {
                    let cell_a = &norm_a[i * d + l];
                    let cell_b = &norm_b[j * d + l];
                    cell_a.inner_product(cell_b).map(|z| z.norm())
                })
                .collect::<Result<_, _>>()?;
            let (t, &largest) = overlaps
                .iter()
                .enumerate()
                .max_by(|(_, x), (_, y)| x.total_cmp(y))
                .expect("d >= 2");
            let rest = overlaps
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != t)
                .map(|(_, &v)| v)
                .fold(0.0, f64::max);
            let deviation = (1.0 - largest).abs().max(rest);
            if deviation > tol::IDENTITY {
                return Ok(WeakOrthogonalityCheck {
                    ok: false,
                    witness: Some((i, j, deviation)),
                });
            }
        }
    }
    Ok(WeakOrthogonalityCheck { ok: true, witness: None })
}

/// An arrangement of `r` pure states on `n` qudits whose every reduction to
/// `k` columns sums to a scaled identity.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOrthogonalArray {
    n: usize,
    d: usize,
    k: usize,
    rows: Vec<QuditState>,
}

/// Wire format: `{"n", "d", "k", "rows": [state, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QoaJson {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub rows: Vec<StateJson>,
}

impl QuantumOrthogonalArray {
    pub fn new(
        n: usize,
        d: usize,
        k: usize,
        rows: Vec<QuditState>,
    ) -> Result<Self, QuantumError> {
        if k == 0 || k > n {
            return Err(QuantumError::BadStrength { k, n });
        }
        if rows.is_empty() {
            return Err(QuantumError::BadRow { row: 0 });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.parties() != n || row.levels() != d || row.is_zero() {
                return Err(QuantumError::BadRow { row: i });
            }
        }
        Ok(Self { n, d, k, rows })
    }

    /// Lifts a classical array: each digit row becomes a basis state.
    pub fn from_classical(oa: &OrthogonalArray) -> Result<Self, QuantumError> {
        let rows = (0..oa.rows())
            .map(|i| QuditState::basis(oa.columns(), oa.alphabet(), oa.row(i)))
            .collect::<Result<_, _>>()?;
        Self::new(oa.columns(), oa.alphabet(), oa.strength(), rows)
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.d
    }

    pub fn strength(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[QuditState] {
        &self.rows
    }

    /// Plain superposition of the stored rows.
    pub fn superposed_rows(&self) -> Result<QuditState, QuantumError> {
        let mut sum = QuditState::zero(self.n, self.d)?;
        for row in &self.rows {
            sum = sum.superpose(row)?;
        }
        Ok(sum)
    }

    pub fn to_json(&self) -> QoaJson {
        QoaJson {
            n: self.n,
            d: self.d,
            k: self.k,
            rows: self.rows.iter().map(QuditState::to_json).collect(),
        }
    }

    pub fn from_json(json: &QoaJson) -> Result<Self, QuantumError> {
        let rows = json
            .rows
            .iter()
            .map(QuditState::from_json)
            .collect::<Result<_, _>>()?;
        Self::new(json.n, json.d, json.k, rows)
    }
}

/// Full verification report for a quantum orthogonal array.
///
/// `povm_ok` is the defining condition: for every `k`-subset the summed
/// reduction of the unit-norm rows is proportional to the identity, with
/// factor `r/d^k`. `rows_orthogonal` and `induced_uniform` are the
/// companion conditions under which the row sum is a `k`-uniform state;
/// both diagnostics are reported separately because a balanced array with
/// redundant complements passes the first and fails the last.
#[derive(Debug, Clone, Serialize)]
pub struct QoaReport {
    pub ok: bool,
    pub r: usize,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Proportionality factor `r/d^k` expected on unit-norm rows.
    pub factor: f64,
    pub povm_ok: bool,
    pub worst_deviation: f64,
    pub witness_subset: Option<Vec<usize>>,
    pub rows_orthogonal: bool,
    pub max_row_overlap: f64,
    pub row_witness: Option<(usize, usize)>,
    /// k-uniformity of the literal row sum; absent when `k > floor(n/2)`,
    /// where no pure state can reach the level.
    pub induced_uniform: Option<bool>,
    pub induced_check: Option<UniformityCheck>,
}

pub fn verify_qoa(qoa: &QuantumOrthogonalArray) -> Result<QoaReport, QuantumError> {
    let (n, d, k) = (qoa.n, qoa.d, qoa.k);
    let r = qoa.rows.len();
    let dim_k = d.pow(k as u32);
    let factor = r as f64 / dim_k as f64;

    let normalized: Vec<QuditState> = qoa
        .rows
        .iter()
        .map(QuditState::normalized)
        .collect::<Result<_, _>>()?;

    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let deviations: Vec<(Vec<usize>, f64)> = subsets
        .into_par_iter()
        .map(|subset| {
            let traced: Vec<usize> = (0..n).filter(|p| !subset.contains(p)).collect();
            let mut acc = ComplexMatrix::zeros(dim_k, dim_k);
            for row in &normalized {
                let rho = row
                    .partial_trace(&traced)
                    .expect("subset leaves a nonempty complement");
                acc.add_in_place(rho.matrix());
            }
            let summed = DensityOperator::new(subset.clone(), acc);
            let (_, deviation) = summed.identity_proportionality();
            (subset, deviation)
        })
        .collect();
    let mut worst_deviation = -1.0;
    let mut witness_subset = Vec::new();
    for (subset, deviation) in &deviations {
        if *deviation > worst_deviation {
            worst_deviation = *deviation;
            witness_subset = subset.clone();
        }
    }
    let povm_ok = worst_deviation <= tol::IDENTITY;

    let (max_row_overlap, row_witness) = max_pairwise_overlap(&normalized)?;
    let rows_orthogonal = max_row_overlap <= tol::IDENTITY;

    let (induced_uniform, induced_check) = if k <= n / 2 {
        let sum = qoa.superposed_rows()?;
        if sum.is_zero() {
            (Some(false), None)
        } else {
            let check = certify_uniformity(&sum, k, tol::IDENTITY)?;
            (Some(check.ok), Some(check))
        }
    } else {
        (None, None)
    };

    let ok = povm_ok && rows_orthogonal && induced_uniform.unwrap_or(true);
    Ok(QoaReport {
        ok,
        r,
        n,
        d,
        k,
        factor,
        povm_ok,
        worst_deviation,
        witness_subset: (!povm_ok).then_some(witness_subset),
        rows_orthogonal,
        max_row_overlap,
        row_witness: (!rows_orthogonal).then_some(row_witness).flatten(),
        induced_uniform,
        induced_check,
    })
}

/// Sums the rows of a verified array into a `k`-uniform state.
///
/// Rejects arrays whose rows are not mutually orthogonal (the quantum
/// analogue of redundancy) with a distinct error.
pub fn qoa_to_state(qoa: &QuantumOrthogonalArray) -> Result<QuditState, QuantumError> {
    let report = verify_qoa(qoa)?;
    if !report.rows_orthogonal {
        let (a, b) = report.row_witness.unwrap_or((0, 0));
        return Err(QuantumError::RowsNotOrthogonal(a, b, report.max_row_overlap));
    }
    if !report.ok {
        let induced = report.induced_check.as_ref();
        let worst = report
            .worst_deviation
            .max(induced.map(|c| c.worst_deviation).unwrap_or(0.0));
        let subset = report
            .witness_subset
            .clone()
            .or_else(|| induced.map(|c| c.worst_subset.clone()))
            .unwrap_or_default();
        return Err(QuantumError::QoaRejected { worst, subset });
    }
    qoa.superposed_rows()
}

/// Extracts the Latin arrangement addressed by the first `k` columns:
/// the cell at each address is the payload on the remaining `m = n - k`
/// columns.
pub fn qoa_to_moqlh(
    qoa: &QuantumOrthogonalArray,
) -> Result<QuantumLatinHypercube, QuantumError> {
    let (n, d, k) = (qoa.n, qoa.d, qoa.k);
    if k >= n {
        return Err(QuantumError::BadStrength { k, n });
    }
    let expected = d.pow(k as u32);
    if qoa.rows.len() != expected {
        return Err(QuantumError::IndexNotUnity {
            r: qoa.rows.len(),
            expected,
        });
    }
    let m = n - k;
    let mut cells: Vec<Option<QuditState>> = vec![None; expected];
    for (row_idx, row) in qoa.rows.iter().enumerate() {
        // The row must reduce to a rank-1 basis projector on the address
        // block, i.e. carry a single common prefix.
        let normalized = row.normalized()?;
        let rho = normalized.partial_trace(&(k..n).collect::<Vec<_>>())?;
        let mut address_offset = 0;
        let mut best = -1.0;
        for i in 0..rho.dim() {
            let weight = rho.matrix().get(i, i).re;
            if weight > best {
                best = weight;
                address_offset = i;
            }
        }
        let mut projector = ComplexMatrix::zeros(rho.dim(), rho.dim());
        projector.set(address_offset, address_offset, Complex64::new(1.0, 0.0));
        if rho.matrix().max_abs_diff(&projector) > tol::IDENTITY {
            return Err(QuantumError::RowNotFactorizable { row: row_idx });
        }

        let mut address = vec![0u8; k];
        let mut rem = address_offset;
        for slot in address.iter_mut().rev() {
            *slot = (rem % d) as u8;
            rem /= d;
        }
        let mut payload = QuditState::zero(m, d)?;
        for (digits, amp) in row.terms() {
            if digits[..k] == address[..] {
                payload.add_term(&digits[k..], amp)?;
            }
        }
        if cells[address_offset].is_some() {
            return Err(QuantumError::DuplicateAddress(address));
        }
        cells[address_offset] = Some(payload);
    }
    let cells: Option<Vec<QuditState>> = cells.into_iter().collect();
    let cells = cells.ok_or(QuantumError::IndexNotUnity {
        r: qoa.rows.len(),
        expected,
    })?;
    QuantumLatinHypercube::new(d, k, m, cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Classical,
    Quantum,
}

/// Per-column classification with the invariant counts `n = N_C + N_Q`.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnClassification {
    pub kinds: Vec<ColumnKind>,
    pub n_classical: usize,
    pub n_quantum: usize,
}

/// A column is classical when every row reduces to a pure single-party
/// state on it (purity within tolerance of 1); otherwise it is quantum.
pub fn classify_columns(
    qoa: &QuantumOrthogonalArray,
) -> Result<ColumnClassification, QuantumError> {
    let n = qoa.n;
    let mut kinds = Vec::with_capacity(n);
    for col in 0..n {
        let traced: Vec<usize> = (0..n).filter(|&p| p != col).collect();
        let mut classical = true;
        for row in &qoa.rows {
            let purity = row.partial_trace(&traced)?.normalized_purity();
            if purity < 1.0 - tol::IDENTITY {
                classical = false;
                break;
            }
        }
        kinds.push(if classical {
            ColumnKind::Classical
        } else {
            ColumnKind::Quantum
        });
    }
    let n_classical = kinds.iter().filter(|&&k| k == ColumnKind::Classical).count();
    Ok(ColumnClassification {
        n_quantum: n - n_classical,
        n_classical,
        kinds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::oa_to_latin;
    use crate::constructions::{
        ame_4_3, ame_5_d, bell_state, oa_4321, oa_9432, qoa_4522, qoa_8623,
    };
    use crate::tol;
    use crate::uniformity::certify_uniformity;

    fn single(d: usize, v: u8) -> QuditState {
        QuditState::basis(1, d, &[v]).unwrap()
    }

    fn bell(phase: usize, shift: usize) -> QuditState {
        bell_state(2, phase, shift).unwrap()
    }

    #[test]
    fn repeated_basis_cells_are_not_a_latin_square() {
        let cells = vec![single(2, 0), single(2, 0), single(2, 1), single(2, 1)];
        let square = QuantumLatinHypercube::new(2, 2, 1, cells).unwrap();
        let check = verify_qls(&square).unwrap();
        assert!(!check.ok);
        let witness = check.witness.unwrap();
        assert!((witness.deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_cube_lines_are_orthonormal() {
        let cubes = oa_to_latin(&crate::constructions::oa_8423(), 3).unwrap();
        let lifted = QuantumLatinHypercube::from_classical(&cubes).unwrap();
        assert!(verify_qlh_lines(&lifted).unwrap().ok);

        // Break one line by repeating a cell value.
        let mut cells: Vec<QuditState> = lifted.cells().to_vec();
        cells[0] = cells[4].clone();
        let broken = QuantumLatinHypercube::new(2, 3, 1, cells).unwrap();
        assert!(!verify_qlh_lines(&broken).unwrap().ok);
    }

    #[test]
    fn square_checks_demand_two_dimensions_and_single_qudits() {
        let cube = QuantumLatinHypercube::new(
            2,
            3,
            1,
            (0..8).map(|i| single(2, (i % 2) as u8)).collect(),
        )
        .unwrap();
        assert!(matches!(
            verify_qls(&cube),
            Err(QuantumError::ExpectedSquare(3))
        ));

        let paired = QuantumLatinHypercube::new(
            2,
            2,
            2,
            vec![bell(0, 0), bell(0, 1), bell(1, 1), bell(1, 0)],
        )
        .unwrap();
        assert!(matches!(
            verify_qlh_lines(&paired),
            Err(QuantumError::ExpectedSingleQuditCells(2))
        ));
    }

    #[test]
    fn extracted_squares_of_the_five_qubit_array_verify() {
        let squares = qoa_to_moqlh(&qoa_4522()).unwrap();
        assert_eq!(squares.qudits_per_cell(), 3);
        let check = verify_moqlh(&squares).unwrap();
        assert!(check.ok, "witness {:?}", check.witness);

        // Cell contents: |i+j> tensored with the Bell payloads.
        let cell = squares.cell(&[0, 0]);
        assert_eq!(cell.amplitude(&[0, 0, 0]).unwrap().re, 1.0);
        assert_eq!(cell.amplitude(&[0, 1, 1]).unwrap().re, 1.0);
        let cell = squares.cell(&[1, 0]);
        assert_eq!(cell.amplitude(&[1, 0, 1]).unwrap().re, 1.0);
        assert_eq!(cell.amplitude(&[1, 1, 0]).unwrap().re, -1.0);
    }

    #[test]
    fn bell_square_without_the_address_column_fails() {
        // Dropping the third column of the five-qubit array leaves a square
        // whose column sums stay 1-uniform but whose row sums separate.
        let cells = vec![bell(0, 0), bell(0, 1), bell(1, 1), bell(1, 0)];
        let square = QuantumLatinHypercube::new(2, 2, 2, cells).unwrap();
        let check = verify_moqlh(&square).unwrap();
        assert!(check.cells_orthogonal);
        assert!(!check.ok);
        let witness = check.witness.unwrap();
        assert_eq!(witness.axis, 1);
        assert_eq!(witness.fixed, vec![0]);
    }

    #[test]
    fn classical_orthogonal_squares_lift_to_a_quantum_family() {
        let squares = oa_to_latin(&oa_9432(), 2).unwrap();
        let lifted = QuantumLatinHypercube::from_classical(&squares).unwrap();
        assert_eq!(lifted.qudits_per_cell(), 2);
        assert!(verify_moqlh(&lifted).unwrap().ok);
    }

    #[test]
    fn ghz_payload_cube_verifies() {
        let cube = qoa_to_moqlh(&qoa_8623()).unwrap();
        assert_eq!(cube.dimension(), 3);
        assert_eq!(cube.qudits_per_cell(), 3);
        assert!(verify_moqlh(&cube).unwrap().ok);
    }

    #[test]
    fn weak_orthogonality_of_the_classical_pair() {
        let squares = oa_to_latin(&oa_9432(), 2).unwrap();
        let a = QuantumLatinHypercube::from_classical(&squares[..1]).unwrap();
        let b = QuantumLatinHypercube::from_classical(&squares[1..]).unwrap();
        assert!(verify_weak_orthogonality(&a, &b).unwrap().ok);
    }

    #[test]
    fn a_square_is_not_weakly_orthogonal_to_itself() {
        let square = QuantumLatinHypercube::new(
            2,
            2,
            1,
            vec![single(2, 0), single(2, 1), single(2, 1), single(2, 0)],
        )
        .unwrap();
        let check = verify_weak_orthogonality(&square, &square).unwrap();
        assert!(!check.ok);
        assert!(check.witness.is_some());
    }

    #[test]
    fn five_qubit_array_passes_with_unit_factor() {
        let report = verify_qoa(&qoa_4522()).unwrap();
        assert!(report.ok);
        assert!(report.povm_ok && report.rows_orthogonal);
        assert_eq!(report.induced_uniform, Some(true));
        assert!((report.factor - 1.0).abs() < 1e-12);
        assert!(report.worst_deviation < 1e-12);
    }

    #[test]
    fn six_qubit_array_passes_all_twenty_triples() {
        let report = verify_qoa(&qoa_8623()).unwrap();
        assert!(report.ok);
        assert!((report.factor - 1.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_classical_lift_passes_balance_but_fails_overall() {
        let lifted = QuantumOrthogonalArray::from_classical(&oa_4321()).unwrap();
        let report = verify_qoa(&lifted).unwrap();
        assert!(report.povm_ok, "single-party balance holds");
        assert!(report.rows_orthogonal, "distinct basis rows are orthogonal");
        assert_eq!(report.induced_uniform, Some(false));
        assert!(!report.ok);
    }

    #[test]
    fn row_sums_reproduce_the_catalog_states() {
        let five = qoa_to_state(&qoa_4522()).unwrap();
        assert!(five
            .proportional_to(&ame_5_d(2).unwrap().state, 1e-12)
            .unwrap());

        let six = qoa_to_state(&qoa_8623()).unwrap();
        assert_eq!(six.support(), 16);
        assert!(certify_uniformity(&six, 3, tol::IDENTITY).unwrap().ok);

        let four = qoa_to_state(&QuantumOrthogonalArray::from_classical(&oa_9432()).unwrap())
            .unwrap();
        assert!(four.proportional_to(&ame_4_3(), 1e-12).unwrap());
    }

    #[test]
    fn redundant_lift_is_rejected_with_its_uniformity_defect() {
        let lifted = QuantumOrthogonalArray::from_classical(&oa_4321()).unwrap();
        match qoa_to_state(&lifted) {
            Err(QuantumError::QoaRejected { worst, .. }) => assert!(worst > 0.1),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_rows_are_rejected_with_a_distinct_error() {
        let row = QuditState::basis(2, 2, &[0, 0]).unwrap();
        let qoa = QuantumOrthogonalArray::new(2, 2, 1, vec![row.clone(), row]).unwrap();
        assert!(matches!(
            qoa_to_state(&qoa),
            Err(QuantumError::RowsNotOrthogonal(0, 1, _))
        ));
    }

    #[test]
    fn non_factoring_rows_cannot_address_an_arrangement() {
        let rows = vec![bell(0, 0), bell(1, 0)];
        let qoa = QuantumOrthogonalArray::new(2, 2, 1, rows).unwrap();
        assert!(matches!(
            qoa_to_moqlh(&qoa),
            Err(QuantumError::RowNotFactorizable { row: 0 })
        ));
    }

    #[test]
    fn non_unity_index_cannot_address_an_arrangement() {
        let lifted = QuantumOrthogonalArray::from_classical(&oa_4321()).unwrap();
        assert!(matches!(
            qoa_to_moqlh(&lifted),
            Err(QuantumError::IndexNotUnity { r: 4, expected: 2 })
        ));
    }

    #[test]
    fn column_classification_counts() {
        let classes = classify_columns(&qoa_4522()).unwrap();
        assert_eq!((classes.n_classical, classes.n_quantum), (3, 2));
        assert_eq!(classes.kinds[0], ColumnKind::Classical);
        assert_eq!(classes.kinds[4], ColumnKind::Quantum);

        let classes = classify_columns(&qoa_8623()).unwrap();
        assert_eq!((classes.n_classical, classes.n_quantum), (3, 3));

        let classes = classify_columns(&ame_5_d(3).unwrap().qoa).unwrap();
        assert_eq!((classes.n_classical, classes.n_quantum), (3, 2));
    }

    #[test]
    fn qoa_json_round_trips() {
        let qoa = qoa_4522();
        let text = serde_json::to_string(&qoa.to_json()).unwrap();
        let parsed: QoaJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QuantumOrthogonalArray::from_json(&parsed).unwrap(), qoa);
    }

    #[test]
    fn qlh_json_round_trips() {
        let squares = qoa_to_moqlh(&qoa_4522()).unwrap();
        let text = serde_json::to_string(&squares.to_json()).unwrap();
        let parsed: QlhJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QuantumLatinHypercube::from_json(&parsed).unwrap(), squares);
    }
}

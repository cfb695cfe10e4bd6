//! Generators for every named design and state family in the catalog.
//!
//! Everything here is exact in exact arithmetic; roots of unity are the only
//! irrational inputs. Each construction passes its definitional verifier,
//! except `oa_4321`, which is kept as the standard counterexample whose
//! induced state is not even 1-uniform.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::classical::{ClassicalLatinHypercube, DesignError, OrthogonalArray};
use crate::quantum::{qoa_to_moqlh, QuantumError, QuantumLatinHypercube, QuantumOrthogonalArray};
use crate::tensor::{ComplexMatrix, QuditState, TensorError};
use crate::quantum::classify_columns;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Quantum(#[from] QuantumError),

    #[error(transparent)]
    Design(#[from] DesignError),

    #[error("construction requires a prime local dimension, got {0} (prime-power fields are unsupported)")]
    NonPrime(usize),

    #[error("local dimension 2 collapses the fourth column onto the first; use an odd prime")]
    EvenDimensionCollapses,

    #[error("copy count must be at least 1")]
    BadCopyCount,

    #[error("payload block not identifiable: {0}")]
    PayloadNotIdentifiable(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// `omega^exponent` with `omega = e^(2 pi i / d)`.
pub fn root_of_unity(d: usize, exponent: i64) -> Complex64 {
    let e = exponent.rem_euclid(d as i64);
    let angle = TAU * e as f64 / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn require_d(d: usize) -> Result<(), ConstructionError> {
    if d < 2 {
        return Err(ConstructionError::BadParameter(format!(
            "local dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// The discrete Fourier matrix `F[l][m] = omega^(l m)` (unnormalized).
pub fn fourier_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |l, m| root_of_unity(d, (l * m) as i64))
}

// --- classical catalog ------------------------------------------------------

/// The cyclic Latin square with `cell(i, j) = (j - i) mod d`.
pub fn cyclic_ls(d: usize) -> ClassicalLatinHypercube {
    let cells = (0..d)
        .flat_map(|i| (0..d).map(move |j| ((j + d - i) % d) as u8))
        .collect();
    ClassicalLatinHypercube::new(d, 2, cells).expect("cyclic square is well formed")
}

/// The strength-2 array with four runs over three binary columns.
pub fn oa_4322() -> OrthogonalArray {
    OrthogonalArray::new(
        2,
        2,
        vec![
            vec![0, 0, 0],
            vec![0, 1, 1],
            vec![1, 0, 1],
            vec![1, 1, 0],
        ],
    )
    .expect("catalog array is well formed")
}

/// The strength-2 array with nine runs over four ternary columns.
pub fn oa_9432() -> OrthogonalArray {
    OrthogonalArray::new(
        3,
        2,
        vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 2, 1],
            vec![1, 0, 2, 2],
            vec![1, 1, 1, 0],
            vec![1, 2, 0, 1],
            vec![2, 1, 0, 2],
            vec![2, 2, 2, 0],
            vec![2, 0, 1, 1],
            vec![0, 2, 1, 2],
        ],
    )
    .expect("catalog array is well formed")
}

/// The strength-3 array with eight runs over four binary columns.
pub fn oa_8423() -> OrthogonalArray {
    OrthogonalArray::new(
        2,
        3,
        vec![
            vec![0, 0, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 1, 0, 1],
            vec![0, 1, 1, 0],
            vec![1, 0, 0, 1],
            vec![1, 0, 1, 0],
            vec![1, 1, 0, 0],
            vec![1, 1, 1, 1],
        ],
    )
    .expect("catalog array is well formed")
}

/// The standard non-irredundant strength-1 array: balanced columns but
/// repeated rows on a two-column projection.
pub fn oa_4321() -> OrthogonalArray {
    OrthogonalArray::new(
        2,
        1,
        vec![
            vec![0, 0, 0],
            vec![0, 1, 0],
            vec![1, 0, 1],
            vec![1, 1, 1],
        ],
    )
    .expect("catalog array is well formed")
}

// --- states and bases -------------------------------------------------------

/// The generalized `n`-party GHZ state `sum_i |i...i>`.
pub fn ghz(n: usize, d: usize) -> Result<QuditState, ConstructionError> {
    require_d(d)?;
    let mut state = QuditState::zero(n, d)?;
    for v in 0..d {
        state.add_term(&vec![v as u8; n], Complex64::new(1.0, 0.0))?;
    }
    Ok(state)
}

/// Generalized Bell state with the given phase and shift indices:
/// `sum_l omega^(phase * l) |l + shift, l>`, each of squared norm `d`.
pub fn bell_state(d: usize, phase: usize, shift: usize) -> Result<QuditState, ConstructionError> {
    require_d(d)?;
    let mut state = QuditState::zero(2, d)?;
    for l in 0..d {
        state.add_term(
            &[((l + shift) % d) as u8, l as u8],
            root_of_unity(d, (phase * l) as i64),
        )?;
    }
    Ok(state)
}

/// The `d^2` generalized Bell states, indexed `phase * d + shift`.
///
/// For two levels the four members are, in order, proportional to the
/// states usually written `Phi+`, `Psi+`, `Phi-`, `-Psi-`.
pub fn bell_basis(d: usize) -> Result<Vec<QuditState>, ConstructionError> {
    let mut states = Vec::with_capacity(d * d);
    for phase in 0..d {
        for shift in 0..d {
            states.push(bell_state(d, phase, shift)?);
        }
    }
    Ok(states)
}

/// The eight three-qubit basis states locally equivalent to the GHZ state:
/// tag bits pick a shift (`x`) or phase (`z`) operator per qubit, and the
/// two all-equal tags carry an extra minus sign. With exactly this phase
/// assignment the family assembles into a three-uniform six-qubit state.
pub fn ghz_basis_qubits() -> Vec<QuditState> {
    let mut basis = Vec::with_capacity(8);
    for tags in 0..8u8 {
        let ops = [(tags >> 2) & 1, (tags >> 1) & 1, tags & 1];
        let global_sign = if ops[0] == ops[1] && ops[1] == ops[2] {
            -1.0
        } else {
            1.0
        };
        let mut state = QuditState::zero(3, 2).expect("three qubits fit");
        for b in 0..2u8 {
            let mut digits = [0u8; 3];
            let mut sign = 1.0f64;
            for (slot, &op) in digits.iter_mut().zip(&ops) {
                if op == 0 {
                    *slot = 1 - b; // shift
                } else {
                    *slot = b; // phase
                    if b == 1 {
                        sign = -sign;
                    }
                }
            }
            state
                .add_term(&digits, Complex64::new(global_sign * sign, 0.0))
                .expect("digits in range");
        }
        basis.push(state);
    }
    basis
}

/// The nine-term four-qutrit state with maximally mixed two-party
/// reductions and minimal support.
pub fn ame_4_3() -> QuditState {
    let oa = oa_9432();
    let mut state = QuditState::zero(4, 3).expect("four qutrits fit");
    for row in 0..oa.rows() {
        state
            .add_term(oa.row(row), Complex64::new(1.0, 0.0))
            .expect("digits in range");
    }
    state
}

// --- quantum Latin arrangements ---------------------------------------------

/// The size-`d` square whose cell at `(l, m)` is `sum_n omega^(n(l+m)) |n>`.
pub fn fourier_qls(d: usize) -> Result<QuantumLatinHypercube, ConstructionError> {
    require_d(d)?;
    let mut cells = Vec::with_capacity(d * d);
    for l in 0..d {
        for m in 0..d {
            let mut cell = QuditState::zero(1, d)?;
            for n in 0..d {
                cell.add_term(&[n as u8], root_of_unity(d, (n * (l + m)) as i64))?;
            }
            cells.push(cell);
        }
    }
    Ok(QuantumLatinHypercube::new(d, 2, 1, cells)?)
}

/// The classic size-4 square mixing basis cells with entangled ones.
pub fn musto_vicary_qls() -> QuantumLatinHypercube {
    let s2 = 1.0 / 2.0f64.sqrt();
    let s5 = 1.0 / 5.0f64.sqrt();
    let basis = |v: u8| QuditState::basis(1, 4, &[v]).expect("digit in range");
    let two_term = |amp_a: Complex64, a: u8, amp_b: Complex64, b: u8| {
        QuditState::from_terms(1, 4, vec![(vec![a], amp_a), (vec![b], amp_b)])
            .expect("digits in range")
    };
    let chi_minus = two_term(
        Complex64::new(s2, 0.0),
        1,
        Complex64::new(-s2, 0.0),
        2,
    );
    let chi_plus = two_term(Complex64::new(s2, 0.0), 1, Complex64::new(s2, 0.0), 2);
    let xi_plus = two_term(Complex64::new(0.0, s5), 0, Complex64::new(2.0 * s5, 0.0), 3);
    let xi_minus = two_term(Complex64::new(2.0 * s5, 0.0), 0, Complex64::new(0.0, s5), 3);

    let cells = vec![
        basis(0),
        basis(1),
        basis(2),
        basis(3),
        basis(3),
        basis(2),
        basis(1),
        basis(0),
        chi_minus.clone(),
        xi_minus.clone(),
        xi_plus.clone(),
        chi_plus.clone(),
        chi_plus,
        xi_plus,
        xi_minus,
        chi_minus,
    ];
    QuantumLatinHypercube::new(4, 2, 1, cells).expect("sixteen single-qudit cells")
}

/// The one-dimensional arrangement whose single edge holds the GHZ terms:
/// cell `i` is `|i>^(x n)`.
pub fn ghz_hypercube(n: usize, d: usize) -> Result<QuantumLatinHypercube, ConstructionError> {
    require_d(d)?;
    if n < 2 {
        return Err(ConstructionError::BadParameter(
            "need at least two qudits per cell".into(),
        ));
    }
    let cells = (0..d)
        .map(|v| QuditState::basis(n, d, &vec![v as u8; n]))
        .collect::<Result<_, _>>()?;
    Ok(QuantumLatinHypercube::new(d, 1, n, cells)?)
}

// --- quantum orthogonal arrays ----------------------------------------------

/// The smallest essentially quantum array: four rows on five qubits, three
/// classical columns and a Bell-state payload.
pub fn qoa_4522() -> QuantumOrthogonalArray {
    ame_5_d(2).expect("two levels are supported").qoa
}

/// Eight rows on six qubits: three classical columns and a GHZ-basis payload.
pub fn qoa_8623() -> QuantumOrthogonalArray {
    let basis = ghz_basis_qubits();
    let rows = (0..8usize)
        .map(|idx| {
            let digits = [(idx >> 2) as u8 & 1, (idx >> 1) as u8 & 1, idx as u8 & 1];
            let address = QuditState::basis(3, 2, &digits).expect("bits in range");
            address.tensor(&basis[idx]).expect("equal levels")
        })
        .collect();
    QuantumOrthogonalArray::new(6, 2, 3, rows).expect("catalog array is well formed")
}

/// The five-column family: array, extracted squares, and summed state.
#[derive(Debug, Clone)]
pub struct Ame5Family {
    pub qoa: QuantumOrthogonalArray,
    pub squares: QuantumLatinHypercube,
    pub state: QuditState,
}

/// Builds the five-column array `|i, j, i+j> (x) payload(i, j)` for any
/// `d >= 2`, together with its triple of orthogonal squares and the summed
/// two-uniform state.
///
/// The payload at `(i, j)` pairs phase index `i` with shift index `i + j`;
/// the accompanying global phase `omega^(i(i+j))` makes the two-level
/// instance come out with unit coefficients.
pub fn ame_5_d(d: usize) -> Result<Ame5Family, ConstructionError> {
    require_d(d)?;
    let mut rows = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let address =
                QuditState::basis(3, d, &[i as u8, j as u8, ((i + j) % d) as u8])?;
            let payload = bell_state(d, i, (i + j) % d)?
                .scaled(root_of_unity(d, (i * ((i + j) % d)) as i64));
            rows.push(address.tensor(&payload)?);
        }
    }
    let qoa = QuantumOrthogonalArray::new(5, d, 2, rows)?;
    let squares = qoa_to_moqlh(&qoa)?;
    let state = qoa.superposed_rows()?;
    Ok(Ame5Family { qoa, squares, state })
}

/// The six-column two-uniform state `sum |i, j, i+j, i+2j> (x) bell(i, j)`
/// for an odd prime `d`.
pub fn psi_6_d(d: usize) -> Result<QuditState, ConstructionError> {
    if d == 2 {
        return Err(ConstructionError::EvenDimensionCollapses);
    }
    if !is_prime(d) {
        return Err(ConstructionError::NonPrime(d));
    }
    let mut state = QuditState::zero(6, d)?;
    for i in 0..d {
        for j in 0..d {
            let address = QuditState::basis(
                4,
                d,
                &[
                    i as u8,
                    j as u8,
                    ((i + j) % d) as u8,
                    ((i + 2 * j) % d) as u8,
                ],
            )?;
            let row = address.tensor(&bell_state(d, i, j)?)?;
            state = state.superpose(&row)?;
        }
    }
    Ok(state)
}

/// Repeats the quantum payload block of `base` `copies` times.
///
/// The base must split into a classical prefix and a quantum suffix, and
/// every row must factor across that split.
pub fn copies_extension(
    base: &QuantumOrthogonalArray,
    copies: usize,
) -> Result<QuantumOrthogonalArray, ConstructionError> {
    if copies == 0 {
        return Err(ConstructionError::BadCopyCount);
    }
    let classification = classify_columns(base)?;
    let n_q = classification.n_quantum;
    if n_q == 0 {
        return Err(ConstructionError::PayloadNotIdentifiable(
            "no quantum columns".into(),
        ));
    }
    let n_c = base.columns() - n_q;
    let quantum_is_suffix = classification.kinds[n_c..]
        .iter()
        .all(|&kind| kind == crate::quantum::ColumnKind::Quantum);
    if !quantum_is_suffix {
        return Err(ConstructionError::PayloadNotIdentifiable(
            "quantum columns are not a contiguous suffix".into(),
        ));
    }

    let mut rows = Vec::with_capacity(base.rows().len());
    for (row_idx, row) in base.rows().iter().enumerate() {
        let (prefix, payload) = split_product(row, n_c).ok_or_else(|| {
            ConstructionError::PayloadNotIdentifiable(format!(
                "row {row_idx} does not factor across the column split"
            ))
        })?;
        let mut extended = prefix;
        for _ in 0..copies {
            extended = extended.tensor(&payload)?;
        }
        rows.push(extended);
    }
    Ok(QuantumOrthogonalArray::new(
        n_c + copies * n_q,
        base.levels(),
        base.strength(),
        rows,
    )?)
}

/// Factors `state = prefix (x) suffix` across the first `n_c` parties, or
/// returns `None` when the amplitude matrix is not rank one.
fn split_product(state: &QuditState, n_c: usize) -> Option<(QuditState, QuditState)> {
    let n = state.parties();
    let d = state.levels();
    let terms: Vec<(Vec<u8>, Complex64)> = state.terms().collect();
    let (pivot_digits, pivot_amp) = terms
        .iter()
        .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))?
        .clone();
    let scale = pivot_amp.norm_sqr();

    let mut prefix = QuditState::zero(n_c, d).ok()?;
    let mut suffix = QuditState::zero(n - n_c, d).ok()?;
    for (digits, amp) in &terms {
        if digits[n_c..] == pivot_digits[n_c..] {
            prefix.add_term(&digits[..n_c], *amp / pivot_amp).ok()?;
        }
        if digits[..n_c] == pivot_digits[..n_c] {
            suffix.add_term(&digits[n_c..], *amp).ok()?;
        }
    }
    // Rank-one cross check on every stored term.
    for (digits, amp) in &terms {
        let a = prefix.amplitude(&digits[..n_c]).ok()?;
        let b = suffix.amplitude(&digits[n_c..]).ok()?;
        if (a * b - amp).norm() > 1e-10 * scale.max(1.0) {
            return None;
        }
    }
    // And the reverse direction: no product term may be missing.
    if (prefix.norm_sqr() * suffix.norm_sqr() - state.norm_sqr()).abs()
        > 1e-9 * state.norm_sqr().max(1.0)
    {
        return None;
    }
    Some((prefix, suffix))
}

// --- graph-state family -----------------------------------------------------

/// Quadratic phase exponent on six digits: the edge set of a wheel-like
/// graph with chords `1-3`, `4-6`, `2-5`.
fn six_party_phase(digits: &[usize]) -> usize {
    let [i1, i2, i3, i4, i5, i6] = [
        digits[0], digits[1], digits[2], digits[3], digits[4], digits[5],
    ];
    i1 * i2 + i2 * i3 + i3 * i4 + i4 * i5 + i5 * i6 + i6 * i1 + i1 * i3 + i4 * i6 + i2 * i5
}

/// The six-qudit graph state `sum omega^A |i1..i6>`, three-uniform for
/// prime `d`.
pub fn ame_6_d_graph(d: usize) -> Result<QuditState, ConstructionError> {
    require_d(d)?;
    if !is_prime(d) {
        return Err(ConstructionError::NonPrime(d));
    }
    let mut state = QuditState::zero(6, d)?;
    let mut digits = [0usize; 6];
    loop {
        let phase = six_party_phase(&digits);
        let tuple: Vec<u8> = digits.iter().map(|&x| x as u8).collect();
        state.add_term(&tuple, root_of_unity(d, phase as i64))?;
        // Odometer increment over the six digits.
        let mut pos = 6;
        while pos > 0 {
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < d {
                break;
            }
            digits[pos] = 0;
            if pos == 0 {
                return Ok(state);
            }
        }
    }
}

/// The `d^3 x d^3` unimodular matrix carrying the same phases, rows indexed
/// by the first three digits and columns by the last three.
pub fn hadamard_3unitary_matrix(d: usize) -> Result<ComplexMatrix, ConstructionError> {
    require_d(d)?;
    if !is_prime(d) {
        return Err(ConstructionError::NonPrime(d));
    }
    let dim = d * d * d;
    Ok(ComplexMatrix::from_fn(dim, dim, |mu, nu| {
        let digits = [
            mu / (d * d),
            (mu / d) % d,
            mu % d,
            nu / (d * d),
            (nu / d) % d,
            nu % d,
        ];
        root_of_unity(d, six_party_phase(&digits) as i64)
    }))
}

// --- catalog registry ---------------------------------------------------------

/// Names of every catalog construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionId {
    CyclicLs,
    Oa4322,
    Oa9432,
    Oa8423,
    Oa4321,
    Ghz,
    FourierQls,
    MustoVicaryQls,
    Qoa4522,
    Qoa8623,
    GhzBasis,
    BellBasis,
    Ame43,
    Ame5,
    Psi6,
    CopiesExtension,
    Ame6Graph,
    GhzHypercube,
    Hadamard3Unitary,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 19] = [
        ConstructionId::CyclicLs,
        ConstructionId::Oa4322,
        ConstructionId::Oa9432,
        ConstructionId::Oa8423,
        ConstructionId::Oa4321,
        ConstructionId::Ghz,
        ConstructionId::FourierQls,
        ConstructionId::MustoVicaryQls,
        ConstructionId::Qoa4522,
        ConstructionId::Qoa8623,
        ConstructionId::GhzBasis,
        ConstructionId::BellBasis,
        ConstructionId::Ame43,
        ConstructionId::Ame5,
        ConstructionId::Psi6,
        ConstructionId::CopiesExtension,
        ConstructionId::Ame6Graph,
        ConstructionId::GhzHypercube,
        ConstructionId::Hadamard3Unitary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConstructionId::CyclicLs => "cyclic-ls",
            ConstructionId::Oa4322 => "oa4322",
            ConstructionId::Oa9432 => "oa9432",
            ConstructionId::Oa8423 => "oa8423",
            ConstructionId::Oa4321 => "oa4321",
            ConstructionId::Ghz => "ghz",
            ConstructionId::FourierQls => "fourier-qls",
            ConstructionId::MustoVicaryQls => "musto-vicary-qls",
            ConstructionId::Qoa4522 => "qoa4522",
            ConstructionId::Qoa8623 => "qoa8623",
            ConstructionId::GhzBasis => "ghz-basis",
            ConstructionId::BellBasis => "bell-basis",
            ConstructionId::Ame43 => "ame43",
            ConstructionId::Ame5 => "ame5",
            ConstructionId::Psi6 => "psi6",
            ConstructionId::CopiesExtension => "copies",
            ConstructionId::Ame6Graph => "ame6-graph",
            ConstructionId::GhzHypercube => "ghz-hypercube",
            ConstructionId::Hadamard3Unitary => "hadamard3",
        }
    }
}

impl FromStr for ConstructionId {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                ConstructionError::BadParameter(format!("unknown construction {s:?}"))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{verify_moqlh, verify_qls};
    use approx::assert_abs_diff_eq;

    fn assert_proportional(a: &QuditState, b: &QuditState) {
        let overlap = a.inner_product(b).unwrap().norm_sqr();
        let bound = a.norm_sqr() * b.norm_sqr();
        assert_abs_diff_eq!(overlap, bound, epsilon = 1e-9 * bound);
    }

    #[test]
    fn bell_basis_gram_is_d_times_identity() {
        for d in [2usize, 3, 5] {
            let basis = bell_basis(d).unwrap();
            for (x, a) in basis.iter().enumerate() {
                for (y, b) in basis.iter().enumerate() {
                    let overlap = a.inner_product(b).unwrap();
                    if x == y {
                        assert_abs_diff_eq!(overlap.re, d as f64, epsilon = 1e-12);
                        assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-12);
                    } else {
                        assert!(overlap.norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn bell_basis_two_level_members() {
        let basis = bell_basis(2).unwrap();
        // phase 0, shift 0: |00> + |11>
        assert_eq!(basis[0].amplitude(&[0, 0]).unwrap().re, 1.0);
        assert_eq!(basis[0].amplitude(&[1, 1]).unwrap().re, 1.0);
        // phase 0, shift 1: |01> + |10>
        assert_eq!(basis[1].amplitude(&[1, 0]).unwrap().re, 1.0);
        assert_eq!(basis[1].amplitude(&[0, 1]).unwrap().re, 1.0);
        // phase 1, shift 0: |00> - |11>
        assert_eq!(basis[2].amplitude(&[1, 1]).unwrap().re, -1.0);
        // phase 1, shift 1: |10> - |01>
        assert_eq!(basis[3].amplitude(&[1, 0]).unwrap().re, 1.0);
        assert_eq!(basis[3].amplitude(&[0, 1]).unwrap().re, -1.0);
    }

    #[test]
    fn bell_basis_diagonal_member_for_three_levels() {
        let phi = bell_state(3, 0, 0).unwrap();
        for v in 0..3u8 {
            assert_eq!(phi.amplitude(&[v, v]).unwrap().re, 1.0);
        }
        assert_eq!(phi.support(), 3);
    }

    #[test]
    fn bell_states_with_equal_shift_are_orthogonal() {
        // The overlap of phases p != p' at fixed shift is a full sum of
        // roots of unity.
        let a = bell_state(3, 0, 0).unwrap();
        let b = bell_state(3, 1, 0).unwrap();
        assert!(a.inner_product(&b).unwrap().norm() < 1e-12);
    }

    #[test]
    fn ghz_basis_is_orthogonal_with_norm_two() {
        let basis = ghz_basis_qubits();
        for (x, a) in basis.iter().enumerate() {
            for (y, b) in basis.iter().enumerate() {
                let overlap = a.inner_product(b).unwrap();
                if x == y {
                    assert_abs_diff_eq!(overlap.re, 2.0, epsilon = 1e-12);
                } else {
                    assert!(overlap.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ghz_basis_endpoints() {
        let basis = ghz_basis_qubits();
        // All-shift tags map the GHZ terms onto each other, up to the
        // all-equal sign.
        assert_eq!(basis[0].amplitude(&[0, 0, 0]).unwrap().re, -1.0);
        assert_eq!(basis[0].amplitude(&[1, 1, 1]).unwrap().re, -1.0);
        // The all-phase tag flips the odd-weight term twice over.
        assert_eq!(basis[7].amplitude(&[0, 0, 0]).unwrap().re, -1.0);
        assert_eq!(basis[7].amplitude(&[1, 1, 1]).unwrap().re, 1.0);
        // Mixed tags carry no global sign.
        assert_eq!(basis[1].amplitude(&[1, 1, 0]).unwrap().re, 1.0);
        assert_eq!(basis[1].amplitude(&[0, 0, 1]).unwrap().re, -1.0);
    }

    #[test]
    fn minimal_support_four_qutrit_state() {
        let state = ame_4_3();
        assert_eq!(state.support(), 9);
        assert_eq!(state.amplitude(&[0, 1, 2, 1]).unwrap().re, 1.0);
    }

    #[test]
    fn fourier_square_is_a_quantum_latin_square() {
        for d in [2usize, 3, 4, 5] {
            let square = fourier_qls(d).unwrap();
            assert!(verify_qls(&square).unwrap().ok, "failed for d = {d}");
        }
    }

    #[test]
    fn fourier_square_assembles_to_a_rotated_ghz() {
        for d in [2usize, 3, 5] {
            let square = fourier_qls(d).unwrap();
            let mut assembled = QuditState::zero(3, d).unwrap();
            for address in square.addresses() {
                let cell = square.cell(&address);
                let front = QuditState::basis(2, d, &address).unwrap();
                assembled = assembled.superpose(&front.tensor(cell).unwrap()).unwrap();
            }
            let fourier = fourier_matrix(d);
            let rotated = ghz(3, d)
                .unwrap()
                .apply_local(0, &fourier)
                .unwrap()
                .apply_local(1, &fourier)
                .unwrap();
            assert_proportional(&assembled, &rotated);
        }
    }

    #[test]
    fn musto_vicary_square_verifies() {
        assert!(verify_qls(&musto_vicary_qls()).unwrap().ok);
    }

    #[test]
    fn ghz_hypercube_is_a_mutually_orthogonal_family() {
        let hypercube = ghz_hypercube(4, 3).unwrap();
        assert_eq!(hypercube.dimension(), 1);
        assert_eq!(hypercube.qudits_per_cell(), 4);
        assert!(verify_moqlh(&hypercube).unwrap().ok);
    }

    #[test]
    fn five_qubit_rows_carry_the_bell_payloads() {
        let qoa = qoa_4522();
        assert_eq!(qoa.rows().len(), 4);
        let row = &qoa.rows()[2]; // address (1, 0)
        assert_eq!(row.amplitude(&[1, 0, 1, 0, 1]).unwrap().re, 1.0);
        assert_eq!(row.amplitude(&[1, 0, 1, 1, 0]).unwrap().re, -1.0);
        let row = &qoa.rows()[3]; // address (1, 1)
        assert_eq!(row.amplitude(&[1, 1, 0, 0, 0]).unwrap().re, 1.0);
        assert_eq!(row.amplitude(&[1, 1, 0, 1, 1]).unwrap().re, -1.0);
    }

    #[test]
    fn five_qubit_state_matches_the_bell_sum() {
        let state = ame_5_d(2).unwrap().state;
        assert_eq!(state.support(), 8);
        assert_eq!(state.amplitude(&[0, 1, 1, 0, 1]).unwrap().re, 1.0);
        assert_eq!(state.amplitude(&[1, 0, 1, 1, 0]).unwrap().re, -1.0);
        assert_eq!(state.amplitude(&[1, 1, 0, 1, 1]).unwrap().re, -1.0);
    }

    #[test]
    fn psi_6_rejects_bad_dimensions() {
        assert!(matches!(
            psi_6_d(2),
            Err(ConstructionError::EvenDimensionCollapses)
        ));
        assert!(matches!(psi_6_d(4), Err(ConstructionError::NonPrime(4))));
        assert!(matches!(psi_6_d(9), Err(ConstructionError::NonPrime(9))));
    }

    #[test]
    fn copies_extension_identity_for_single_copy() {
        let base = qoa_4522();
        let extended = copies_extension(&base, 1).unwrap();
        assert_eq!(extended, base);
    }

    #[test]
    fn copies_extension_widens_the_payload() {
        let base = qoa_4522();
        let extended = copies_extension(&base, 2).unwrap();
        assert_eq!(extended.columns(), 7);
        // Address (1, 0): payload repeats twice.
        let row = &extended.rows()[2];
        assert_eq!(row.amplitude(&[1, 0, 1, 0, 1, 0, 1]).unwrap().re, 1.0);
        assert_eq!(row.amplitude(&[1, 0, 1, 1, 0, 1, 0]).unwrap().re, 1.0);
        assert_eq!(row.amplitude(&[1, 0, 1, 0, 1, 1, 0]).unwrap().re, -1.0);
    }

    #[test]
    fn copies_extension_rejects_fully_classical_bases() {
        let base = QuantumOrthogonalArray::from_classical(&oa_4322()).unwrap();
        assert!(matches!(
            copies_extension(&base, 2),
            Err(ConstructionError::PayloadNotIdentifiable(_))
        ));
    }

    #[test]
    fn graph_state_phase_at_all_ones_is_trivial_for_three_levels() {
        assert_eq!(six_party_phase(&[1; 6]) % 3, 0);
        let state = ame_6_d_graph(3).unwrap();
        assert_eq!(state.amplitude(&[1; 6]).unwrap().re, 1.0);
        assert_eq!(state.support(), 729);
    }

    #[test]
    fn graph_state_rejects_composite_dimensions() {
        assert!(matches!(ame_6_d_graph(4), Err(ConstructionError::NonPrime(4))));
        assert!(matches!(
            hadamard_3unitary_matrix(6),
            Err(ConstructionError::NonPrime(6))
        ));
    }

    #[test]
    fn hadamard_matrix_is_unimodular_with_orthogonal_columns() {
        let m = hadamard_3unitary_matrix(2).unwrap();
        assert_eq!(m.get(0, 0).re, 1.0);
        for i in 0..8 {
            for j in 0..8 {
                assert_abs_diff_eq!(m.get(i, j).norm(), 1.0, epsilon = 1e-12);
            }
        }
        let gram = m.adjoint().mul(&m).unwrap();
        let scaled_identity = ComplexMatrix::identity(8).scaled(Complex64::new(8.0, 0.0));
        assert!(gram.max_abs_diff(&scaled_identity) < 1e-10);
    }

    #[test]
    fn catalog_names_round_trip() {
        for id in ConstructionId::ALL {
            assert_eq!(id.name().parse::<ConstructionId>().unwrap(), id);
        }
        assert!("no-such-thing".parse::<ConstructionId>().is_err());
    }
}

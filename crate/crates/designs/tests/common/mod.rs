//! Shared randomized generators for the integration suites.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use qudit_designs::classical::ClassicalLatinHypercube;
use qudit_designs::constructions::cyclic_ls;
use qudit_designs::quantum::QuantumLatinHypercube;
use qudit_designs::tensor::{ComplexMatrix, QuditState};
use qudit_designs::tol;

pub fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let normal = StandardNormal;
    let gaussian = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    });
    gaussian.polar_unitary_factor(tol::RANK).expect("full rank")
}

/// Random Latin square: the cyclic square under row/column/symbol
/// permutations.
pub fn random_latin_square(d: usize, rng: &mut ChaCha8Rng) -> ClassicalLatinHypercube {
    let base = cyclic_ls(d);
    let mut rows: Vec<usize> = (0..d).collect();
    let mut cols: Vec<usize> = (0..d).collect();
    let mut symbols: Vec<u8> = (0..d as u8).collect();
    for i in (1..d).rev() {
        rows.swap(i, rng.random_range(0..=i));
        cols.swap(i, rng.random_range(0..=i));
        symbols.swap(i, rng.random_range(0..=i));
    }
    let cells: Vec<u8> = (0..d)
        .flat_map(|i| {
            let rows = rows.clone();
            let cols = cols.clone();
            let symbols = symbols.clone();
            let base = base.clone();
            (0..d).map(move |j| symbols[base.value(&[rows[i] as u8, cols[j] as u8]) as usize])
        })
        .collect();
    ClassicalLatinHypercube::new(d, 2, cells).unwrap()
}

/// Random quantum Latin square: a classical square rotated by one global
/// unitary, with a random phase per cell.
pub fn random_qls(d: usize, rng: &mut ChaCha8Rng) -> QuantumLatinHypercube {
    let square = random_latin_square(d, rng);
    let rotation = haar_unitary(d, rng);
    let cells: Vec<QuditState> = square
        .addresses()
        .map(|addr| {
            let basis = QuditState::basis(1, d, &[square.value(&addr)]).unwrap();
            let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            basis
                .apply_local(0, &rotation)
                .unwrap()
                .scaled(Complex64::new(angle.cos(), angle.sin()))
        })
        .collect();
    QuantumLatinHypercube::new(d, 2, 1, cells).unwrap()
}

/// Mixes one cell with a spare basis direction, breaking the line
/// conditions by a margin far above the verification tolerance.
pub fn perturb_one_cell(
    square: &QuantumLatinHypercube,
    rng: &mut ChaCha8Rng,
) -> QuantumLatinHypercube {
    let d = square.size();
    let mut cells: Vec<QuditState> = square.cells().to_vec();
    let target = rng.random_range(0..cells.len());
    let other = QuditState::basis(1, d, &[rng.random_range(0..d) as u8]).unwrap();
    cells[target] = cells[target]
        .superpose(&other.scaled(Complex64::new(0.05, 0.02)))
        .unwrap();
    QuantumLatinHypercube::new(d, 2, 1, cells).unwrap()
}

//! Cross-module invariants on randomized instances.

use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

use common::{haar_unitary, perturb_one_cell, random_latin_square, random_qls};
use qudit_designs::classical::{latin_to_oa, oa_to_latin, verify_mols};
use qudit_designs::constructions::{ame_5_d, ghz_hypercube, oa_9432, qoa_4522, qoa_8623};
use qudit_designs::multiunitary::{is_k_unitary, is_permutation_matrix, state_to_matrix};
use qudit_designs::quantum::{
    classify_columns, qoa_to_moqlh, qoa_to_state, verify_moqlh, verify_qls, verify_qoa,
    QuantumLatinHypercube, QuantumOrthogonalArray,
};
use qudit_designs::tensor::QuditState;
use qudit_designs::uniformity::{certify_uniformity, measure_and_check, uniformity_report};
use qudit_designs::tol;

// --- randomized state strategies ---------------------------------------------

#[derive(Debug, Clone)]
struct SparseSpec {
    n: usize,
    d: usize,
    terms: Vec<(Vec<u8>, f64, f64)>,
}

fn sparse_state_spec() -> impl Strategy<Value = SparseSpec> {
    (2usize..=5, 2usize..=4)
        .prop_flat_map(|(n, d)| {
            let digit = 0u8..(d as u8);
            let tuple = proptest::collection::vec(digit, n);
            let amp = (-1.0f64..1.0, -1.0f64..1.0);
            let terms = proptest::collection::vec((tuple, amp), 1..=8).prop_map(
                move |raw| SparseSpec {
                    n,
                    d,
                    terms: raw
                        .into_iter()
                        .map(|(idx, (re, im))| (idx, re, im))
                        .collect(),
                },
            );
            terms
        })
        .prop_filter("positive norm", |spec| {
            spec.terms
                .iter()
                .map(|(_, re, im)| re * re + im * im)
                .sum::<f64>()
                > 1e-6
        })
}

fn build_state(spec: &SparseSpec) -> QuditState {
    QuditState::from_terms(
        spec.n,
        spec.d,
        spec.terms
            .iter()
            .map(|(idx, re, im)| (idx.clone(), Complex64::new(*re, *im))),
    )
    .expect("digits within range")
}

/// Independent reduction oracle: dense density matrix built from scratch,
/// then block-traced one party at a time.
fn dense_density(state: &QuditState) -> Vec<Vec<Complex64>> {
    let dim = state.levels().pow(state.parties() as u32);
    let mut psi = vec![Complex64::ZERO; dim];
    for (digits, amp) in state.terms() {
        let idx = digits
            .iter()
            .fold(0usize, |acc, &v| acc * state.levels() + v as usize);
        psi[idx] = amp;
    }
    let mut rho = vec![vec![Complex64::ZERO; dim]; dim];
    for (i, a) in psi.iter().enumerate() {
        for (j, b) in psi.iter().enumerate() {
            rho[i][j] = a * b.conj();
        }
    }
    rho
}

fn trace_out_last(rho: &[Vec<Complex64>], d: usize) -> Vec<Vec<Complex64>> {
    let dim = rho.len() / d;
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            for t in 0..d {
                out[i][j] += rho[i * d + t][j * d + t];
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_trace_equals_squared_norm(spec in sparse_state_spec(), traced_mask in 1usize..30) {
        let state = build_state(&spec);
        let traced: Vec<usize> = (0..spec.n.saturating_sub(1))
            .filter(|p| traced_mask >> p & 1 == 1)
            .collect();
        let rho = state.partial_trace(&traced).unwrap();
        let norm = state.norm_sqr();
        prop_assert!((rho.trace() - norm).abs() <= 1e-10 * norm.max(1.0));
        prop_assert!(rho.hermiticity_deviation() <= 1e-10 * norm.max(1.0));
    }

    #[test]
    fn tracing_the_last_party_matches_the_dense_oracle(spec in sparse_state_spec()) {
        let state = build_state(&spec);
        let last = state.parties() - 1;
        let rho = state.partial_trace(&[last]).unwrap();
        let oracle = trace_out_last(&dense_density(&state), state.levels());
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                prop_assert!((rho.matrix().get(i, j) - oracle[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_traces_compose(spec in sparse_state_spec(), split in 0usize..4) {
        // Tracing out {a} from the reduction equals tracing {a, b} at once;
        // the staged version reuses the dense oracle for its second step.
        prop_assume!(spec.n >= 3);
        let state = build_state(&spec);
        let a = split % (spec.n - 1);
        let combined = state.partial_trace(&[a, spec.n - 1]).unwrap();

        let staged_state = state.partial_trace(&[spec.n - 1]).unwrap();
        // Reduce the staged operator by brute force over party `a` of the
        // kept block.
        let kept: Vec<usize> = (0..spec.n - 1).collect();
        let pos = kept.iter().position(|&p| p == a).unwrap();
        let d = spec.d;
        let before: usize = d.pow(pos as u32);
        let after: usize = d.pow((kept.len() - pos - 1) as u32);
        let dim = before * after;
        let mut staged = vec![vec![Complex64::ZERO; dim]; dim];
        for i_b in 0..before {
            for i_a in 0..after {
                for j_b in 0..before {
                    for j_a in 0..after {
                        let mut acc = Complex64::ZERO;
                        for t in 0..d {
                            let row = (i_b * d + t) * after + i_a;
                            let col = (j_b * d + t) * after + j_a;
                            acc += staged_state.matrix().get(row, col);
                        }
                        staged[i_b * after + i_a][j_b * after + j_a] = acc;
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                prop_assert!((combined.matrix().get(i, j) - staged[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inner_products_are_conjugate_symmetric(a in sparse_state_spec()) {
        let state = build_state(&a);
        let norm = state.inner_product(&state).unwrap();
        prop_assert!(norm.im == 0.0 && norm.re >= 0.0);
    }
}

// --- classical round trips ----------------------------------------------------

#[test]
fn randomized_squares_round_trip_through_arrays() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let square = random_latin_square(d, &mut rng);
        let oa = latin_to_oa(&[square.clone()]).unwrap();
        let check = oa.verify().unwrap();
        assert!(check.strength_ok);
        assert_eq!(check.lambda, 1);
        let back = oa_to_latin(&oa, 2).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0], square);
        assert!(back[0].is_latin());
    }
}

#[test]
fn address_splits_of_balanced_arrays_are_latin() {
    // Whenever the strength/index check passes on the address columns, the
    // extracted hypercubes satisfy the line condition.
    for (oa, k) in [
        (latin_to_oa(&oa_to_latin(&oa_9432(), 2).unwrap()).unwrap(), 2usize),
        (crate_oa_8423_alias(), 3),
    ] {
        let check = oa.verify().unwrap();
        assert!(check.strength_ok && check.lambda == 1);
        for cube in oa_to_latin(&oa, k).unwrap() {
            assert!(cube.is_latin());
        }
    }
}

fn crate_oa_8423_alias() -> qudit_designs::classical::OrthogonalArray {
    qudit_designs::constructions::oa_8423()
}

// --- quantum Latin squares vs single-party uniformity --------------------------

#[test]
fn quantum_latin_squares_match_single_party_uniformity() {
    // Both directions: valid squares give 1-uniform tripartite states and
    // perturbed squares break both checks the same way.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..60 {
        let d = if round % 2 == 0 { 2 } else { 3 };
        let square = random_qls(d, &mut rng);
        let perturbed = perturb_one_cell(&square, &mut rng);
        for (candidate, expected) in [(&square, true), (&perturbed, false)] {
            let latin = verify_qls(candidate).unwrap().ok;
            let uniform = certify_uniformity(
                &candidate.induced_state().unwrap(),
                1,
                tol::IDENTITY,
            )
            .unwrap()
            .ok;
            assert_eq!(latin, expected, "round {round} latin check");
            assert_eq!(uniform, expected, "round {round} uniformity check");
        }
    }
}

// --- quantum orthogonal arrays --------------------------------------------------

#[test]
fn qoa_reports_are_invariant_under_column_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (qoa, label) in [
        (qoa_4522(), "five-qubit"),
        (qoa_8623(), "six-qubit"),
        (ame_5_d(3).unwrap().qoa, "five-qutrit"),
    ] {
        let baseline = verify_qoa(&qoa).unwrap();
        for party in 0..qoa.columns() {
            let rotation = haar_unitary(qoa.levels(), &mut rng);
            let rows: Vec<QuditState> = qoa
                .rows()
                .iter()
                .map(|row| row.apply_local(party, &rotation).unwrap())
                .collect();
            let rotated =
                QuantumOrthogonalArray::new(qoa.columns(), qoa.levels(), qoa.strength(), rows)
                    .unwrap();
            let report = verify_qoa(&rotated).unwrap();
            assert!(report.ok, "{label}: rotation on column {party} broke it");
            assert!(
                (report.worst_deviation - baseline.worst_deviation).abs() < 1e-9,
                "{label}: deviation moved"
            );
            // Column counts are invariant under local unitaries.
            let classes = classify_columns(&rotated).unwrap();
            let base_classes = classify_columns(&qoa).unwrap();
            assert_eq!(classes.n_classical, base_classes.n_classical);
        }
    }
}

#[test]
fn verified_arrays_induce_uniform_states() {
    for (qoa, k) in [
        (qoa_4522(), 2usize),
        (qoa_8623(), 3),
        (ame_5_d(2).unwrap().qoa, 2),
        (ame_5_d(3).unwrap().qoa, 2),
        (QuantumOrthogonalArray::from_classical(&oa_9432()).unwrap(), 2),
    ] {
        let state = qoa_to_state(&qoa).unwrap();
        assert!(certify_uniformity(&state, k, tol::IDENTITY).unwrap().ok);
    }
}

#[test]
fn mutually_orthogonal_families_induce_uniform_states() {
    for (family, k) in [
        (qoa_to_moqlh(&qoa_4522()).unwrap(), 2usize),
        (qoa_to_moqlh(&qoa_8623()).unwrap(), 3),
        (ghz_hypercube(4, 3).unwrap(), 1),
    ] {
        assert!(verify_moqlh(&family).unwrap().ok);
        let state = family.induced_state().unwrap();
        assert!(certify_uniformity(&state, k, tol::IDENTITY).unwrap().ok);
    }
}

#[test]
fn separable_families_agree_with_classical_orthogonality() {
    let squares = oa_to_latin(&oa_9432(), 2).unwrap();
    assert!(verify_mols(&squares).unwrap().ok);
    let lifted = QuantumLatinHypercube::from_classical(&squares).unwrap();
    assert!(verify_moqlh(&lifted).unwrap().ok);

    // Two copies of the same square: both checks reject.
    let copies = vec![squares[0].clone(), squares[0].clone()];
    assert!(!verify_mols(&copies).unwrap().ok);
    let lifted = QuantumLatinHypercube::from_classical(&copies).unwrap();
    assert!(!verify_moqlh(&lifted).unwrap().ok);
}

// --- uniformity details ---------------------------------------------------------

#[test]
fn uniformity_is_monotone_in_k() {
    for state in [
        qoa_to_state(&qoa_4522()).unwrap(),
        qoa_to_state(&qoa_8623()).unwrap(),
        ame_5_d(4).unwrap().state,
    ] {
        let report = uniformity_report(&state).unwrap();
        for k in 1..=report.max_k {
            assert!(certify_uniformity(&state, k, tol::IDENTITY).unwrap().ok);
        }
    }
}

#[test]
fn single_party_rotations_preserve_the_report() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let state = qoa_to_state(&qoa_4522()).unwrap();
    let base = uniformity_report(&state).unwrap();
    for party in 0..state.parties() {
        let rotated = state
            .apply_local(party, &haar_unitary(2, &mut rng))
            .unwrap();
        let report = uniformity_report(&rotated).unwrap();
        assert_eq!(report.max_k, base.max_k);
        assert_eq!(report.is_ame, base.is_ame);
    }
}

#[test]
fn measuring_address_parties_degrades_uniformity_gracefully() {
    // Measuring k' of the k address parties leaves a (k - k')-uniform state.
    let five = qoa_to_state(&qoa_4522()).unwrap();
    for party in 0..2 {
        for outcome in 0..2u8 {
            let outcomes = BTreeMap::from([(party, outcome)]);
            assert!(measure_and_check(&five, &outcomes, 1).unwrap().ok);
        }
    }
    let both = BTreeMap::from([(0usize, 1u8), (1usize, 0u8)]);
    assert!(measure_and_check(&five, &both, 0).unwrap().ok);

    let six = qoa_to_state(&qoa_8623()).unwrap();
    for party in 0..3 {
        for outcome in 0..2u8 {
            let outcomes = BTreeMap::from([(party, outcome)]);
            assert!(measure_and_check(&six, &outcomes, 2).unwrap().ok);
        }
    }
    let all_three = BTreeMap::from([(0usize, 0u8), (1usize, 1u8), (2usize, 0u8)]);
    assert!(measure_and_check(&six, &all_three, 0).unwrap().ok);
}

#[test]
fn five_qubit_state_is_maximally_connected_under_product_bases() {
    // Computational complements certify only the address pair and the
    // payload pair; every other pair needs one complement party measured in
    // the rotated basis. Existence of such a product basis per pair is the
    // maximal-connectedness property.
    use qudit_designs::tensor::ComplexMatrix;
    use qudit_designs::uniformity::connectedness_check;

    let s = 1.0 / 2.0f64.sqrt();
    let hadamard = ComplexMatrix::from_fn(2, 2, |i, j| {
        Complex64::new(if i == 1 && j == 1 { -s } else { s }, 0.0)
    });
    let five = qoa_to_state(&qoa_4522()).unwrap();
    for a in 0..5usize {
        for b in (a + 1)..5 {
            let complement: Vec<usize> = (0..5).filter(|&p| p != a && p != b).collect();
            let mut certified = false;
            'mixes: for mix in 0..8usize {
                let bases: BTreeMap<usize, ComplexMatrix> = complement
                    .iter()
                    .enumerate()
                    .filter(|&(slot, _)| mix >> slot & 1 == 1)
                    .map(|(_, &party)| (party, hadamard.clone()))
                    .collect();
                let basis_ref = (!bases.is_empty()).then_some(&bases);
                if connectedness_check(&five, (a, b), basis_ref).unwrap().ok {
                    certified = true;
                    break 'mixes;
                }
            }
            assert!(certified, "pair ({a},{b}) has no certifying basis mix");
        }
    }
}

// --- multiunitary correspondences -----------------------------------------------

#[test]
fn half_split_unitarity_agrees_with_uniformity() {
    use qudit_designs::constructions::ame_4_3;
    use qudit_designs::constructions::ghz;

    let cases = [
        (ame_4_3(), true),
        (ghz(4, 2).unwrap(), false),
        (qoa_to_state(&qoa_8623()).unwrap(), true),
    ];
    for (state, expected) in cases {
        let k = state.parties() / 2;
        let unitary = is_k_unitary(&state).unwrap().ok;
        let uniform = certify_uniformity(&state, k, tol::IDENTITY).unwrap().ok;
        assert_eq!(unitary, expected);
        assert_eq!(uniform, expected);
    }
}

#[test]
fn permutation_coefficients_characterize_minimal_support() {
    use qudit_designs::constructions::ame_4_3;

    // Minimal support with equal amplitudes: a literal permutation matrix.
    let minimal = ame_4_3();
    let matrix = state_to_matrix(&minimal, &[0, 1]).unwrap();
    assert!(is_permutation_matrix(&matrix, 1e-10, false).unwrap());
    assert_eq!(minimal.support(), 9);

    // Non-minimal support: more than d^k entries, so some row holds two.
    let six = qoa_to_state(&qoa_8623()).unwrap();
    let scaled = six.scaled(Complex64::new(
        (8f64).sqrt() / six.norm_sqr().sqrt(),
        0.0,
    ));
    let matrix = state_to_matrix(&scaled, &[0, 1, 2]).unwrap();
    assert!(!is_permutation_matrix(&matrix, 1e-10, false).unwrap());
    assert!(six.support() > 8);
}

use nalgebra::DVector;
use proptest::prelude::*;
use qclone_core::qstate::{
    bell_state, c64, embed, identity, max_abs_diff, named_qubit, pauli_string_unitary, DensityOperator, Matrix, Pauli,
    PauliString, RegisterLayout, Role, StateVector, C64,
};

fn random_state(n: usize, raw: &[(f64, f64)]) -> StateVector {
    let mut amps: Vec<C64> = raw.iter().take(1 << n).map(|&(re, im)| c64(re, im)).collect();
    if amps.iter().all(|a| a.norm() < 1e-3) {
        amps[0] = c64(1., 0.);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|a| a / norm).collect();
    StateVector::new(amps, RegisterLayout::anonymous(n)).unwrap()
}

/// Random unitary from the QR factor of a complex Gaussian-ish matrix.
fn random_unitary(k: usize, raw: &[(f64, f64)]) -> Matrix {
    let dim = 1 << k;
    let m = Matrix::from_fn(dim, dim, |r, c| {
        let (re, im) = raw[(r * dim + c) % raw.len()];
        c64(re + if r == c { 2.0 } else { 0.0 }, im)
    });
    m.qr().q()
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_preserved_over_gate_sequences(
        raw in amplitudes(5),
        gates in prop::collection::vec((prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16), 0usize..5, 1usize..5), 1..12),
    ) {
        let mut s = random_state(5, &raw);
        for (g, a, shift) in gates {
            let b = (a + shift) % 5;
            s = s.apply_unitary(&random_unitary(2, &g), &[a, b]).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_matches_dense_embedding(
        n in 2usize..=6,
        raw in amplitudes(6),
        g in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
        picks in prop::collection::vec(0usize..6, 3),
    ) {
        let s = random_state(n, &raw);
        let mut targets: Vec<usize> = Vec::new();
        for p in picks {
            let q = p % n;
            if !targets.contains(&q) {
                targets.push(q);
            }
        }
        let u = random_unitary(targets.len(), &g);
        let fast = s.apply_unitary(&u, &targets).unwrap();
        let slow = embed(&u, &targets, n) * DVector::from_column_slice(s.amplitudes());
        for (a, b) in fast.amplitudes().iter().zip(slow.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_in_two_steps(raw in amplitudes(5), drop_first in 0usize..5, drop_second in 0usize..4) {
        let s = random_state(5, &raw);
        let step1: Vec<usize> = (0..5).filter(|&q| q != drop_first).collect();
        let rho1 = s.partial_trace(&step1).unwrap();
        let local_keep: Vec<usize> = (0..4).filter(|&q| q != drop_second).collect();
        let two_step = rho1.partial_trace(&local_keep).unwrap();
        let direct: Vec<usize> = local_keep.iter().map(|&l| step1[l]).collect();
        let one_step = s.partial_trace(&direct).unwrap();
        prop_assert!(max_abs_diff(two_step.matrix(), one_step.matrix()) < 1e-12);
        let via_density = DensityOperator::pure(&s).partial_trace(&direct).unwrap();
        prop_assert!(max_abs_diff(via_density.matrix(), one_step.matrix()) < 1e-12);
    }

    #[test]
    fn entropy_additive_on_products(a in amplitudes(3), b in amplitudes(3), ka in 0usize..3, kb in 0usize..3) {
        let ra = random_state(3, &a).partial_trace(&[ka]).unwrap();
        let rb = random_state(3, &b).partial_trace(&[kb, (kb + 1) % 3]).unwrap();
        let joint = DensityOperator::new(rb.matrix().kronecker(ra.matrix()), RegisterLayout::anonymous(3)).unwrap();
        let lhs = joint.von_neumann_entropy().unwrap();
        let rhs = ra.von_neumann_entropy().unwrap() + rb.von_neumann_entropy().unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn schmidt_symmetry(raw in amplitudes(5), split in 1usize..5) {
        let s = random_state(5, &raw);
        let side_a: Vec<usize> = (0..split).collect();
        let side_b: Vec<usize> = (split..5).collect();
        let sa = s.partial_trace(&side_a).unwrap().von_neumann_entropy().unwrap();
        let sb = s.partial_trace(&side_b).unwrap().von_neumann_entropy().unwrap();
        prop_assert!((sa - sb).abs() < 1e-9);
    }

    #[test]
    fn pauli_strings_are_closed(fa in prop::collection::vec(0usize..4, 3), fb in prop::collection::vec(0usize..4, 3)) {
        let mk = |f: &[usize]| PauliString::new(c64(1., 0.), f.iter().enumerate().map(|(q, &m)| (q, Pauli::from_index(m))));
        let (a, b) = (mk(&fa), mk(&fb));
        let layout = RegisterLayout::anonymous(3);
        let product = &a * &b;
        let dense = pauli_string_unitary(&a, &layout).unwrap() * pauli_string_unitary(&b, &layout).unwrap();
        prop_assert!(max_abs_diff(&pauli_string_unitary(&product, &layout).unwrap(), &dense) < 1e-14);
    }
}

#[test]
fn bell_marginal_is_mixed() {
    let rho = bell_state(Role::Signal(1), Role::Noise(1)).partial_trace(&[0]).unwrap();
    assert!(rho.max_deviation(&(identity(2) * c64(0.5, 0.))) < 1e-15);
    assert!((rho.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn product_marginal_recovers_factor() {
    let psi = named_qubit("+i").unwrap();
    let s = psi.tensor(&bell_state(Role::Signal(1), Role::Noise(1))).unwrap();
    let rho = s.partial_trace(&[0]).unwrap();
    assert!((rho.fidelity_pure(&psi).unwrap() - 1.0).abs() < 1e-14);
    assert!(rho.von_neumann_entropy().unwrap().abs() < 1e-12);
}

#[test]
fn fidelity_with_mixed_is_half() {
    let mixed = DensityOperator::maximally_mixed(RegisterLayout::single_data());
    for name in ["0", "-", "+i"] {
        assert!((mixed.fidelity_pure(&named_qubit(name).unwrap()).unwrap() - 0.5).abs() < 1e-15);
    }
    let zero = named_qubit("0").unwrap();
    assert!((DensityOperator::pure(&zero).fidelity_pure(&zero).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn single_qubit_pauli_products() {
    let x = PauliString::uniform(Pauli::X, [0]);
    let z = PauliString::uniform(Pauli::Z, [0]);
    let layout = RegisterLayout::anonymous(1);
    let xz = pauli_string_unitary(&(&x * &z), &layout).unwrap();
    assert!(max_abs_diff(&xz, &(Pauli::Y.matrix() * c64(0., -1.))) < 1e-15);
}

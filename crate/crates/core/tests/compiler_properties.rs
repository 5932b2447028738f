use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use proptest::prelude::*;
use qclone_core::compiler::{
    basis_change_v_tilde, circuit_to_unitary, compile_ccu, compile_decoding, compile_decoding_for_target,
    compile_decoding_n1, compile_encoding, compile_encoding_for, equivalence_up_to_global_phase, export_circuit,
    gate_count_report, parse_text, ControlPattern, ExportFormat, GateCircuit, GateKind,
};
use qclone_core::protocol::{
    bell_basis, decoding_unitary, encode, encoding_unitary, encoding_unitary_for, prepare_initial,
    rotated_variant_coefficients, AlphaCoefficients, EncryptedRegister, ProtocolConfig, Variant,
};
use qclone_core::qstate::{c64, haar_random_qubit, identity, max_abs_diff, Matrix, Role};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn equivalent(u: &Matrix, v: &Matrix) -> bool {
    equivalence_up_to_global_phase(u, v).unwrap().equivalent
}

#[test]
fn encoder_circuits_are_sound() {
    for n in 1..=4 {
        for t in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let c = compile_encoding(n, t).unwrap();
            assert!(equivalent(&circuit_to_unitary(&c).unwrap(), &encoding_unitary(n, t).unwrap()), "n={n} t={t}");
            let r = compile_encoding_for(Variant::RotatedX2, n, t).unwrap();
            let dense = encoding_unitary_for(Variant::RotatedX2, n, t).unwrap();
            assert!(equivalent(&circuit_to_unitary(&r).unwrap(), &dense));
        }
    }
}

#[test]
fn decoder_circuits_are_sound() {
    for n in 2..=4 {
        for alphas in [AlphaCoefficients::standard(n), rotated_variant_coefficients(n)] {
            for target in 1..=n {
                let c = compile_decoding_for_target(n, &alphas, target).unwrap();
                let dense = decoding_unitary(n, &alphas, target).unwrap();
                assert!(equivalent(&circuit_to_unitary(&c).unwrap(), &dense), "n={n} target={target}");
            }
        }
    }
    let alphas = AlphaCoefficients::standard(1);
    let c = compile_decoding_n1(&alphas).unwrap();
    assert!(equivalent(&circuit_to_unitary(&c).unwrap(), &decoding_unitary(1, &alphas, 1).unwrap()));
}

#[test]
fn basis_change_maps_bell_states_exactly() {
    let u = circuit_to_unitary(&basis_change_v_tilde()).unwrap();
    for (mu, phi) in bell_basis().iter().enumerate() {
        let image = &u * nalgebra::DVector::from_column_slice(phi);
        // mu = 2 mu_1 + mu_2 with mu_1 on the signal qubit (bit 0)
        let index = (mu >> 1) | ((mu & 1) << 1);
        for k in 0..4 {
            let expected = if k == index { c64(1., 0.) } else { c64(0., 0.) };
            assert!((image[k] - expected).norm() < 1e-12, "mu={mu}");
        }
    }
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix {
    use rand_distr::{Distribution, StandardNormal};
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    let m = Matrix::from_fn(2, 2, |_, _| c64(g(), g()));
    m.qr().q()
}

fn controlled_reference(pattern: ControlPattern, u: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(8, 8);
    for col in 0..8 {
        let fires = (col & 1 == 1) == pattern.first && ((col >> 1) & 1 == 1) == pattern.second;
        let t_in = col >> 2;
        for t_out in 0..2 {
            let row = (col & 3) | (t_out << 2);
            m[(row, col)] = if fires {
                u[(t_out, t_in)]
            } else if t_out == t_in {
                c64(1., 0.)
            } else {
                c64(0., 0.)
            };
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn ccu_is_exact_for_every_pattern(seed in any::<u64>()) {
        let u = random_unitary(&mut ChaCha8Rng::seed_from_u64(seed));
        for mu in 0..4 {
            let pattern = ControlPattern::from_mu(mu);
            let c = compile_ccu(pattern, &u, [0, 1], 2, 3).unwrap();
            prop_assert_eq!(c.counts().two_qubit, 5);
            let built = circuit_to_unitary(&c).unwrap();
            prop_assert!(max_abs_diff(&built, &controlled_reference(pattern, &u)) < 1e-12);
        }
    }
}

#[test]
fn compiled_round_trip_recovers_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 2..=3 {
        let cfg = ProtocolConfig::new(n);
        let layout = cfg.layout();
        let mut enc_map = vec![layout.index_of(Role::Data).unwrap()];
        enc_map.extend((1..=n).map(|i| layout.index_of(Role::Signal(i)).unwrap()));
        let enc = compile_encoding(n, FRAC_PI_4).unwrap();
        for _ in 0..10 {
            let psi = haar_random_qubit(&mut rng);
            let initial = prepare_initial(&cfg, &psi).unwrap();
            let state = enc.simulate_on(&initial, &enc_map).unwrap();
            let dense = encode(&cfg, &initial).unwrap();
            let overlap = state.inner(&dense).unwrap().norm();
            assert!((overlap - 1.0).abs() < 1e-10);
            let reg = EncryptedRegister::from_state(&cfg, &psi, state).unwrap();
            for target in 1..=n {
                let dec = compile_decoding_for_target(n, &AlphaCoefficients::standard(n), target).unwrap();
                let mut map = vec![layout.index_of(Role::Signal(target)).unwrap()];
                map.extend((1..=n).map(|i| layout.index_of(Role::Noise(i)).unwrap()));
                let out = dec.simulate_on(reg.state(), &map).unwrap();
                let rho = out.partial_trace(&map[..1]).unwrap();
                assert!(rho.fidelity_pure(&psi).unwrap() > 1.0 - 1e-10);
            }
        }
    }
}

#[test]
fn reference_counts() {
    for n in 1..=6 {
        let enc = compile_encoding(n, FRAC_PI_4).unwrap().counts();
        assert_eq!(enc.two_qubit, 4 * n);
        assert_eq!(enc.one_qubit, 2 * n + 4);
    }
    for n in 2..=6 {
        let report = gate_count_report(n).unwrap();
        assert_eq!(report.dec_2q, 15 * n + 6);
        assert_eq!(report.formula_dec_2q, 15 * n + 7);
        assert!(!report.dec_matches_formula);
        assert!(report.enc_matches_formula);
        assert!(report.total_within_bound);
        assert_eq!(report.total_2q, 19 * n + 6);
    }
}

/// Decoder without the phase fix and relabeling CNOT of the basis change:
/// the control patterns absorb the relabeling and the diagonal phases
/// commute with every block, so `15n + 2` two-qubit gates suffice.
fn cheaper_decoder(n: usize, alphas: &AlphaCoefficients) -> GateCircuit {
    let mut head = GateCircuit::new(2);
    head.add(GateKind::Cnot, &[0, 1]).unwrap();
    head.add(GateKind::H, &[0]).unwrap();
    let head_u = circuit_to_unitary(&head).unwrap();
    let landing: Vec<usize> = bell_basis()
        .iter()
        .map(|phi| {
            let image = &head_u * nalgebra::DVector::from_column_slice(phi);
            (0..4).max_by(|&a, &b| image[a].norm().total_cmp(&image[b].norm())).unwrap()
        })
        .collect();
    let mut c = GateCircuit::new(n + 1);
    c.append_mapped(&head, &[0, 1]).unwrap();
    let keys: Vec<usize> = (2..=n).collect();
    for (mu, &lands) in landing.iter().enumerate().skip(1) {
        let pattern = ControlPattern::new(lands & 1 == 1, lands & 2 == 2);
        let ratio = alphas.get(mu) / alphas.get(0);
        c.append(&compile_ccu(pattern, &(identity(2) * ratio), [0, 1], keys[0], n + 1).unwrap()).unwrap();
        let sigma = qclone_core::qstate::Pauli::from_index(mu).transpose();
        let sigma = sigma.1.matrix() * sigma.0;
        for &k in &keys {
            c.append(&compile_ccu(pattern, &sigma, [0, 1], k, n + 1).unwrap()).unwrap();
        }
    }
    c.append_mapped(&head.inverse(), &[0, 1]).unwrap();
    c
}

#[test]
fn cheaper_decoder_variant_is_sound() {
    for n in 2..=4 {
        let alphas = AlphaCoefficients::standard(n);
        let c = cheaper_decoder(n, &alphas);
        assert_eq!(c.counts().two_qubit, 15 * n + 2);
        let dense = decoding_unitary(n, &alphas, 1).unwrap();
        assert!(equivalent(&circuit_to_unitary(&c).unwrap(), &dense), "n={n}");
    }
}

#[test]
fn text_export_round_trips() {
    let circuits = [
        compile_encoding(3, FRAC_PI_8).unwrap(),
        compile_encoding_for(Variant::RotatedX2, 2, 0.37).unwrap(),
        compile_decoding(3, &AlphaCoefficients::standard(3)).unwrap(),
        compile_decoding_n1(&AlphaCoefficients::standard(1)).unwrap(),
    ];
    for c in circuits {
        let text = export_circuit(&c, ExportFormat::Text).unwrap();
        let parsed = parse_text(&text).unwrap();
        assert_eq!(parsed, c);
        assert_eq!(export_circuit(&parsed, ExportFormat::Text).unwrap(), text);
    }
}

#[test]
fn qasm_is_deterministic_and_counts_match() {
    let c = compile_decoding(2, &AlphaCoefficients::standard(2)).unwrap();
    let a = export_circuit(&c, ExportFormat::Openqasm2).unwrap();
    assert_eq!(a, export_circuit(&c, ExportFormat::Openqasm2).unwrap());
    assert!(a.starts_with("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n"));
    let two_qubit = a.lines().filter(|l| l.starts_with("cx ") || l.starts_with("cu3(")).count();
    assert_eq!(two_qubit, c.counts().two_qubit);
}

#[test]
fn simulate_rejects_short_map() {
    let c = compile_encoding(2, FRAC_PI_4).unwrap();
    let psi = haar_random_qubit(&mut ChaCha8Rng::seed_from_u64(1));
    let state = prepare_initial(&ProtocolConfig::new(2), &psi).unwrap();
    assert!(c.simulate_on(&state, &[0, 1]).is_err());
}

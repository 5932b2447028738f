use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use proptest::prelude::*;
use qclone_core::analysis::access_structure;
use qclone_core::protocol::{
    decoding_unitary, encoding_coefficients, encoding_unitary, encoding_unitary_for, erased_pairs_state,
    iterated_cloning_plan, rotated_variant_coefficients, run_channel, AlphaCoefficients, EncryptedRegister,
    ProtocolConfig, Variant,
};
use qclone_core::qstate::{
    c64, dagger, haar_random_qubit, identity, max_abs_diff, named_qubit, pauli_eigenstates, DensityOperator, Matrix,
    Role, StateVector,
};
use qclone_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Independent dense building blocks for the oracles below.
fn pauli(mu: usize) -> Matrix {
    let (o, l, i) = (c64(0., 0.), c64(1., 0.), c64(0., 1.));
    let e = match mu {
        0 => [l, o, o, l],
        1 => [o, l, l, o],
        2 => [o, -i, i, o],
        _ => [l, o, o, -l],
    };
    Matrix::from_row_slice(2, 2, &e)
}

fn tensor_power(m: &Matrix, k: usize) -> Matrix {
    (1..k).fold(m.clone(), |acc, _| acc.kronecker(m))
}

/// `exp(-i t P)` by a truncated Taylor series.
fn expm_taylor(p: &Matrix, t: f64) -> Matrix {
    let a = p * c64(0., -t);
    let mut term = identity(p.nrows());
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &a / c64(k as f64, 0.);
        sum += &term;
    }
    sum
}

fn haar(seed: u64) -> StateVector {
    haar_random_qubit(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn half() -> Matrix {
    identity(2) * c64(0.5, 0.)
}

#[test]
fn encoder_matches_taylor_exponentials() {
    for n in 1..=3 {
        for t in [0.3, FRAC_PI_8, FRAC_PI_4, 2.0] {
            let oracle =
                expm_taylor(&tensor_power(&pauli(1), n + 1), t) * expm_taylor(&tensor_power(&pauli(3), n + 1), t);
            assert!(max_abs_diff(&encoding_unitary(n, t).unwrap(), &oracle) < 1e-12, "n={n} t={t}");
            let rotated =
                expm_taylor(&tensor_power(&pauli(1), n + 1), t) * expm_taylor(&tensor_power(&pauli(2), n + 1), t);
            assert!(max_abs_diff(&encoding_unitary_for(Variant::RotatedX2, n, t).unwrap(), &rotated) < 1e-12);
        }
    }
}

#[test]
fn expansion_identity_at_protocol_angle() {
    for n in 1..=4 {
        let alphas = AlphaCoefficients::standard(n);
        let mut expansion = Matrix::zeros(1 << (n + 1), 1 << (n + 1));
        for mu in 0..4 {
            expansion += tensor_power(&pauli(mu), n + 1) * (c64(0.5, 0.) / alphas.get(mu));
        }
        assert!(max_abs_diff(&encoding_unitary(n, FRAC_PI_4).unwrap(), &expansion) < 1e-10);
    }
}

#[test]
fn generalized_coefficients_at_pi_over_8() {
    let (n, t) = (2usize, FRAC_PI_8);
    let (c, s) = (t.cos(), t.sin());
    // closed forms
    let closed_form = [c64(c * c, 0.), c64(0., -c * s), -c64(0., -1.).powu(3) * (s * s), c64(0., -c * s)];
    let computed = encoding_coefficients(Variant::Standard, n, t);
    for mu in 0..4 {
        assert!((computed[mu] - closed_form[mu]).norm() < 1e-15);
    }
    let mut sum = Matrix::zeros(8, 8);
    for (mu, cm) in closed_form.iter().enumerate() {
        sum += tensor_power(&pauli(mu), 3) * *cm;
    }
    assert!(max_abs_diff(&encoding_unitary(n, t).unwrap(), &sum) < 1e-10);
}

#[test]
fn half_pauli_sum_is_swap() {
    let mut sum = Matrix::zeros(4, 4);
    for mu in 0..4 {
        sum += pauli(mu).kronecker(&pauli(mu)) * c64(0.5, 0.);
    }
    for a in 0..2 {
        for b in 0..2 {
            let input = a + 2 * b;
            let output = b + 2 * a;
            for k in 0..4 {
                let expected = if k == output { 1.0 } else { 0.0 };
                assert!((sum[(k, input)] - c64(expected, 0.)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn n2_decoder_shape() {
    let u = decoding_unitary(2, &AlphaCoefficients::standard(2), 1).unwrap();
    assert_eq!(u.shape(), (8, 8));
    assert!(max_abs_diff(&(dagger(&u) * &u), &identity(8)) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn recovery_for_every_target(seed in any::<u64>(), n in 2usize..=5) {
        let psi = haar(seed);
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &psi).unwrap();
        for target in 1..=n {
            let out = reg.decrypt(target).unwrap();
            prop_assert!(out.fidelity_vs_input >= 1.0 - 1e-10);
            prop_assert!(out.fidelity_vs_input <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn pads_are_restored(seed in any::<u64>(), n in 2usize..=4, pick in 0usize..4) {
        let target = 1 + pick % n;
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &haar(seed)).unwrap();
        let out = reg.decrypt(target).unwrap();
        prop_assert!(out.pair_fidelity(Role::Data, Role::Noise(target)).unwrap() > 1.0 - 1e-10);
        for j in (1..=n).filter(|&j| j != target) {
            prop_assert!(out.pair_fidelity(Role::Signal(j), Role::Noise(j)).unwrap() > 1.0 - 1e-10);
        }
    }

    #[test]
    fn rotated_round_trip(seed in any::<u64>(), n in 2usize..=3) {
        let psi = haar(seed);
        let cfg = ProtocolConfig::new(n).with_variant(Variant::RotatedX2);
        let reg = EncryptedRegister::encode(&cfg, &psi).unwrap();
        for target in 1..=n {
            prop_assert!(reg.decrypt(target).unwrap().fidelity_vs_input > 1.0 - 1e-10);
        }
        // the same decoder built directly from the closed-form rotated phases
        let u = decoding_unitary(n, &rotated_variant_coefficients(n), 1).unwrap();
        let mut roles = vec![Role::Signal(1)];
        roles.extend((1..=n).map(Role::Noise));
        let q = reg.state().layout().indices_of(&roles).unwrap();
        let after = reg.state().apply_unitary(&u, &q).unwrap();
        let rho = after.partial_trace(&q[..1]).unwrap();
        prop_assert!(rho.fidelity_pure(&psi).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn substitution_recovers(seed in any::<u64>(), n in 2usize..=3, mask in 0usize..4) {
        let psi = haar(seed);
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &psi).unwrap();
        let lost: Vec<Role> = (2..=n).filter(|j| mask >> (j - 2) & 1 == 1).map(Role::Noise).collect();
        let out = reg.decrypt_with_substitution(&lost, 1).unwrap();
        prop_assert!(out.fidelity_vs_input > 1.0 - 1e-10);
    }
}

#[test]
fn perfect_encryption_for_complete_input_set() {
    for n in 2..=5 {
        let cfg = ProtocolConfig::new(n);
        for psi in pauli_eigenstates() {
            let a = run_channel(&cfg, &psi, &[Role::Data]).unwrap();
            assert!(a.max_deviation(&half()) < 1e-10);
            for i in 1..=n {
                let s = run_channel(&cfg, &psi, &[Role::Signal(i)]).unwrap();
                assert!(s.max_deviation(&half()) < 1e-10, "n={n} S{i}");
            }
        }
    }
}

#[test]
fn erased_pairs_are_blind() {
    for n in 2..=4 {
        let expected = erased_pairs_state(n - 1);
        for dropped in 1..=n {
            let keep: Vec<Role> =
                (1..=n).filter(|&j| j != dropped).flat_map(|j| [Role::Signal(j), Role::Noise(j)]).collect();
            for psi in pauli_eigenstates() {
                let rho = run_channel(&ProtocolConfig::new(n), &psi, &keep).unwrap();
                assert!(rho.max_deviation(&expected) < 1e-10, "n={n} dropped={dropped}");
            }
        }
    }
}

#[test]
fn erased_pair_mixture_by_hand() {
    // (1/4) sum_mu |phi_mu><phi_mu| over one pair is I/4
    assert!(max_abs_diff(&erased_pairs_state(1), &(identity(4) * c64(0.25, 0.))) < 1e-15);
}

fn residual_without_recovered(n: usize, psi: &StateVector, target: usize) -> DensityOperator {
    let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), psi).unwrap();
    let out = reg.decrypt(target).unwrap();
    let mut roles: Vec<Role> = (1..=n).filter(|&j| j != target).map(Role::Signal).collect();
    roles.extend((1..=n).map(Role::Noise));
    out.residual_on(&roles).unwrap()
}

#[test]
fn key_is_consumed() {
    let inputs: Vec<StateVector> = ["0", "1", "+", "+i"].iter().map(|s| named_qubit(s).unwrap()).collect();
    for n in 2..=4 {
        for target in 1..=n {
            let residuals: Vec<DensityOperator> =
                inputs.iter().map(|psi| residual_without_recovered(n, psi, target)).collect();
            for r in &residuals[1..] {
                assert!(residuals[0].trace_distance(r).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn second_decryption_learns_nothing() {
    for n in 2..=3 {
        let mut outputs = Vec::new();
        for name in ["0", "1"] {
            let psi = named_qubit(name).unwrap();
            let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &psi).unwrap();
            let first = reg.decrypt(1).unwrap();
            let reused = EncryptedRegister::from_state(reg.config(), &psi, first.state.clone()).unwrap();
            let second = reused.decrypt(2).unwrap();
            assert!((second.fidelity_vs_input - 0.5).abs() < 1e-10);
            // everything except the copy the first decryption produced
            let rest: Vec<Role> =
                reg.config().layout().roles().iter().copied().filter(|r| *r != Role::Signal(1)).collect();
            outputs.push(second.residual_on(&rest).unwrap());
        }
        assert!(outputs[0].trace_distance(&outputs[1]).unwrap() < 1e-10);
    }
}

#[test]
fn decrypt_examples() {
    let one = named_qubit("1").unwrap();
    let out = EncryptedRegister::encode(&ProtocolConfig::new(2), &one).unwrap().decrypt(1).unwrap();
    assert!((out.recovered_state().fidelity_pure(&one).unwrap() - 1.0).abs() < 1e-10);

    let psi = haar(11);
    let out = EncryptedRegister::encode(&ProtocolConfig::new(3), &psi).unwrap().decrypt(2).unwrap();
    assert!((out.fidelity_vs_input - 1.0).abs() < 1e-10);
}

#[test]
fn other_accepted_angles_decrypt() {
    for m in [-1, 1, 2, 3] {
        let t = FRAC_PI_4 + m as f64 * PI / 2.0;
        let psi = haar(5);
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(3).with_t(t), &psi).unwrap();
        assert!(reg.decrypt(2).unwrap().fidelity_vs_input > 1.0 - 1e-10, "m={m}");
    }
    // at odd m the m = 0 phases alone are wrong on mu = 1, 3
    let t = 3.0 * FRAC_PI_4;
    let derived = AlphaCoefficients::for_angle(Variant::Standard, 2, t).unwrap();
    assert!((derived.get(1) + AlphaCoefficients::standard(2).get(1)).norm() < 1e-12);
}

#[test]
fn substitution_examples() {
    let psi = haar(21);
    let reg2 = EncryptedRegister::encode(&ProtocolConfig::new(2), &psi).unwrap();
    assert!(reg2.decrypt_with_substitution(&[Role::Noise(2)], 1).unwrap().fidelity_vs_input > 1.0 - 1e-10);
    assert_eq!(reg2.decrypt_with_substitution(&[Role::Noise(1)], 1).unwrap_err(), Error::TargetKeyMissing(1));

    let reg3 = EncryptedRegister::encode(&ProtocolConfig::new(3), &psi).unwrap();
    let out = reg3.decrypt_with_substitution(&[Role::Noise(2), Role::Noise(3)], 1).unwrap();
    assert!(out.fidelity_vs_input > 1.0 - 1e-10);
    // oracle: apply sum alpha |phi_mu><phi_mu| (x) sigma_mu (x) sigma_mu on (S1, N1, S2, S3) by hand
    let alphas = AlphaCoefficients::standard(3);
    let bell = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        nalgebra::DVector::from_vec(vec![c64(s, 0.), c64(0., 0.), c64(0., 0.), c64(s, 0.)])
    };
    let mut u = Matrix::zeros(16, 16);
    for mu in 0..4 {
        let phi = identity(2).kronecker(&pauli(mu)) * &bell;
        let proj = &phi * phi.adjoint();
        u += pauli(mu).kronecker(&pauli(mu)).kronecker(&proj) * alphas.get(mu);
    }
    let q =
        reg3.state().layout().indices_of(&[Role::Signal(1), Role::Noise(1), Role::Signal(2), Role::Signal(3)]).unwrap();
    let by_hand = reg3.state().apply_unitary(&u, &q).unwrap().partial_trace(&q[..1]).unwrap();
    assert!((by_hand.fidelity_pure(&psi).unwrap() - out.fidelity_vs_input).abs() < 1e-12);
}

#[test]
fn decrypt_from_a_even_n() {
    let plus = named_qubit("+").unwrap();
    for (n, psi) in [(2, haar(3)), (4, plus)] {
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &psi).unwrap();
        assert!(reg.decrypt_from_a().unwrap().fidelity_vs_input > 1.0 - 1e-10);
    }
    let reg = EncryptedRegister::encode(&ProtocolConfig::new(2).with_variant(Variant::RotatedX2), &haar(4)).unwrap();
    assert!(reg.decrypt_from_a().unwrap().fidelity_vs_input > 1.0 - 1e-10);
    let reg3 = EncryptedRegister::encode(&ProtocolConfig::new(3), &haar(3)).unwrap();
    assert_eq!(reg3.decrypt_from_a().unwrap_err(), Error::OddCloneCount(3));
}

#[test]
fn odd_n_a_recovery_fails_when_forced() {
    // the same recipe applied by hand at n = 3 leaves a sign on the Y branch
    let psi = named_qubit("+").unwrap();
    let reg = EncryptedRegister::encode(&ProtocolConfig::new(3), &psi).unwrap();
    let u = encoding_unitary(3, FRAC_PI_4).unwrap();
    let q = reg.state().layout().indices_of(&[Role::Data, Role::Noise(1), Role::Noise(2), Role::Noise(3)]).unwrap();
    let rho = reg.state().apply_unitary(&dagger(&u), &q).unwrap().partial_trace(&q[..1]).unwrap();
    assert!(rho.fidelity_pure(&psi).unwrap() < 1.0 - 1e-3);
}

#[test]
fn reverse_encoding_examples() {
    for (n, psi) in [(2, haar(8)), (1, named_qubit("0").unwrap()), (3, named_qubit("1").unwrap())] {
        let reg = EncryptedRegister::encode(&ProtocolConfig::new(n), &psi).unwrap();
        let lost: Vec<Role> = (1..=n).map(Role::Noise).collect();
        let out = reg.reverse_encoding_recovery(&lost).unwrap();
        assert!(out.fidelity_vs_input > 1.0 - 1e-10);
        for i in 1..=n {
            assert!(out.pair_fidelity(Role::Signal(i), Role::Noise(i)).unwrap() > 1.0 - 1e-10);
        }
    }
}

#[test]
fn single_clone_leaks_before_decryption() {
    let cfg = ProtocolConfig::new(1);
    let plus_i = named_qubit("+i").unwrap();
    let s_plus_i = run_channel(&cfg, &plus_i, &[Role::Signal(1)]).unwrap();
    let s_zero = run_channel(&cfg, &named_qubit("0").unwrap(), &[Role::Signal(1)]).unwrap();
    assert!(s_plus_i.trace_distance(&s_zero).unwrap() > 0.4);
    let plus = named_qubit("+").unwrap();
    let out = EncryptedRegister::encode(&cfg, &plus).unwrap().decrypt(1).unwrap();
    assert!(!out.fully_encrypted);
    assert!(out.fidelity_vs_input > 1.0 - 1e-10);
}

#[test]
fn iterated_clones_decrypt_with_ancestry_keys() {
    for k in 1..=2 {
        let plan = iterated_cloning_plan(k).unwrap();
        let psi = haar(40 + k as u64);
        let state = plan.execute(&psi).unwrap();
        for clone in 0..plan.num_clones() {
            assert_eq!(plan.key_qubits(clone).unwrap().len(), 2 * k);
            let (_, rho) = plan.decrypt_clone(&state, clone).unwrap();
            assert!(rho.fidelity_pure(&psi).unwrap() > 1.0 - 1e-9, "k={k} clone={clone}");
        }
    }
}

#[test]
fn iterated_wrong_keys_learn_nothing() {
    let inputs: Vec<StateVector> = ["0", "1", "+"].iter().map(|s| named_qubit(s).unwrap()).collect();
    let plan = iterated_cloning_plan(1).unwrap();
    for clone in 0..3 {
        let outs: Vec<DensityOperator> = inputs
            .iter()
            .map(|psi| {
                let (state, decoy) = plan.with_decoy_pair(&plan.execute(psi).unwrap()).unwrap();
                plan.decrypt_clone_with_key(&state, clone, &[decoy]).unwrap().1
            })
            .collect();
        for o in &outs[1..] {
            assert!(outs[0].trace_distance(o).unwrap() < 1e-9);
        }
    }

    let plan = iterated_cloning_plan(2).unwrap();
    let states: Vec<StateVector> = inputs.iter().map(|psi| plan.execute(psi).unwrap()).collect();
    for clone in 0..plan.num_clones() {
        let mut key = plan.key_pairs(clone).unwrap();
        let leaf_node = plan.clones[clone].path[1].0;
        let sibling = if leaf_node == 1 { 2 } else { 1 };
        key[1] = plan.nodes[sibling].noise;
        let outs: Vec<DensityOperator> =
            states.iter().map(|s| plan.decrypt_clone_with_key(s, clone, &key).unwrap().1).collect();
        for o in &outs[1..] {
            assert!(outs[0].trace_distance(o).unwrap() < 1e-9, "clone={clone}");
        }
    }
}

#[test]
fn access_structure_is_consistent() {
    for n in 2..=3 {
        let report = access_structure(n, &pauli_eigenstates()).unwrap();
        assert!(report.all_pass, "n={n}");
        assert_eq!(report.authorized.len(), n << (n - 1));
    }
}

#[test]
fn channel_rejects_empty_keep() {
    let psi = named_qubit("0").unwrap();
    assert_eq!(run_channel(&ProtocolConfig::new(2), &psi, &[]).unwrap_err(), Error::EmptyKeep);
    assert!(matches!(run_channel(&ProtocolConfig::new(2), &psi, &[Role::Signal(3)]), Err(Error::MissingRole(_))));
}

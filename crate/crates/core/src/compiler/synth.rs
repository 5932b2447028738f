use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use super::gate::{GateCircuit, GateKind};
use crate::protocol::{AlphaCoefficients, Variant};
use crate::qstate::{c64, check_unitary, dagger, identity, Matrix, Pauli, STATE_TOL};
use crate::{Error, Result};

/// Which computational-basis values of two controls fire a controlled gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ControlPattern {
    pub first: bool,
    pub second: bool,
}

impl ControlPattern {
    pub const fn new(first: bool, second: bool) -> Self {
        Self { first, second }
    }

    /// Two-bit pattern of `mu = 2 * first + second`.
    pub fn from_mu(mu: usize) -> Self {
        Self { first: mu & 2 != 0, second: mu & 1 != 0 }
    }
}

impl fmt::Display for ControlPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", u8::from(self.first), u8::from(self.second))
    }
}

/// `exp(-it Z..Z)` on qubits `0..=last` of `c`: parity ladder, `RZ(2t)`,
/// ladder back.
fn push_parity_rotation(c: &mut GateCircuit, last: usize, t: f64) -> Result<()> {
    for q in 0..last {
        c.add(GateKind::Cnot, &[q, q + 1])?;
    }
    c.add(GateKind::Rz(2.0 * t), &[last])?;
    for q in (0..last).rev() {
        c.add(GateKind::Cnot, &[q, q + 1])?;
    }
    Ok(())
}

/// Encoder circuit on `[A, S_1, .., S_n]`. The `Z` (or `Y`) exponential acts
/// first, then the `X` exponential wrapped in Hadamards.
pub fn compile_encoding_for(variant: Variant, n: usize, t: f64) -> Result<GateCircuit> {
    if n < 1 {
        return Err(Error::InvalidCloneCount { n, min: 1 });
    }
    let mut c = GateCircuit::new(n + 1);
    let all = 0..=n;
    match variant.second_pauli() {
        Pauli::Y => {
            // Y = S H Z H S^dag
            for q in all.clone() {
                c.add(GateKind::Phase(-FRAC_PI_2), &[q])?;
                c.add(GateKind::H, &[q])?;
            }
            push_parity_rotation(&mut c, n, t)?;
            for q in all.clone() {
                c.add(GateKind::H, &[q])?;
                c.add(GateKind::Phase(FRAC_PI_2), &[q])?;
            }
        }
        _ => push_parity_rotation(&mut c, n, t)?,
    }
    for q in all.clone() {
        c.add(GateKind::H, &[q])?;
    }
    push_parity_rotation(&mut c, n, t)?;
    for q in all {
        c.add(GateKind::H, &[q])?;
    }
    Ok(c)
}

/// Standard encoder circuit: `4n` two-qubit gates, `2n + 4` single-qubit gates.
pub fn compile_encoding(n: usize, t: f64) -> Result<GateCircuit> {
    compile_encoding_for(Variant::Standard, n, t)
}

/// Principal square root of a 2x2 unitary by spectral decomposition.
pub fn principal_sqrt(u: &Matrix) -> Result<Matrix> {
    if u.shape() != (2, 2) {
        return Err(Error::DimensionMismatch { expected: 2, found: u.nrows() });
    }
    check_unitary(u, STATE_TOL)?;
    let half_trace = (u[(0, 0)] + u[(1, 1)]) / 2.0;
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let disc = (half_trace * half_trace - det).sqrt();
    let (l1, l2) = (half_trace + disc, half_trace - disc);
    if (l1 - l2).norm() < 1e-12 {
        return Ok(identity(2) * l1.sqrt());
    }
    let p1 = (u - identity(2) * l2) / (l1 - l2);
    let p2 = identity(2) - &p1;
    Ok(p1 * l1.sqrt() + p2 * l2.sqrt())
}

/// Doubly-controlled `u` in five two-qubit gates: `CV, CX, CV^dag, CX, CV`
/// with `V^2 = u`. Controls that must read 0 are wrapped in `X`.
pub fn compile_ccu(
    pattern: ControlPattern,
    u: &Matrix,
    controls: [usize; 2],
    target: usize,
    num_qubits: usize,
) -> Result<GateCircuit> {
    let v = principal_sqrt(u)?;
    let [c0, c1] = controls;
    let mut c = GateCircuit::new(num_qubits);
    let flips: Vec<usize> = [(c0, pattern.first), (c1, pattern.second)]
        .into_iter()
        .filter(|(_, fire_on_one)| !fire_on_one)
        .map(|(q, _)| q)
        .collect();
    for &q in &flips {
        c.add(GateKind::X, &[q])?;
    }
    c.add(GateKind::ControlledU(v.clone()), &[c1, target])?;
    c.add(GateKind::Cnot, &[c0, c1])?;
    c.add(GateKind::ControlledU(dagger(&v)), &[c1, target])?;
    c.add(GateKind::Cnot, &[c0, c1])?;
    c.add(GateKind::ControlledU(v), &[c0, target])?;
    for &q in &flips {
        c.add(GateKind::X, &[q])?;
    }
    Ok(c)
}

/// Two-qubit basis change sending `|phi_mu>` (signal on qubit 0, noise on
/// qubit 1) to `|mu_1>|mu_2>` with `mu = 2 mu_1 + mu_2`, phases included.
pub fn basis_change_v_tilde() -> GateCircuit {
    let mut c = GateCircuit::new(2);
    let fix = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(1., 0.), c64(0., -1.)]));
    c.add(GateKind::Cnot, &[0, 1]).expect("valid");
    c.add(GateKind::H, &[0]).expect("valid");
    // phi_3 and phi_2 now sit on |1>|0> and |1>|1>; relabel, then fix phases
    c.add(GateKind::Cnot, &[0, 1]).expect("valid");
    c.add(GateKind::Phase(FRAC_PI_2), &[0]).expect("valid");
    c.add(GateKind::ControlledU(fix), &[0, 1]).expect("valid");
    c
}

/// `sigma_mu^T`.
fn transposed_pauli(mu: usize) -> Matrix {
    let (sign, p) = Pauli::from_index(mu).transpose();
    p.matrix() * sign
}

/// Decoder circuit with the Bell pair on qubits `(signal, own_noise)` and
/// the remaining key qubits `keys`, over a `num_qubits` register.
pub fn compile_decoding_on(
    alphas: &AlphaCoefficients,
    signal: usize,
    own_noise: usize,
    keys: &[usize],
    num_qubits: usize,
) -> Result<GateCircuit> {
    let Some(&first_key) = keys.first() else {
        return Err(Error::InvalidCloneCount { n: 1, min: 2 });
    };
    let pair = [signal, own_noise];
    let v_tilde = basis_change_v_tilde();
    let mut c = GateCircuit::new(num_qubits);
    c.append_mapped(&v_tilde, &pair)?;
    for mu in 1..4 {
        let pattern = ControlPattern::from_mu(mu);
        let ratio = alphas.get(mu) / alphas.get(0);
        c.append(&compile_ccu(pattern, &(identity(2) * ratio), pair, first_key, num_qubits)?)?;
        let sigma = transposed_pauli(mu);
        for &k in keys {
            c.append(&compile_ccu(pattern, &sigma, pair, k, num_qubits)?)?;
        }
    }
    c.append_mapped(&v_tilde.inverse(), &pair)?;
    Ok(c)
}

/// Decoder circuit on `[S_1, N_1, .., N_n]` for `n >= 2`.
pub fn compile_decoding(n: usize, alphas: &AlphaCoefficients) -> Result<GateCircuit> {
    compile_decoding_for_target(n, alphas, 1)
}

/// Decoder circuit on `[S_target, N_1, .., N_n]`, the same qubit order as
/// the dense decoding unitary.
pub fn compile_decoding_for_target(n: usize, alphas: &AlphaCoefficients, target: usize) -> Result<GateCircuit> {
    if n < 2 {
        return Err(Error::InvalidCloneCount { n, min: 2 });
    }
    if !(1..=n).contains(&target) {
        return Err(Error::TargetOutOfRange { target, n });
    }
    let keys: Vec<usize> = (1..=n).filter(|&j| j != target).collect();
    compile_decoding_on(alphas, 0, target, &keys, n + 1)
}

/// The `n = 1` decoder as a single two-qubit gate on `[S_1, N_1]`.
pub fn compile_decoding_n1(alphas: &AlphaCoefficients) -> Result<GateCircuit> {
    let u = crate::protocol::decoding_unitary(1, alphas, 1)?;
    let mut c = GateCircuit::new(2);
    c.add(GateKind::Generic2q(u), &[0, 1])?;
    Ok(c)
}

/// Measured two-qubit counts of the compiled circuits next to the
/// reference formulas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateCountReport {
    pub n: usize,
    pub enc_2q: usize,
    pub enc_1q: usize,
    pub dec_2q: usize,
    pub dec_1q: usize,
    pub total_2q: usize,
    /// Two-qubit gates in one basis change; it appears twice in the decoder.
    pub basis_change_2q: usize,
    /// Doubly-controlled blocks in the decoder, five two-qubit gates each.
    pub ccu_blocks: usize,
    pub formula_enc_2q: usize,
    pub formula_enc_1q: usize,
    pub formula_dec_2q: usize,
    pub formula_total_2q: usize,
    pub enc_matches_formula: bool,
    pub dec_matches_formula: bool,
    pub total_within_bound: bool,
}

pub fn gate_count_report(n: usize) -> Result<GateCountReport> {
    gate_count_report_for(Variant::Standard, n)
}

pub fn gate_count_report_for(variant: Variant, n: usize) -> Result<GateCountReport> {
    if n < 2 {
        return Err(Error::InvalidCloneCount { n, min: 2 });
    }
    let alphas = match variant {
        Variant::RotatedX2 => crate::protocol::rotated_variant_coefficients(n),
        _ => AlphaCoefficients::standard(n),
    };
    let enc = compile_encoding_for(variant, n, crate::protocol::PROTOCOL_ANGLE)?.counts();
    let dec = compile_decoding(n, &alphas)?.counts();
    let total_2q = enc.two_qubit + dec.two_qubit;
    let formula_dec_2q = 15 * n + 7;
    let formula_total_2q = 21 * n + 11;
    Ok(GateCountReport {
        n,
        enc_2q: enc.two_qubit,
        enc_1q: enc.one_qubit,
        dec_2q: dec.two_qubit,
        dec_1q: dec.one_qubit,
        total_2q,
        basis_change_2q: basis_change_v_tilde().counts().two_qubit,
        ccu_blocks: 3 * n,
        formula_enc_2q: 4 * n,
        formula_enc_1q: 2 * n + 4,
        formula_dec_2q,
        formula_total_2q,
        enc_matches_formula: enc.two_qubit == 4 * n,
        dec_matches_formula: dec.two_qubit == formula_dec_2q,
        total_within_bound: total_2q <= formula_total_2q,
    })
}

//! The encrypted-cloning protocol: register preparation, the encoding and
//! decoding unitaries, the Alice-to-Bob channel and the protocol variants.

mod decrypt;
mod iterated;
mod run;

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::qstate::{
    bell_state, c64, check_capacity, permute_qubits, DensityOperator, Matrix, Pauli, PauliString, RegisterLayout, Role,
    StateVector, C64, STATE_TOL,
};
use crate::{Error, Result};

pub use decrypt::{
    decrypt, decrypt_from_a, decrypt_with_substitution, reverse_encoding_recovery, DecryptionOutcome,
    EncryptedRegister, KeyHalf,
};
pub use iterated::{iterated_cloning_plan, CloneSlot, EncodingNode, IteratedPlan, TreePosition};
pub use run::{execute_run, Operation, ProtocolRun, RunRecord, StateExport, StepRecord};

/// Angle at which decryption is exact.
pub const PROTOCOL_ANGLE: f64 = FRAC_PI_4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `exp(-it X..X) exp(-it Z..Z)`.
    #[default]
    Standard,
    /// `exp(-it X..X) exp(-it Y..Y)`.
    RotatedX2,
    /// Standard encoding with the data qubit maximally entangled with a
    /// reference qubit (used for coherent-information analysis).
    WithReference,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::RotatedX2 => "rotated-x2",
            Variant::WithReference => "with-reference",
        }
    }

    /// Pauli in the second (rightmost) exponential of the encoder.
    pub fn second_pauli(self) -> Pauli {
        match self {
            Variant::RotatedX2 => Pauli::Y,
            Variant::Standard | Variant::WithReference => Pauli::Z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    pub t: f64,
    pub variant: Variant,
    pub signal_target: usize,
}

impl ProtocolConfig {
    pub fn new(n: usize) -> Self {
        Self { n, t: PROTOCOL_ANGLE, variant: Variant::Standard, signal_target: 1 }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.signal_target = target;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidCloneCount { n: self.n, min: 1 });
        }
        if !(1..=self.n).contains(&self.signal_target) {
            return Err(Error::TargetOutOfRange { target: self.signal_target, n: self.n });
        }
        check_capacity(self.num_qubits())
    }

    pub fn has_reference(&self) -> bool {
        self.variant == Variant::WithReference
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n + 1 + usize::from(self.has_reference())
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::protocol(self.n, self.has_reference())
    }
}

/// Expansion coefficients `c_mu(t)` of the encoder in the basis
/// `Sigma_mu = sigma_mu^{(A)} (x) sigma_mu^{(S_1)} (x) .. (x) sigma_mu^{(S_n)}`.
pub fn encoding_coefficients(variant: Variant, n: usize, t: f64) -> [C64; 4] {
    let (c, s) = (t.cos(), t.sin());
    let cross = c64(0., -c * s);
    let m = (n + 1) as u32;
    match variant {
        Variant::Standard | Variant::WithReference => [c64(c * c, 0.), cross, -c64(0., -1.).powu(m) * (s * s), cross],
        Variant::RotatedX2 => [c64(c * c, 0.), cross, cross, -c64(0., 1.).powu(m) * (s * s)],
    }
}

/// Decoder phases `alpha_mu`, all unimodular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaCoefficients(pub [C64; 4]);

impl AlphaCoefficients {
    /// `alpha_0 = 1, alpha_1 = alpha_3 = i, alpha_2 = -i^(n+1)`.
    pub fn standard(n: usize) -> Self {
        let i = c64(0., 1.);
        Self([c64(1., 0.), i, -i.powu((n + 1) as u32), i])
    }

    /// Coefficients matching an encoder at angle `t`: `alpha_mu = 1/(2 c_mu(t))`.
    /// Only defined where every `|c_mu(t)| = 1/2`, i.e. `t = pi/4 + m pi/2`.
    pub fn for_angle(variant: Variant, n: usize, t: f64) -> Result<Self> {
        let c = encoding_coefficients(variant, n, t);
        if c.iter().any(|cm| (cm.norm() - 0.5).abs() > 1e-9) {
            return Err(Error::UnsupportedAngle(t));
        }
        Ok(Self(c.map(|cm| c64(1., 0.) / (cm * 2.0))))
    }

    pub fn get(&self, mu: usize) -> C64 {
        self.0[mu]
    }

    pub fn is_unimodular(&self) -> bool {
        self.0.iter().all(|a| (a.norm() - 1.0).abs() < 1e-12)
    }
}

/// `alpha_0 = 1, alpha_1 = alpha_2 = i, alpha_3 = -(-i)^(n+1)`, the decoder
/// phases for the encoder whose second factor uses `Y` instead of `Z`.
pub fn rotated_variant_coefficients(n: usize) -> AlphaCoefficients {
    let i = c64(0., 1.);
    AlphaCoefficients([c64(1., 0.), i, i, -(-i).powu((n + 1) as u32)])
}

/// Pauli strings `Sigma_mu` over `m` consecutive local qubits.
pub fn sigma_string(mu: usize, m: usize) -> PauliString {
    PauliString::uniform(Pauli::from_index(mu), 0..m)
}

/// `exp(-it X^{(n+1)}) exp(-it P^{(n+1)})` on local qubits `[A, S_1, .., S_n]`,
/// with `P = Z` (standard) or `Y` (rotated).
pub fn encoding_unitary_for(variant: Variant, n: usize, t: f64) -> Result<Matrix> {
    if n < 1 {
        return Err(Error::InvalidCloneCount { n, min: 1 });
    }
    let m = n + 1;
    check_capacity(m)?;
    let xs = PauliString::uniform(Pauli::X, 0..m).exp_neg_i(t, m)?;
    let second = PauliString::uniform(variant.second_pauli(), 0..m).exp_neg_i(t, m)?;
    Ok(xs * second)
}

/// Standard encoder `exp(-it X..X) exp(-it Z..Z)` on `[A, S_1, .., S_n]`.
pub fn encoding_unitary(n: usize, t: f64) -> Result<Matrix> {
    encoding_unitary_for(Variant::Standard, n, t)
}

/// Bell states `|phi_mu> = (sigma_mu (x) I)|phi>` as 4-vectors, signal qubit
/// on local bit 0.
pub fn bell_basis() -> [[C64; 4]; 4] {
    let bell = bell_state(Role::Signal(1), Role::Noise(1));
    let mut out = [[c64(0., 0.); 4]; 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        let sigma = Pauli::from_index(mu).matrix();
        let v = bell.apply_unitary(&sigma, &[0]).expect("valid single-qubit gate");
        slot.copy_from_slice(v.amplitudes());
    }
    out
}

/// `|phi_mu><phi_mu|` on (signal, noise).
pub fn bell_projector(mu: usize) -> Matrix {
    let v = bell_basis()[mu];
    Matrix::from_fn(4, 4, |r, c| v[r] * v[c].conj())
}

/// Decoder core on local qubits `[S_t, N_t, k_1, .., k_m]`:
/// `sum_mu alpha_mu |phi_mu><phi_mu| (x) K_1(mu) (x) .. (x) K_m(mu)` where each
/// key half contributes `sigma_mu^T` (noise qubit) or `sigma_mu` (signal
/// qubit standing in for a lost noise qubit).
pub fn bell_controlled_decoder(alphas: &AlphaCoefficients, keys: &[KeyHalf]) -> Matrix {
    let dim = 1usize << (keys.len() + 2);
    let mut u = Matrix::zeros(dim, dim);
    for mu in 0..4 {
        let pauli = Pauli::from_index(mu);
        let mut term = bell_projector(mu);
        for key in keys {
            let factor = match key {
                KeyHalf::Noise => {
                    let (sign, p) = pauli.transpose();
                    p.matrix() * sign
                }
                KeyHalf::Signal => pauli.matrix(),
            };
            term = factor.kronecker(&term);
        }
        u += term * alphas.get(mu);
    }
    u
}

/// Decoder on local qubits `[S_target, N_1, .., N_n]`. For `n = 1` this is
/// `sum_mu alpha_mu |phi_mu><phi_mu|`. Other targets are obtained from the
/// target-1 form by conjugating with the qubit permutation exchanging the
/// roles of `N_1` and `N_target`.
pub fn decoding_unitary(n: usize, alphas: &AlphaCoefficients, target: usize) -> Result<Matrix> {
    if n < 1 {
        return Err(Error::InvalidCloneCount { n, min: 1 });
    }
    if !(1..=n).contains(&target) {
        return Err(Error::TargetOutOfRange { target, n });
    }
    check_capacity(n + 1)?;
    let base = bell_controlled_decoder(alphas, &vec![KeyHalf::Noise; n - 1]);
    if target == 1 {
        return Ok(base);
    }
    // local qubit `target` (N_target) <-> local qubit 1 (N_1)
    let mut perm: Vec<usize> = (0..=n).collect();
    perm.swap(1, target);
    Ok(permute_qubits(&base, &perm))
}

/// `|psi>_A (x) phi_{S_1 N_1} (x) .. (x) phi_{S_n N_n}`, or for the
/// reference variant `phi_{R A} (x) ..` (in which case `psi` is not used).
pub fn prepare_initial(config: &ProtocolConfig, psi: &StateVector) -> Result<StateVector> {
    config.validate()?;
    if psi.num_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: psi.dim() });
    }
    if (psi.norm_sqr() - 1.0).abs() > STATE_TOL {
        return Err(Error::Unnormalized { norm_sqr: psi.norm_sqr() });
    }
    let mut state = if config.has_reference() {
        bell_state(Role::Reference, Role::Data)
    } else {
        psi.clone().relabel(RegisterLayout::single_data())?
    };
    for i in 1..=config.n {
        state = state.tensor(&bell_state(Role::Signal(i), Role::Noise(i)))?;
    }
    Ok(state)
}

/// Physical qubits `[A, S_1, .., S_n]` of a protocol layout.
pub(crate) fn encoder_qubits(layout: &RegisterLayout, n: usize) -> Result<Vec<usize>> {
    let mut roles = vec![Role::Data];
    roles.extend((1..=n).map(Role::Signal));
    layout.indices_of(&roles)
}

/// Applies the configured encoder to a prepared register.
pub fn encode(config: &ProtocolConfig, prepared: &StateVector) -> Result<StateVector> {
    config.validate()?;
    if prepared.layout() != &config.layout() {
        return Err(Error::MismatchedRegister { n: config.n });
    }
    let u = encoding_unitary_for(config.variant, config.n, config.t)?;
    let targets = encoder_qubits(prepared.layout(), config.n)?;
    prepared.apply_unitary(&u, &targets)
}

/// The channel from `A` to the kept roles: prepare, encode, trace out the rest.
pub fn run_channel(config: &ProtocolConfig, psi: &StateVector, keep: &[Role]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let encoded = encode(config, &prepare_initial(config, psi)?)?;
    let qubits = encoded.layout().indices_of(keep)?;
    encoded.partial_trace(&qubits)
}

/// `(1/4) sum_mu (|phi_mu><phi_mu|)^{(x) pairs}`, the reduced state of any
/// `pairs` signal/noise pairs after encoding. Local ordering `S, N, S, N, ..`.
pub fn erased_pairs_state(pairs: usize) -> Matrix {
    let dim = 1usize << (2 * pairs);
    let mut out = Matrix::zeros(dim, dim);
    for mu in 0..4 {
        let p = bell_projector(mu);
        let mut term = Matrix::from_element(1, 1, c64(1., 0.));
        for _ in 0..pairs {
            term = p.kronecker(&term);
        }
        out += term;
    }
    out * c64(0.25, 0.)
}

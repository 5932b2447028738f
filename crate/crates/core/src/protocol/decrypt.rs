use super::{
    bell_controlled_decoder, decoding_unitary, encode, encoder_qubits, encoding_unitary_for, prepare_initial,
    AlphaCoefficients, ProtocolConfig, Variant,
};
use crate::qstate::{bell_state, dagger, DensityOperator, Role, StateVector};
use crate::{Error, Result};

/// Which half of a non-target pair a decoder uses as key material.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyHalf {
    /// The noise qubit, acted on by `sigma_mu^T`.
    Noise,
    /// The signal qubit standing in for its lost partner, acted on by `sigma_mu`.
    Signal,
}

/// Post-encoding global state together with the input it encrypts.
#[derive(Clone, Debug, PartialEq)]
pub struct EncryptedRegister {
    config: ProtocolConfig,
    input: StateVector,
    state: StateVector,
}

impl EncryptedRegister {
    /// Prepares the register for `psi` and applies the configured encoder.
    pub fn encode(config: &ProtocolConfig, psi: &StateVector) -> Result<Self> {
        let state = encode(config, &prepare_initial(config, psi)?)?;
        Ok(Self { config: config.clone(), input: psi.clone(), state })
    }

    /// Wraps an externally produced post-encoding state.
    pub fn from_state(config: &ProtocolConfig, input: &StateVector, state: StateVector) -> Result<Self> {
        config.validate()?;
        if state.layout() != &config.layout() {
            return Err(Error::MismatchedRegister { n: config.n });
        }
        Ok(Self { config: config.clone(), input: input.clone(), state })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn input(&self) -> &StateVector {
        &self.input
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn decrypt(&self, target: usize) -> Result<DecryptionOutcome> {
        decrypt(self, target)
    }

    pub fn decrypt_with_substitution(&self, lost: &[Role], target: usize) -> Result<DecryptionOutcome> {
        decrypt_with_substitution(self, lost, target)
    }

    pub fn decrypt_from_a(&self) -> Result<DecryptionOutcome> {
        decrypt_from_a(self)
    }

    pub fn reverse_encoding_recovery(&self, lost: &[Role]) -> Result<DecryptionOutcome> {
        reverse_encoding_recovery(self, lost)
    }

    fn alphas(&self) -> Result<AlphaCoefficients> {
        let variant = match self.config.variant {
            Variant::WithReference => return Err(Error::UnsupportedVariant(Variant::WithReference.name())),
            v => v,
        };
        AlphaCoefficients::for_angle(variant, self.config.n, self.config.t)
    }

    fn outcome(&self, state: StateVector, role: Role) -> Result<DecryptionOutcome> {
        let qubit = state.layout().index_of(role)?;
        let recovered = state.partial_trace(&[qubit])?;
        let fidelity_vs_input = recovered.fidelity_pure(&self.input)?;
        Ok(DecryptionOutcome {
            target_role: role,
            target_qubit: qubit,
            recovered,
            fidelity_vs_input,
            fully_encrypted: self.config.n >= 2,
            state,
        })
    }
}

/// Result of a decryption: the recovered qubit, its fidelity with the
/// original input, and the full post-decryption state for residual checks.
#[derive(Clone, Debug)]
pub struct DecryptionOutcome {
    pub target_role: Role,
    pub target_qubit: usize,
    pub fidelity_vs_input: f64,
    /// `false` for `n = 1`, where the single signal qubit leaks information
    /// about the input before decryption.
    pub fully_encrypted: bool,
    pub state: StateVector,
    recovered: DensityOperator,
}

impl DecryptionOutcome {
    pub fn recovered_state(&self) -> &DensityOperator {
        &self.recovered
    }

    /// Reduced state of every qubit except the recovered one.
    pub fn residual(&self) -> Result<DensityOperator> {
        let keep: Vec<usize> = (0..self.state.num_qubits()).filter(|&q| q != self.target_qubit).collect();
        self.state.partial_trace(&keep)
    }

    /// Reduced state on the given roles, in that order.
    pub fn residual_on(&self, roles: &[Role]) -> Result<DensityOperator> {
        let keep = self.state.layout().indices_of(roles)?;
        self.state.partial_trace(&keep)
    }

    /// Fidelity of a qubit pair with `(|00> + |11>)/sqrt(2)`.
    pub fn pair_fidelity(&self, first: Role, second: Role) -> Result<f64> {
        self.residual_on(&[first, second])?.fidelity_pure(&bell_state(first, second))
    }
}

fn check_target(config: &ProtocolConfig, target: usize) -> Result<()> {
    if !(1..=config.n).contains(&target) {
        return Err(Error::TargetOutOfRange { target, n: config.n });
    }
    Ok(())
}

/// Decrypts signal qubit `target` with the full key `N_1..N_n`.
pub fn decrypt(register: &EncryptedRegister, target: usize) -> Result<DecryptionOutcome> {
    let config = register.config();
    check_target(config, target)?;
    let alphas = register.alphas()?;
    let u = decoding_unitary(config.n, &alphas, target)?;
    let mut roles = vec![Role::Signal(target)];
    roles.extend((1..=config.n).map(Role::Noise));
    let qubits = register.state.layout().indices_of(&roles)?;
    let state = register.state.apply_unitary(&u, &qubits)?;
    register.outcome(state, Role::Signal(target))
}

/// Decrypts `target` when some key qubits are gone: a lost `N_j` is
/// replaced by its partner `S_j`. `lost` may name signal or noise roles.
pub fn decrypt_with_substitution(
    register: &EncryptedRegister,
    lost: &[Role],
    target: usize,
) -> Result<DecryptionOutcome> {
    let config = register.config();
    check_target(config, target)?;
    if lost.contains(&Role::Signal(target)) {
        return Err(Error::QubitLost(Role::Signal(target)));
    }
    if lost.contains(&Role::Noise(target)) {
        return Err(Error::TargetKeyMissing(target));
    }
    let alphas = register.alphas()?;
    let mut roles = vec![Role::Signal(target), Role::Noise(target)];
    let mut halves = Vec::with_capacity(config.n - 1);
    for j in (1..=config.n).filter(|&j| j != target) {
        let noise_lost = lost.contains(&Role::Noise(j));
        if noise_lost && lost.contains(&Role::Signal(j)) {
            return Err(Error::PairErased(j));
        }
        if noise_lost {
            roles.push(Role::Signal(j));
            halves.push(KeyHalf::Signal);
        } else {
            roles.push(Role::Noise(j));
            halves.push(KeyHalf::Noise);
        }
    }
    let u = bell_controlled_decoder(&alphas, &halves);
    let qubits = register.state.layout().indices_of(&roles)?;
    let state = register.state.apply_unitary(&u, &qubits)?;
    register.outcome(state, Role::Signal(target))
}

/// Recovers the input on `A` itself by undoing the encoder form on
/// `(A, N_1..N_n)`. Established for even `n` only.
pub fn decrypt_from_a(register: &EncryptedRegister) -> Result<DecryptionOutcome> {
    let config = register.config();
    if config.n % 2 == 1 {
        return Err(Error::OddCloneCount(config.n));
    }
    if config.variant == Variant::WithReference {
        return Err(Error::UnsupportedVariant(Variant::WithReference.name()));
    }
    let u = encoding_unitary_for(config.variant, config.n, config.t)?;
    let mut roles = vec![Role::Data];
    roles.extend((1..=config.n).map(Role::Noise));
    let qubits = register.state.layout().indices_of(&roles)?;
    let state = register.state.apply_unitary(&dagger(&u), &qubits)?;
    register.outcome(state, Role::Data)
}

/// Runs the encoder backwards on `A, S_1..S_n`; needs none of the noise
/// qubits but every signal qubit.
pub fn reverse_encoding_recovery(register: &EncryptedRegister, lost: &[Role]) -> Result<DecryptionOutcome> {
    let config = register.config();
    if let Some(role) = lost.iter().find(|r| matches!(r, Role::Data | Role::Signal(_))) {
        return Err(Error::QubitLost(*role));
    }
    if config.variant == Variant::WithReference {
        return Err(Error::UnsupportedVariant(Variant::WithReference.name()));
    }
    let u = encoding_unitary_for(config.variant, config.n, config.t)?;
    let qubits = encoder_qubits(register.state.layout(), config.n)?;
    let state = register.state.apply_unitary(&dagger(&u), &qubits)?;
    register.outcome(state, Role::Data)
}

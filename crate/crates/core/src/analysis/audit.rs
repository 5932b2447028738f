use serde::Serialize;

use crate::protocol::{erased_pairs_state, EncryptedRegister, ProtocolConfig};
use crate::qstate::{c64, identity, DensityOperator, Role, StateVector, STATE_TOL};
use crate::{Error, Result};

/// What a subsystem check asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Reduced state equals `I/2` for every input.
    MaximallyMixed,
    /// Reduced state is the same for every input.
    InputIndependent,
    /// Reduced state equals the erased-pair mixture for every input.
    ErasedPairs,
    /// The subsystem recovers the input with unit fidelity.
    Recoverable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsystemCheck {
    pub claim: ClaimKind,
    pub roles: Vec<Role>,
    /// Max entry deviation, max trace distance or `1 - min fidelity`,
    /// depending on the claim.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SubsystemCheck {
    fn new(claim: ClaimKind, roles: Vec<Role>, value: f64) -> Self {
        Self { claim, roles, value, tolerance: STATE_TOL, pass: value < STATE_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub num_inputs: usize,
    /// `false` for `n = 1`, where the lone signal qubit leaks the input.
    pub fully_encrypted: bool,
    pub max_marginal_deviation: f64,
    pub max_independence_distance: f64,
    pub checks: Vec<SubsystemCheck>,
    pub all_pass: bool,
}

impl AuditReport {
    pub fn failing(&self) -> impl Iterator<Item = &SubsystemCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn reduced_states(registers: &[EncryptedRegister], roles: &[Role]) -> Result<Vec<DensityOperator>> {
    registers
        .iter()
        .map(|r| {
            let q = r.state().layout().indices_of(roles)?;
            r.state().partial_trace(&q)
        })
        .collect()
}

/// Largest pairwise trace distance within a set of states.
fn spread(states: &[DensityOperator]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            worst = worst.max(a.trace_distance(b)?);
        }
    }
    Ok(worst)
}

/// Sets made of one full signal/noise pair plus one half of every other
/// pair. Each of them can decrypt, by substitution where needed.
pub fn authorized_sets(n: usize) -> Vec<Vec<Role>> {
    let mut sets = Vec::new();
    for full in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|&j| j != full).collect();
        for mask in 0..(1usize << others.len()) {
            let mut set = vec![Role::Signal(full), Role::Noise(full)];
            for (bit, &j) in others.iter().enumerate() {
                set.push(if mask >> bit & 1 == 1 { Role::Signal(j) } else { Role::Noise(j) });
            }
            sets.push(set);
        }
    }
    sets
}

/// All roles of the standard register not in `set`.
pub fn complement(n: usize, set: &[Role]) -> Vec<Role> {
    ProtocolConfig::new(n).layout().roles().iter().copied().filter(|r| !set.contains(r)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccessStructureReport {
    pub n: usize,
    pub authorized: Vec<SubsystemCheck>,
    pub unauthorized: Vec<SubsystemCheck>,
    pub all_pass: bool,
}

fn encode_all(n: usize, psi_set: &[StateVector]) -> Result<Vec<EncryptedRegister>> {
    if psi_set.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let config = ProtocolConfig::new(n);
    psi_set.iter().map(|psi| EncryptedRegister::encode(&config, psi)).collect()
}

/// Every authorized set decrypts its full pair; the complement of every
/// authorized set sees the same state for every input.
pub fn access_structure(n: usize, psi_set: &[StateVector]) -> Result<AccessStructureReport> {
    let registers = encode_all(n, psi_set)?;
    let mut authorized = Vec::new();
    let mut unauthorized = Vec::new();
    for set in authorized_sets(n) {
        let Role::Signal(target) = set[0] else { unreachable!("sets start with their full pair") };
        let lost: Vec<Role> = complement(n, &set).into_iter().filter(|r| *r != Role::Data).collect();
        let mut worst = 0.0f64;
        for reg in &registers {
            let out = reg.decrypt_with_substitution(&lost, target)?;
            worst = worst.max(1.0 - out.fidelity_vs_input);
        }
        let rest = complement(n, &set);
        let distance = spread(&reduced_states(&registers, &rest)?)?;
        authorized.push(SubsystemCheck::new(ClaimKind::Recoverable, set, worst.max(0.0)));
        unauthorized.push(SubsystemCheck::new(ClaimKind::InputIndependent, rest, distance));
    }
    let all_pass = authorized.iter().chain(&unauthorized).all(|c| c.pass);
    Ok(AccessStructureReport { n, authorized, unauthorized, all_pass })
}

/// Checks that no input information sits in `A`, in any single signal
/// qubit, in the key, in any `n - 1` pairs, or in the complement of any
/// authorized set. For `n = 1` the signal check fails, as expected.
pub fn encryption_audit(n: usize, psi_set: &[StateVector]) -> Result<AuditReport> {
    let registers = encode_all(n, psi_set)?;
    let half = identity(2) * c64(0.5, 0.);
    let mut checks = Vec::new();

    let mut singles = vec![Role::Data];
    singles.extend((1..=n).map(Role::Signal));
    for role in singles {
        let states = reduced_states(&registers, &[role])?;
        let dev = states.iter().map(|s| s.max_deviation(&half)).fold(0.0, f64::max);
        checks.push(SubsystemCheck::new(ClaimKind::MaximallyMixed, vec![role], dev));
    }

    let noise: Vec<Role> = (1..=n).map(Role::Noise).collect();
    checks.push(SubsystemCheck::new(
        ClaimKind::InputIndependent,
        noise.clone(),
        spread(&reduced_states(&registers, &noise)?)?,
    ));

    if n >= 2 {
        let expected = erased_pairs_state(n - 1);
        for dropped in 1..=n {
            let roles: Vec<Role> =
                (1..=n).filter(|&j| j != dropped).flat_map(|j| [Role::Signal(j), Role::Noise(j)]).collect();
            let states = reduced_states(&registers, &roles)?;
            let dev = states.iter().map(|s| s.max_deviation(&expected)).fold(0.0, f64::max);
            checks.push(SubsystemCheck::new(ClaimKind::ErasedPairs, roles, dev));
        }
        for set in authorized_sets(n) {
            let rest = complement(n, &set);
            let distance = spread(&reduced_states(&registers, &rest)?)?;
            checks.push(SubsystemCheck::new(ClaimKind::InputIndependent, rest, distance));
        }
    }

    let max_marginal_deviation =
        checks.iter().filter(|c| c.claim == ClaimKind::MaximallyMixed).map(|c| c.value).fold(0.0, f64::max);
    let max_independence_distance =
        checks.iter().filter(|c| c.claim == ClaimKind::InputIndependent).map(|c| c.value).fold(0.0, f64::max);
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(AuditReport {
        n,
        num_inputs: psi_set.len(),
        fully_encrypted: n >= 2,
        max_marginal_deviation,
        max_independence_distance,
        checks,
        all_pass,
    })
}

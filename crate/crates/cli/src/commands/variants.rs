use anyhow::Result;
use qclone_core::protocol::{EncryptedRegister, ProtocolConfig, Variant};
use qclone_core::qstate::{Role, STATE_TOL};
use qclone_core::Error;
use serde::Serialize;

use crate::input::InputState;

#[derive(Debug, Serialize)]
pub struct SubstitutionCase {
    pub lost: Vec<Role>,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FromAStatus {
    Recovered,
    /// Odd `n` is rejected; that is the expected outcome.
    Rejected,
}

#[derive(Debug, Serialize)]
pub struct FromACase {
    pub status: FromAStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ReverseCase {
    pub fidelity: f64,
    pub pairs_restored: bool,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct RotatedCase {
    pub target: usize,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VariantsReport {
    pub command: &'static str,
    pub n: usize,
    pub input: InputState,
    pub substitution: Vec<SubstitutionCase>,
    pub decrypt_from_a: FromACase,
    pub reverse_encoding: ReverseCase,
    pub rotated: Vec<RotatedCase>,
    pub pass: bool,
}

fn good(fidelity: f64) -> bool {
    fidelity >= 1.0 - STATE_TOL
}

pub fn run(n: usize, input: InputState) -> Result<VariantsReport> {
    let config = ProtocolConfig::new(n);
    let register = EncryptedRegister::encode(&config, &input.state)?;

    // every non-empty set of lost key qubits other than the target's own
    let others: Vec<Role> = (2..=n).map(Role::Noise).collect();
    let mut substitution = Vec::new();
    for mask in 1..(1usize << others.len()) {
        let lost: Vec<Role> = others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| *r).collect();
        let fidelity = register.decrypt_with_substitution(&lost, 1)?.fidelity_vs_input;
        substitution.push(SubstitutionCase { lost, fidelity, pass: good(fidelity) });
    }

    let decrypt_from_a = match register.decrypt_from_a() {
        Ok(out) => FromACase {
            status: FromAStatus::Recovered,
            fidelity: Some(out.fidelity_vs_input),
            pass: good(out.fidelity_vs_input),
        },
        Err(Error::OddCloneCount(_)) => FromACase { status: FromAStatus::Rejected, fidelity: None, pass: n % 2 == 1 },
        Err(e) => return Err(e.into()),
    };

    let lost: Vec<Role> = (1..=n).map(Role::Noise).collect();
    let reverse = register.reverse_encoding_recovery(&lost)?;
    let pairs_restored = (1..=n)
        .map(|i| reverse.pair_fidelity(Role::Signal(i), Role::Noise(i)))
        .collect::<qclone_core::Result<Vec<f64>>>()?
        .into_iter()
        .all(good);
    let reverse_encoding = ReverseCase {
        fidelity: reverse.fidelity_vs_input,
        pairs_restored,
        pass: good(reverse.fidelity_vs_input) && pairs_restored,
    };

    let rotated_register = EncryptedRegister::encode(&config.clone().with_variant(Variant::RotatedX2), &input.state)?;
    let rotated = (1..=n)
        .map(|target| {
            let fidelity = rotated_register.decrypt(target)?.fidelity_vs_input;
            Ok(RotatedCase { target, fidelity, pass: good(fidelity) })
        })
        .collect::<Result<Vec<_>>>()?;

    let pass = substitution.iter().all(|c| c.pass)
        && decrypt_from_a.pass
        && reverse_encoding.pass
        && rotated.iter().all(|c| c.pass);
    Ok(VariantsReport { command: "variants", n, input, substitution, decrypt_from_a, reverse_encoding, rotated, pass })
}

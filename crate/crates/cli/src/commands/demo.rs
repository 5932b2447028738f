use anyhow::Result;
use qclone_core::protocol::{run_channel, EncryptedRegister, ProtocolConfig, Variant};
use qclone_core::qstate::{c64, identity, Role, StateVector, STATE_TOL};
use serde::Serialize;

use crate::input::InputState;

#[derive(Debug, Serialize)]
pub struct MarginalCheck {
    pub role: Role,
    /// Largest entry of `|rho - I/2|`.
    pub deviation_from_mixed: f64,
    pub mixed: bool,
}

#[derive(Debug, Serialize)]
pub struct TargetDecryption {
    pub target: usize,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct KeyConsumption {
    pub target: usize,
    /// Trace distance between the residuals left by the input and by its
    /// orthogonal state; the recovered qubit is excluded.
    pub trace_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub command: &'static str,
    pub n: usize,
    pub t: f64,
    pub variant: Variant,
    pub input: InputState,
    pub fully_encrypted: bool,
    pub marginals: Vec<MarginalCheck>,
    pub decryptions: Vec<TargetDecryption>,
    pub key_consumption: Vec<KeyConsumption>,
    pub pass: bool,
}

fn residual_distance(config: &ProtocolConfig, a: &StateVector, b: &StateVector, target: usize) -> Result<f64> {
    let n = config.n;
    let mut roles = vec![Role::Data];
    roles.extend((1..=n).filter(|&j| j != target).map(Role::Signal));
    roles.extend((1..=n).map(Role::Noise));
    let residual = |psi: &StateVector| -> Result<_> {
        let out = EncryptedRegister::encode(config, psi)?.decrypt(target)?;
        Ok(out.residual_on(&roles)?)
    };
    Ok(residual(a)?.trace_distance(&residual(b)?)?)
}

pub fn run(config: &ProtocolConfig, input: InputState) -> Result<DemoReport> {
    config.validate()?;
    let n = config.n;
    let half = identity(2) * c64(0.5, 0.);
    let mut marginals = Vec::new();
    for role in std::iter::once(Role::Data).chain((1..=n).map(Role::Signal)) {
        let deviation = run_channel(config, &input.state, &[role])?.max_deviation(&half);
        marginals.push(MarginalCheck { role, deviation_from_mixed: deviation, mixed: deviation < STATE_TOL });
    }

    let register = EncryptedRegister::encode(config, &input.state)?;
    let mut decryptions = Vec::new();
    let mut key_consumption = Vec::new();
    let orthogonal = input.orthogonal();
    for target in 1..=n {
        let fidelity = register.decrypt(target)?.fidelity_vs_input;
        decryptions.push(TargetDecryption { target, fidelity, pass: fidelity >= 1.0 - STATE_TOL });
        let trace_distance = residual_distance(config, &input.state, &orthogonal, target)?;
        key_consumption.push(KeyConsumption { target, trace_distance, pass: trace_distance < STATE_TOL });
    }

    let fully_encrypted = n >= 2;
    // a single clone is never fully encrypted; that is reported, not failed
    let marginals_ok = !fully_encrypted || marginals.iter().all(|m| m.mixed);
    let pass = marginals_ok && decryptions.iter().all(|d| d.pass) && key_consumption.iter().all(|k| k.pass);
    Ok(DemoReport {
        command: "demo",
        n,
        t: config.t,
        variant: config.variant,
        input,
        fully_encrypted,
        marginals,
        decryptions,
        key_consumption,
        pass,
    })
}

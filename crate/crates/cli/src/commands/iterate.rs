use anyhow::Result;
use qclone_core::protocol::{iterated_cloning_plan, IteratedPlan};
use qclone_core::qstate::{DensityOperator, StateVector};
use serde::Serialize;

use crate::input::InputState;

const CLONE_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct CloneReport {
    pub clone: usize,
    pub qubit: usize,
    pub key_qubits: Vec<usize>,
    pub fidelity: f64,
    /// Trace distance between wrong-key outputs for the input and its
    /// orthogonal state.
    pub wrong_key_trace_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct IterateReport {
    pub command: &'static str,
    pub k: usize,
    pub num_clones: usize,
    pub num_qubits: usize,
    pub num_noise_qubits: usize,
    pub input: InputState,
    pub clones: Vec<CloneReport>,
    pub pass: bool,
}

/// Decrypts `clone` with its deepest key pair swapped for another node's
/// pair at the same level, or for a fresh decoy pair when there is none.
fn wrong_key_output(plan: &IteratedPlan, state: &StateVector, clone: usize) -> Result<DensityOperator> {
    let mut key = plan.key_pairs(clone)?;
    let path = &plan.clones[clone].path;
    let leaf = path[path.len() - 1].0;
    let level = plan.nodes[leaf].level;
    let other = plan.nodes.iter().enumerate().find(|(i, node)| *i != leaf && node.level == level);
    match other {
        Some((_, node)) => {
            let last = key.len() - 1;
            key[last] = node.noise;
            Ok(plan.decrypt_clone_with_key(state, clone, &key)?.1)
        }
        None => {
            let (state, decoy) = plan.with_decoy_pair(state)?;
            Ok(plan.decrypt_clone_with_key(&state, clone, &[decoy])?.1)
        }
    }
}

pub fn run(k: usize, input: InputState) -> Result<IterateReport> {
    let plan = iterated_cloning_plan(k)?;
    let state = plan.execute(&input.state)?;
    let orthogonal = plan.execute(&input.orthogonal())?;
    let mut clones = Vec::with_capacity(plan.num_clones());
    for clone in 0..plan.num_clones() {
        let (_, rho) = plan.decrypt_clone(&state, clone)?;
        let fidelity = rho.fidelity_pure(&input.state)?;
        let wrong = wrong_key_output(&plan, &state, clone)?;
        let wrong_orthogonal = wrong_key_output(&plan, &orthogonal, clone)?;
        let distance = wrong.trace_distance(&wrong_orthogonal)?;
        clones.push(CloneReport {
            clone,
            qubit: plan.clones[clone].qubit,
            key_qubits: plan.key_qubits(clone)?,
            fidelity,
            wrong_key_trace_distance: distance,
            pass: fidelity >= 1.0 - CLONE_TOL && distance < CLONE_TOL,
        });
    }
    let pass = clones.iter().all(|c| c.pass);
    Ok(IterateReport {
        command: "iterate",
        k,
        num_clones: plan.num_clones(),
        num_qubits: plan.num_qubits,
        num_noise_qubits: plan.num_noise_qubits(),
        input,
        clones,
        pass,
    })
}

//! JSON-serializable protocol runs: a configuration, an input qubit and a
//! list of operations applied to the post-encoding register.

use serde::{Deserialize, Serialize};

use super::{EncryptedRegister, ProtocolConfig, Variant, PROTOCOL_ANGLE};
use crate::qstate::{c64, DensityOperator, QubitOrdering, Role, StateVector};
use crate::{Error, Result};

fn default_angle() -> f64 {
    PROTOCOL_ANGLE
}

fn default_ops() -> Vec<Operation> {
    vec![Operation::Decrypt { target: 1 }]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub n: usize,
    #[serde(default = "default_angle")]
    pub t: f64,
    #[serde(default)]
    pub variant: Variant,
    /// Input amplitudes as `[re, im]` pairs.
    pub psi: Vec<[f64; 2]>,
    #[serde(default = "default_ops")]
    pub operations: Vec<Operation>,
}

/// Each operation acts on the freshly encoded register, independently of
/// the others.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    Decrypt {
        target: usize,
    },
    DecryptWithSubstitution {
        lost: Vec<Role>,
        target: usize,
    },
    DecryptFromA,
    ReverseEncoding {
        #[serde(default)]
        lost: Vec<Role>,
    },
    Channel {
        keep: Vec<Role>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateExport {
    pub num_qubits: usize,
    pub ordering: QubitOrdering,
    pub roles: Vec<Role>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateExport {
    fn from(s: &StateVector) -> Self {
        Self {
            num_qubits: s.num_qubits(),
            ordering: s.layout().ordering(),
            roles: s.layout().roles().to_vec(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityExport {
    pub roles: Vec<Role>,
    /// Row-major `[re, im]` entries.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityOperator> for DensityExport {
    fn from(rho: &DensityOperator) -> Self {
        let m = rho.matrix();
        Self {
            roles: rho.layout().roles().to_vec(),
            matrix: (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub operation: Operation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_role: Option<Role>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<DensityExport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub config: ProtocolConfig,
    pub encoded: StateExport,
    pub steps: Vec<StepRecord>,
}

impl ProtocolRun {
    pub fn config(&self) -> ProtocolConfig {
        ProtocolConfig::new(self.n).with_t(self.t).with_variant(self.variant)
    }

    pub fn input(&self) -> Result<StateVector> {
        let [a, b] = match self.psi.as_slice() {
            [a, b] => [*a, *b],
            other => return Err(Error::DimensionMismatch { expected: 2, found: other.len() }),
        };
        StateVector::qubit(c64(a[0], a[1]), c64(b[0], b[1]))
    }
}

/// Encodes the run's input and evaluates every operation against the
/// encoded register.
pub fn execute_run(run: &ProtocolRun) -> Result<RunRecord> {
    let config = run.config();
    let register = EncryptedRegister::encode(&config, &run.input()?)?;
    let mut steps = Vec::with_capacity(run.operations.len());
    for op in &run.operations {
        let outcome = match op {
            Operation::Decrypt { target } => Some(register.decrypt(*target)?),
            Operation::DecryptWithSubstitution { lost, target } => {
                Some(register.decrypt_with_substitution(lost, *target)?)
            }
            Operation::DecryptFromA => Some(register.decrypt_from_a()?),
            Operation::ReverseEncoding { lost } => Some(register.reverse_encoding_recovery(lost)?),
            Operation::Channel { keep } => {
                if keep.is_empty() {
                    return Err(Error::EmptyKeep);
                }
                let qubits = register.state().layout().indices_of(keep)?;
                let rho = register.state().partial_trace(&qubits)?;
                steps.push(StepRecord {
                    operation: op.clone(),
                    fidelity: None,
                    recovered_role: None,
                    reduced: Some((&rho).into()),
                });
                None
            }
        };
        if let Some(out) = outcome {
            steps.push(StepRecord {
                operation: op.clone(),
                fidelity: Some(out.fidelity_vs_input),
                recovered_role: Some(out.target_role),
                reduced: Some(out.recovered_state().into()),
            });
        }
    }
    Ok(RunRecord { config, encoded: register.state().into(), steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_run() {
        let run: ProtocolRun = serde_json::from_str(r#"{"n": 2, "psi": [[1, 0], [0, 0]]}"#).unwrap();
        assert_eq!(run.t, PROTOCOL_ANGLE);
        assert_eq!(run.operations, vec![Operation::Decrypt { target: 1 }]);
        let rec = execute_run(&run).unwrap();
        assert!((rec.steps[0].fidelity.unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(rec.encoded.amplitudes.len(), 32);
    }

    #[test]
    fn operations_round_trip() {
        let run = ProtocolRun {
            n: 2,
            t: PROTOCOL_ANGLE,
            variant: Variant::RotatedX2,
            psi: vec![[0.6, 0.0], [0.0, 0.8]],
            operations: vec![
                Operation::DecryptWithSubstitution { lost: vec![Role::Noise(2)], target: 1 },
                Operation::DecryptFromA,
                Operation::ReverseEncoding { lost: vec![] },
                Operation::Channel { keep: vec![Role::Signal(1)] },
            ],
        };
        let text = serde_json::to_string(&run).unwrap();
        let back: ProtocolRun = serde_json::from_str(&text).unwrap();
        assert_eq!(back, run);
        let rec = execute_run(&run).unwrap();
        assert_eq!(rec.steps.len(), 4);
        for step in &rec.steps[..3] {
            assert!((step.fidelity.unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bad_psi_length() {
        let run: ProtocolRun = serde_json::from_str(r#"{"n": 2, "psi": [[1, 0]]}"#).unwrap();
        assert!(matches!(execute_run(&run), Err(Error::DimensionMismatch { .. })));
    }
}

use thiserror::Error;

use crate::qstate::Role;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max deviation of U^dag U from identity: {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("qubit {0} appears more than once in the target list")]
    DuplicateQubit(usize),

    #[error("qubit {qubit} is out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("register of {requested} qubits exceeds the configured capacity of {capacity}")]
    CapacityExceeded { requested: usize, capacity: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,

    #[error("operator is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Pauli string scalar {0} is not unimodular")]
    NonUnimodular(String),

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("role {0} is not present in the register")]
    MissingRole(Role),

    #[error("clone count must be at least {min}, got {n}")]
    InvalidCloneCount { n: usize, min: usize },

    #[error("signal target {target} is outside 1..={n}")]
    TargetOutOfRange { target: usize, n: usize },

    #[error("register layout does not match a protocol run with n = {n}")]
    MismatchedRegister { n: usize },

    #[error("exact decryption needs t = pi/4 + m*pi/2; got t = {0}")]
    UnsupportedAngle(f64),

    #[error("decrypting from qubit A is only established for even n (got n = {0})")]
    OddCloneCount(usize),

    #[error("operation is not available for the {0} variant")]
    UnsupportedVariant(&'static str),

    #[error("noise qubit N{0} of the target pair is required for decryption")]
    TargetKeyMissing(usize),

    #[error("qubit {0} is required but was marked lost")]
    QubitLost(Role),

    #[error("both halves of pair {0} are lost; recovery is impossible")]
    PairErased(usize),

    #[error("clone index {index} out of range ({count} clones)")]
    CloneOutOfRange { index: usize, count: usize },

    #[error("iteration depth k must be at least 1")]
    InvalidDepth,

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("gate {kind} expects {expected} qubit(s), got {found}")]
    GateArity { kind: &'static str, expected: usize, found: usize },

    #[error("gate {0} cannot be expressed in {1}")]
    UnsupportedGate(&'static str, &'static str),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

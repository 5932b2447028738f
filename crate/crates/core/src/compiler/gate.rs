use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::qstate::{
    apply_to_amplitudes, c64, check_unitary, dagger, identity, Matrix, StateVector, C64, CIRCUIT_TOL, STATE_TOL,
};
use crate::{Error, Result};

/// Largest register [`circuit_to_unitary`] reconstructs densely.
pub const DENSE_RECONSTRUCTION_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    /// `exp(-i theta Z / 2)`.
    Rz(f64),
    /// `diag(1, e^{i phi})`.
    Phase(f64),
    /// Control first, target second.
    Cnot,
    /// `|0><0| (x) I + |1><1| (x) u`, control first.
    ControlledU(Matrix),
    /// Arbitrary 4x4 unitary; the first listed qubit is its local bit 0.
    Generic2q(Matrix),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "PHASE",
            GateKind::Cnot => "CNOT",
            GateKind::ControlledU(_) => "CONTROLLED_U",
            GateKind::Generic2q(_) => "GENERIC_2Q",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::Rz(_) | GateKind::Phase(_) => 1,
            GateKind::Cnot | GateKind::ControlledU(_) | GateKind::Generic2q(_) => 2,
        }
    }

    /// Local matrix; for two-qubit gates the first qubit is bit 0.
    pub fn matrix(&self) -> Matrix {
        let (o, l) = (c64(0., 0.), c64(1., 0.));
        match self {
            GateKind::H => {
                let s = c64(FRAC_1_SQRT_2, 0.);
                Matrix::from_row_slice(2, 2, &[s, s, s, -s])
            }
            GateKind::X => Matrix::from_row_slice(2, 2, &[o, l, l, o]),
            GateKind::Z => Matrix::from_row_slice(2, 2, &[l, o, o, -l]),
            GateKind::Rz(theta) => {
                let h = theta / 2.0;
                Matrix::from_row_slice(2, 2, &[C64::from_polar(1.0, -h), o, o, C64::from_polar(1.0, h)])
            }
            GateKind::Phase(phi) => Matrix::from_row_slice(2, 2, &[l, o, o, C64::from_polar(1.0, *phi)]),
            GateKind::Cnot => controlled(&GateKind::X.matrix()),
            GateKind::ControlledU(u) => controlled(u),
            GateKind::Generic2q(u) => u.clone(),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::Rz(theta) => GateKind::Rz(-theta),
            GateKind::Phase(phi) => GateKind::Phase(-phi),
            GateKind::ControlledU(u) => GateKind::ControlledU(dagger(u)),
            GateKind::Generic2q(u) => GateKind::Generic2q(dagger(u)),
            other => other.clone(),
        }
    }
}

/// Controlled-`u` with the control on local bit 0.
fn controlled(u: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    m[(0, 0)] = c64(1., 0.);
    m[(2, 2)] = c64(1., 0.);
    for r in 0..2 {
        for c in 0..2 {
            // local index = control + 2 * target
            m[(1 + 2 * r, 1 + 2 * c)] = u[(r, c)];
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::GateArity { kind: kind.name(), expected: kind.arity(), found: qubits.len() });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateQubit(qubits[0]));
        }
        if let GateKind::ControlledU(u) | GateKind::Generic2q(u) = &kind {
            let dim = 1 << (kind.arity() - usize::from(matches!(kind, GateKind::ControlledU(_))));
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: u.nrows() });
            }
            check_unitary(u, STATE_TOL)?;
        }
        Ok(Self { kind, qubits: qubits.to_vec() })
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    pub fn inverse(&self) -> Gate {
        Gate { kind: self.kind.inverse(), qubits: self.qubits.clone() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub two_qubit: usize,
}

/// Ordered gate list; the first gate acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct GateCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl GateCircuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn add(&mut self, kind: GateKind, qubits: &[usize]) -> Result<()> {
        self.push(Gate::new(kind, qubits)?)
    }

    /// Appends `other`, whose local qubit `i` lands on `map[i]`.
    pub fn append_mapped(&mut self, other: &GateCircuit, map: &[usize]) -> Result<()> {
        if map.len() != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: other.num_qubits, found: map.len() });
        }
        for g in &other.gates {
            let qubits: Vec<usize> = g.qubits.iter().map(|&q| map[q]).collect();
            self.push(Gate::new(g.kind.clone(), &qubits)?)?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &GateCircuit) -> Result<()> {
        let map: Vec<usize> = (0..other.num_qubits).collect();
        self.append_mapped(other, &map)
    }

    pub fn inverse(&self) -> GateCircuit {
        GateCircuit { num_qubits: self.num_qubits, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// Counted from the gate list on every call.
    pub fn counts(&self) -> GateCounts {
        let two = self.gates.iter().filter(|g| g.is_two_qubit()).count();
        GateCounts { one_qubit: self.gates.len() - two, two_qubit: two }
    }

    /// Runs the circuit on `state`; circuit qubit `i` acts on state qubit `map[i]`.
    pub fn simulate_on(&self, state: &StateVector, map: &[usize]) -> Result<StateVector> {
        if map.len() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: map.len() });
        }
        let mut out = state.clone();
        for g in &self.gates {
            let targets: Vec<usize> = g.qubits.iter().map(|&q| map[q]).collect();
            out.apply_unitary_mut(&g.kind.matrix(), &targets)?;
        }
        Ok(out)
    }
}

/// Dense unitary of a circuit, built column by column with the gate kernel.
pub fn circuit_to_unitary(c: &GateCircuit) -> Result<Matrix> {
    if c.num_qubits > DENSE_RECONSTRUCTION_LIMIT {
        return Err(Error::CapacityExceeded { requested: c.num_qubits, capacity: DENSE_RECONSTRUCTION_LIMIT });
    }
    let dim = 1usize << c.num_qubits;
    let mut u = identity(dim);
    let mats: Vec<Matrix> = c.gates.iter().map(|g| g.kind.matrix()).collect();
    for column in u.as_mut_slice().chunks_mut(dim) {
        for (g, m) in c.gates.iter().zip(&mats) {
            apply_to_amplitudes(column, m, &g.qubits);
        }
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquivalenceResult {
    pub equivalent: bool,
    /// `phase` with `u ~ phase * v`.
    #[serde(serialize_with = "serialize_complex")]
    pub global_phase: C64,
    pub max_entry_deviation: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Compares `u` and `v` modulo a global phase taken from the largest entry
/// of `v^dag u`.
pub fn equivalence_up_to_global_phase(u: &Matrix, v: &Matrix) -> Result<EquivalenceResult> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch { expected: v.nrows(), found: u.nrows() });
    }
    let overlap = v.adjoint() * u;
    let largest = overlap.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(c64(1., 0.));
    let global_phase = if largest.norm() > 0.0 { largest / largest.norm() } else { c64(1., 0.) };
    let max_entry_deviation = u.iter().zip(v.iter()).map(|(a, b)| (a - global_phase * b).norm()).fold(0.0, f64::max);
    Ok(EquivalenceResult { equivalent: max_entry_deviation < CIRCUIT_TOL, global_phase, max_entry_deviation })
}

//! Iterated cloning: every encrypted clone, including `A`, is itself fed
//! into a fresh `n = 2` encryption, giving `3^k` clones after `k` levels.
//!
//! Qubit allocation is breadth-first. `A` is qubit 0; each encoding node
//! takes the next four qubits as `S, N, S, N`. After each level the clones
//! of a parent are ordered `[source, first signal, second signal]`.

use serde::Serialize;

use super::{bell_controlled_decoder, encoding_unitary, AlphaCoefficients, KeyHalf, PROTOCOL_ANGLE};
use crate::qstate::{bell_state, check_capacity, dagger, DensityOperator, RegisterLayout, Role, StateVector};
use crate::{Error, Result};

/// Where a clone sits relative to one encoding node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreePosition {
    /// The node's input qubit, left in place as an encrypted clone.
    Source,
    /// One of the node's two signal qubits (1 or 2).
    Signal(usize),
}

/// One `n = 2` encryption inside the tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingNode {
    pub level: usize,
    pub source: usize,
    pub signals: [usize; 2],
    pub noise: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloneSlot {
    pub qubit: usize,
    /// `(node index, position)` from the root level down to the leaf.
    pub path: Vec<(usize, TreePosition)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IteratedPlan {
    pub k: usize,
    pub num_qubits: usize,
    pub nodes: Vec<EncodingNode>,
    pub clones: Vec<CloneSlot>,
    #[serde(skip)]
    layout: RegisterLayout,
}

/// Builds the allocation for `k` levels of `n = 2` encryptions.
pub fn iterated_cloning_plan(k: usize) -> Result<IteratedPlan> {
    if k == 0 {
        return Err(Error::InvalidDepth);
    }
    // 1 + 4 (1 + 3 + .. + 3^(k-1)) = 2 * 3^k - 1
    let num_qubits = 3usize.checked_pow(k as u32).and_then(|p| p.checked_mul(2)).map(|p| p - 1).unwrap_or(usize::MAX);
    check_capacity(num_qubits)?;

    let mut roles = vec![Role::Data];
    let mut nodes = Vec::new();
    let mut clones = vec![CloneSlot { qubit: 0, path: Vec::new() }];
    for level in 1..=k {
        let mut next = Vec::with_capacity(clones.len() * 3);
        for parent in clones {
            let base = roles.len();
            let index = nodes.len();
            let (s1, n1, s2, n2) = (base, base + 1, base + 2, base + 3);
            roles.extend([
                Role::Signal(2 * index + 1),
                Role::Noise(2 * index + 1),
                Role::Signal(2 * index + 2),
                Role::Noise(2 * index + 2),
            ]);
            nodes.push(EncodingNode { level, source: parent.qubit, signals: [s1, s2], noise: [n1, n2] });
            for (qubit, position) in
                [(parent.qubit, TreePosition::Source), (s1, TreePosition::Signal(1)), (s2, TreePosition::Signal(2))]
            {
                let mut path = parent.path.clone();
                path.push((index, position));
                next.push(CloneSlot { qubit, path });
            }
        }
        clones = next;
    }
    let layout = RegisterLayout::new(roles)?;
    Ok(IteratedPlan { k, num_qubits, nodes, clones, layout })
}

impl IteratedPlan {
    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn num_clones(&self) -> usize {
        self.clones.len()
    }

    pub fn num_noise_qubits(&self) -> usize {
        2 * self.nodes.len()
    }

    fn clone_slot(&self, index: usize) -> Result<&CloneSlot> {
        self.clones.get(index).ok_or(Error::CloneOutOfRange { index, count: self.clones.len() })
    }

    /// The noise pairs on a clone's ancestry path, root level first.
    pub fn key_pairs(&self, clone: usize) -> Result<Vec<[usize; 2]>> {
        Ok(self.clone_slot(clone)?.path.iter().map(|(node, _)| self.nodes[*node].noise).collect())
    }

    /// The `2k` noise qubits that decrypt `clone`.
    pub fn key_qubits(&self, clone: usize) -> Result<Vec<usize>> {
        Ok(self.key_pairs(clone)?.into_iter().flatten().collect())
    }

    /// Prepares `psi` on `A`, all Bell pairs, and runs every encoding node
    /// level by level.
    pub fn execute(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.num_qubits() != 1 {
            return Err(Error::DimensionMismatch { expected: 2, found: psi.dim() });
        }
        let mut state = psi.clone().relabel(RegisterLayout::single_data())?;
        for node in &self.nodes {
            for (s, n) in node.signals.iter().zip(&node.noise) {
                let pair = bell_state(self.layout.roles()[*s], self.layout.roles()[*n]);
                state = state.tensor(&pair)?;
            }
        }
        debug_assert_eq!(state.layout(), &self.layout);
        let u = encoding_unitary(2, PROTOCOL_ANGLE)?;
        for node in &self.nodes {
            state.apply_unitary_mut(&u, &[node.source, node.signals[0], node.signals[1]])?;
        }
        Ok(state)
    }

    /// Appends an independent Bell pair (roles `Q0`, `Q1`) that shares no
    /// history with the tree: a well-formed key of the right shape that
    /// belongs to nobody. Returns the enlarged state and the pair's qubits.
    pub fn with_decoy_pair(&self, state: &StateVector) -> Result<(StateVector, [usize; 2])> {
        let base = state.num_qubits();
        let decoy = state.tensor(&bell_state(Role::Aux(0), Role::Aux(1)))?;
        Ok((decoy, [base, base + 1]))
    }

    /// Decrypts `clone` with its own ancestry key and returns the reduced
    /// state of the qubit that ends up holding the input.
    pub fn decrypt_clone(&self, state: &StateVector, clone: usize) -> Result<(usize, DensityOperator)> {
        let key = self.key_pairs(clone)?;
        self.decrypt_clone_with_key(state, clone, &key)
    }

    /// Decrypts `clone` using `key[level]` as the noise pair at each level of
    /// its path. Passing pairs other than the ancestry pairs models a wrong key.
    pub fn decrypt_clone_with_key(
        &self,
        state: &StateVector,
        clone: usize,
        key: &[[usize; 2]],
    ) -> Result<(usize, DensityOperator)> {
        let slot = self.clone_slot(clone)?;
        if key.len() != slot.path.len() {
            return Err(Error::DimensionMismatch { expected: slot.path.len(), found: key.len() });
        }
        let alphas = AlphaCoefficients::standard(2);
        let undo = dagger(&encoding_unitary(2, PROTOCOL_ANGLE)?);
        // every level hands its content back to the leaf qubit itself
        let mut state = state.clone();
        let holder = slot.qubit;
        for ((_, position), [n1, n2]) in slot.path.iter().zip(key).rev() {
            match position {
                TreePosition::Source => state.apply_unitary_mut(&undo, &[holder, *n1, *n2])?,
                TreePosition::Signal(j) => {
                    let (own, other) = if *j == 1 { (*n1, *n2) } else { (*n2, *n1) };
                    let u = bell_controlled_decoder(&alphas, &[KeyHalf::Noise]);
                    state.apply_unitary_mut(&u, &[holder, own, other])?;
                }
            }
        }
        Ok((holder, state.partial_trace(&[holder])?))
    }
}

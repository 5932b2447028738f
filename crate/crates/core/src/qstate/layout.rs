use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Role a physical qubit plays in an encrypted-cloning register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Reference qubit maximally entangled with the data qubit.
    Reference,
    /// The data qubit `A` whose state is cloned.
    Data,
    /// Signal qubit `S_i`, 1-based.
    Signal(usize),
    /// Noise qubit `N_i`, 1-based.
    Noise(usize),
    /// Unlabelled qubit, 0-based.
    Aux(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Reference => write!(f, "R"),
            Role::Data => write!(f, "A"),
            Role::Signal(i) => write!(f, "S{i}"),
            Role::Noise(i) => write!(f, "N{i}"),
            Role::Aux(i) => write!(f, "Q{i}"),
        }
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLayout(format!("unknown role `{s}`"));
        match s {
            "R" => return Ok(Role::Reference),
            "A" => return Ok(Role::Data),
            _ => {}
        }
        let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let idx: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "S" => Ok(Role::Signal(idx)),
            "N" => Ok(Role::Noise(idx)),
            "Q" => Ok(Role::Aux(idx)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitOrdering {
    /// Qubit 0 is the least significant bit of the amplitude index.
    #[default]
    LittleEndian,
}

/// Maps physical qubit indices to protocol roles. Every index carries exactly
/// one role and no role appears twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    roles: Vec<Role>,
    ordering: QubitOrdering,
}

impl RegisterLayout {
    pub fn new(roles: Vec<Role>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(roles.len());
        for role in &roles {
            if let Role::Signal(0) | Role::Noise(0) = role {
                return Err(Error::InvalidLayout(format!("{role}: signal/noise indices start at 1")));
            }
            if !seen.insert(*role) {
                return Err(Error::InvalidLayout(format!("role {role} assigned twice")));
            }
        }
        Ok(Self { roles, ordering: QubitOrdering::LittleEndian })
    }

    /// `n` unlabelled qubits.
    pub fn anonymous(n: usize) -> Self {
        Self { roles: (0..n).map(Role::Aux).collect(), ordering: QubitOrdering::LittleEndian }
    }

    /// A single data qubit.
    pub fn single_data() -> Self {
        Self { roles: vec![Role::Data], ordering: QubitOrdering::LittleEndian }
    }

    /// Protocol register: `A, S1, N1, .., Sn, Nn`, optionally preceded by the
    /// reference qubit at index 0.
    pub fn protocol(n: usize, with_reference: bool) -> Self {
        let mut roles = Vec::with_capacity(2 * n + 2);
        if with_reference {
            roles.push(Role::Reference);
        }
        roles.push(Role::Data);
        for i in 1..=n {
            roles.push(Role::Signal(i));
            roles.push(Role::Noise(i));
        }
        Self { roles, ordering: QubitOrdering::LittleEndian }
    }

    pub fn num_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn ordering(&self) -> QubitOrdering {
        self.ordering
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, qubit: usize) -> Option<Role> {
        self.roles.get(qubit).copied()
    }

    pub fn index_of(&self, role: Role) -> Result<usize> {
        self.roles.iter().position(|r| *r == role).ok_or(Error::MissingRole(role))
    }

    pub fn indices_of(&self, roles: &[Role]) -> Result<Vec<usize>> {
        roles.iter().map(|r| self.index_of(*r)).collect()
    }

    /// Layout of the sub-register formed by `qubits`, in the given order.
    pub fn subset(&self, qubits: &[usize]) -> Result<Self> {
        let roles = qubits
            .iter()
            .map(|&q| self.role(q).ok_or(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits() }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(roles)
    }

    /// Layout of `self` followed by `other` (other's qubits become the high bits).
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut roles = self.roles.clone();
        roles.extend_from_slice(&other.roles);
        Self::new(roles)
    }
}

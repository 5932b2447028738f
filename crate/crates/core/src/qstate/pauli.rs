use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use super::{c64, Matrix, RegisterLayout, C64};
use crate::{Error, Result};

/// Single-qubit Pauli operator, indexed `0..4` as `I, X, Y, Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(mu: usize) -> Pauli {
        Self::ALL[mu % 4]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> Matrix {
        let (o, l, i) = (c64(0., 0.), c64(1., 0.), c64(0., 1.));
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        Matrix::from_row_slice(2, 2, &entries)
    }

    /// Transpose in the computational basis: `Y^T = -Y`, the rest are symmetric.
    pub fn transpose(self) -> (C64, Pauli) {
        match self {
            Pauli::Y => (c64(-1., 0.), Pauli::Y),
            p => (c64(1., 0.), p),
        }
    }

    /// `self * rhs = phase * result`.
    pub fn product(self, rhs: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        let (one, i) = (c64(1., 0.), c64(0., 1.));
        match (self, rhs) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Scalar times a tensor product of Paulis over qubit indices. Qubits not
/// listed carry the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    scalar: C64,
    factors: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self { scalar: c64(1., 0.), factors: BTreeMap::new() }
    }

    pub fn new(scalar: C64, factors: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        let factors = factors.into_iter().filter(|(_, p)| *p != Pauli::I).collect();
        Self { scalar, factors }
    }

    /// The same Pauli on every listed qubit.
    pub fn uniform(pauli: Pauli, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::new(c64(1., 0.), qubits.into_iter().map(|q| (q, pauli)))
    }

    pub fn scalar(&self) -> C64 {
        self.scalar
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        self.factors.get(&qubit).copied().unwrap_or(Pauli::I)
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.scalar *= s;
        self
    }

    pub fn transpose(&self) -> Self {
        let mut scalar = self.scalar;
        for p in self.factors.values() {
            scalar *= p.transpose().0;
        }
        Self { scalar, factors: self.factors.clone() }
    }

    /// Dense matrix over `num_qubits` qubits (little-endian).
    pub fn to_matrix(&self, num_qubits: usize) -> Matrix {
        let mut m = Matrix::from_element(1, 1, self.scalar);
        for q in 0..num_qubits {
            m = self.factor(q).matrix().kronecker(&m);
        }
        m
    }

    /// `exp(-i theta P)` for a Hermitian involutive string (scalar `+-1`):
    /// `cos(theta) I - i sin(theta) P`.
    pub fn exp_neg_i(&self, theta: f64, num_qubits: usize) -> Result<Matrix> {
        if (self.scalar.im).abs() > 1e-12 || (self.scalar.re.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnimodular(format!("{} (need +-1 for a Hermitian exponent)", self.scalar)));
        }
        let dim = 1usize << num_qubits;
        let p = self.to_matrix(num_qubits);
        Ok(Matrix::identity(dim, dim) * c64(theta.cos(), 0.) + p * c64(0., -theta.sin()))
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut scalar = self.scalar * rhs.scalar;
        let mut factors = self.factors.clone();
        for (&q, &p) in &rhs.factors {
            let (phase, res) = self.factor(q).product(p);
            scalar *= phase;
            if res == Pauli::I {
                factors.remove(&q);
            } else {
                factors.insert(q, res);
            }
        }
        PauliString { scalar, factors }
    }
}

/// Dense unitary of a unimodular Pauli string over the layout's register.
pub fn pauli_string_unitary(p: &PauliString, layout: &RegisterLayout) -> Result<Matrix> {
    if (p.scalar.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnimodular(p.scalar.to_string()));
    }
    if let Some((&q, _)) = p.factors.iter().next_back() {
        if q >= layout.num_qubits() {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: layout.num_qubits() });
        }
    }
    Ok(p.to_matrix(layout.num_qubits()))
}

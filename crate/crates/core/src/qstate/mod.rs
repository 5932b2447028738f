//! Dense statevector and density-matrix engine.
//!
//! Qubit ordering is little-endian throughout: qubit 0 is the least
//! significant bit of an amplitude index. A `k`-qubit operator applied to an
//! ordered target list `[q0, q1, ..]` sees `q0` as its local bit 0.

mod density;
mod layout;
mod pauli;
mod states;
mod statevector;

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub use density::{shannon_entropy_bits, DensityOperator};
pub use layout::{QubitOrdering, RegisterLayout, Role};
pub use pauli::{pauli_string_unitary, Pauli, PauliString};
pub use states::{bell_state, haar_random_qubit, named_qubit, pauli_eigenstates, NAMED_STATES};
pub use statevector::{apply_to_amplitudes, StateVector};

pub type C64 = Complex64;
pub type Matrix = DMatrix<Complex64>;

/// State-level comparisons.
pub const STATE_TOL: f64 = 1e-10;
/// Unitary and matrix equivalence comparisons.
pub const MATRIX_TOL: f64 = 1e-9;
/// Products of many gates.
pub const CIRCUIT_TOL: f64 = 1e-8;

pub const DEFAULT_MAX_QUBITS: usize = 24;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Largest register any statevector may allocate.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

pub fn set_max_qubits(limit: usize) {
    MAX_QUBITS.store(limit, Ordering::Relaxed);
}

pub(crate) fn check_capacity(requested: usize) -> Result<()> {
    let capacity = max_qubits();
    if requested > capacity {
        return Err(Error::CapacityExceeded { requested, capacity });
    }
    Ok(())
}

pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.adjoint()
}

/// `a ⊗ b` in the usual (big-endian) Kronecker convention. Under the
/// little-endian qubit ordering this places `b` on the low qubits.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Max entrywise deviation of `U^dag U` from the identity.
pub fn unitarity_deviation(u: &Matrix) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows()))
}

pub fn check_unitary(u: &Matrix, tol: f64) -> Result<()> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch { expected: u.nrows(), found: u.ncols() });
    }
    let deviation = unitarity_deviation(u);
    if deviation > tol {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

/// Number of qubits `k` with `2^k == dim`.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Reorders the qubits of an operator: local qubit `i` of the result is
/// local qubit `perm[i]` of `m`.
pub fn permute_qubits(m: &Matrix, perm: &[usize]) -> Matrix {
    let k = perm.len();
    let dim = 1usize << k;
    assert_eq!(m.nrows(), dim, "permute_qubits: operator size does not match permutation");
    let map = |idx: usize| -> usize { (0..k).fold(0, |acc, i| acc | (((idx >> i) & 1) << perm[i])) };
    Matrix::from_fn(dim, dim, |r, c| m[(map(r), map(c))])
}

/// Embeds a `k`-qubit operator on `targets` into the full `2^n` space.
/// Intended for small registers and test oracles.
pub fn embed(u: &Matrix, targets: &[usize], num_qubits: usize) -> Matrix {
    let dim = 1usize << num_qubits;
    let mask: usize = targets.iter().map(|&q| 1usize << q).sum();
    let local =
        |idx: usize| -> usize { targets.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((idx >> q) & 1) << i)) };
    Matrix::from_fn(dim, dim, |r, c| if r & !mask != c & !mask { C64::new(0.0, 0.0) } else { u[(local(r), local(c))] })
}

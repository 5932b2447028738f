//! Simulation, verification and circuit compilation for encrypted cloning of
//! qubits.
//!
//! An unknown qubit `A` is imprinted onto `n` signal qubits, each half of a
//! Bell pair whose other half (a noise qubit) is kept as the key. Every
//! signal qubit is locally maximally mixed, yet any single one can be
//! decrypted back into the original state using all noise qubits. Decryption
//! consumes the key.
//!
//! - [`qstate`]: dense statevector / density-matrix engine and Pauli algebra
//! - [`protocol`]: preparation, encoding, decryption and protocol variants
//! - [`analysis`]: coherent information, entropy identities, encryption audits
//! - [`compiler`]: one- and two-qubit gate circuits for encoder and decoder

pub mod analysis;
pub mod compiler;
mod error;
pub mod numfmt;
pub mod protocol;
pub mod qstate;

pub use error::{Error, Result};

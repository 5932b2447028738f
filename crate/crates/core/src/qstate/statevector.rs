use super::{check_capacity, check_unitary, qubits_for_dim, Matrix, RegisterLayout, C64, STATE_TOL};
use crate::{Error, Result};

/// Pure state over a labelled qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    layout: RegisterLayout,
}

impl StateVector {
    /// Builds a state from raw amplitudes; the norm must be 1 within `1e-10`.
    pub fn new(amplitudes: Vec<C64>, layout: RegisterLayout) -> Result<Self> {
        let n = layout.num_qubits();
        check_capacity(n)?;
        if amplitudes.len() != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: amplitudes.len() });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STATE_TOL {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(Self { amplitudes, layout })
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        let n = layout.num_qubits();
        check_capacity(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, layout })
    }

    /// Single data qubit `alpha|0> + beta|1>`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![alpha, beta], RegisterLayout::single_data())
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Same amplitudes under a different labelling of the qubits.
    pub fn relabel(mut self, layout: RegisterLayout) -> Result<Self> {
        if layout.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: layout.num_qubits() });
        }
        self.layout = layout;
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Tensor product; `other` occupies the high qubits of the result.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        check_capacity(layout.num_qubits())?;
        let low = self.dim();
        let mut amplitudes = Vec::with_capacity(low * other.dim());
        for b in &other.amplitudes {
            amplitudes.extend(self.amplitudes.iter().map(|a| a * b));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Applies `u` to the ordered `targets`, identity elsewhere.
    pub fn apply_unitary(&self, u: &Matrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_mut(u, targets)?;
        Ok(out)
    }

    /// In-place variant of [`StateVector::apply_unitary`].
    pub fn apply_unitary_mut(&mut self, u: &Matrix, targets: &[usize]) -> Result<()> {
        validate_targets(u, targets, self.num_qubits())?;
        check_unitary(u, STATE_TOL)?;
        apply_to_amplitudes(&mut self.amplitudes, u, targets);
        Ok(())
    }
}

pub(crate) fn validate_targets(u: &Matrix, targets: &[usize], num_qubits: usize) -> Result<()> {
    let k =
        qubits_for_dim(u.nrows()).ok_or(Error::DimensionMismatch { expected: 1 << targets.len(), found: u.nrows() })?;
    if k != targets.len() || !u.is_square() {
        return Err(Error::DimensionMismatch { expected: 1 << targets.len(), found: u.nrows() });
    }
    let mut seen = 0usize;
    for &q in targets {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Bit-indexed gate kernel. `u` acts on `targets` (local bit `i` is
/// `targets[i]`); the caller guarantees distinct in-range targets and a
/// matching operator size.
pub fn apply_to_amplitudes(amplitudes: &mut [C64], u: &Matrix, targets: &[usize]) {
    let k = targets.len();
    let local_dim = 1usize << k;
    let mask: usize = targets.iter().map(|&q| 1usize << q).sum();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| targets.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((l >> i) & 1) << q)))
        .collect();
    let mut gathered = vec![C64::new(0.0, 0.0); local_dim];
    for base in 0..amplitudes.len() {
        if base & mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amplitudes[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += u[(row, col)] * g;
            }
            amplitudes[base | off] = acc;
        }
    }
}

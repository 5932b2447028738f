use nalgebra::linalg::SymmetricEigen;

use super::{identity, max_abs_diff, Matrix, RegisterLayout, StateVector, C64, STATE_TOL};
use crate::{Error, Result};

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const EIGEN_CLAMP: f64 = 1e-12;
/// Eigenvalues below `-PSD_TOL` make an operator invalid.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace operator over a qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: Matrix,
    layout: RegisterLayout,
}

impl DensityOperator {
    /// Validating constructor (Hermiticity, trace and PSD within `1e-10`).
    pub fn new(matrix: Matrix, layout: RegisterLayout) -> Result<Self> {
        let dim = 1usize << layout.num_qubits();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        let herm_dev = max_abs_diff(&matrix, &matrix.adjoint());
        if herm_dev > STATE_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm_dev:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} != 1")));
        }
        let rho = Self { matrix, layout };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(matrix: Matrix, layout: RegisterLayout) -> Self {
        Self { matrix, layout }
    }

    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let matrix = Matrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj());
        Self { matrix, layout: state.layout().clone() }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(layout: RegisterLayout) -> Self {
        let dim = 1usize << layout.num_qubits();
        let matrix = identity(dim) * C64::new(1.0 / dim as f64, 0.0);
        Self { matrix, layout }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eig: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvector of the largest eigenvalue, when the state is pure within
    /// `1e-10`.
    pub fn pure_state(&self) -> Option<StateVector> {
        if (self.purity() - 1.0).abs() > STATE_TOL {
            return None;
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let (best, _) = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
        let v = eig.eigenvectors.column(best);
        // fix the global phase so the largest component is real positive
        let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
        let phase = pivot.conj() / pivot.norm();
        let amps: Vec<C64> = v.iter().map(|a| a * phase).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::new(amps.into_iter().map(|a| a / norm).collect(), self.layout.clone()).ok()
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let eig = self.eigenvalues();
        if let Some(&min) = eig.first() {
            if min < -PSD_TOL {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(shannon_entropy_bits(&eig))
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let a = psi.amplitudes();
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..a.len() {
            for c in 0..a.len() {
                acc += a[r].conj() * self.matrix[(r, c)] * a[c];
            }
        }
        Ok(acc.re)
    }

    /// `1/2 ||rho - sigma||_1`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = &self.matrix - &other.matrix;
        let eig = SymmetricEigen::new(diff).eigenvalues;
        Ok(0.5 * eig.iter().map(|e| e.abs()).sum::<f64>())
    }

    /// Max entrywise deviation from another operator's matrix.
    pub fn max_deviation(&self, other: &Matrix) -> f64 {
        max_abs_diff(&self.matrix, other)
    }

    /// Tensor product; `other` occupies the high qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self { matrix: other.matrix.kronecker(&self.matrix), layout })
    }

    /// Reduced state on `keep` (local qubit `i` of the result is `keep[i]`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.num_qubits();
        let env = split_register(keep, n)?;
        let keep_off = offsets(keep);
        let env_off = offsets(&env);
        let kd = keep_off.len();
        let mut out = Matrix::zeros(kd, kd);
        for e in &env_off {
            for (r, ro) in keep_off.iter().enumerate() {
                for (c, co) in keep_off.iter().enumerate() {
                    out[(r, c)] += self.matrix[(e | ro, e | co)];
                }
            }
        }
        Ok(Self { matrix: out, layout: self.layout.subset(keep)? })
    }
}

impl StateVector {
    /// Reduced density operator on `keep` (local qubit `i` is `keep[i]`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let n = self.num_qubits();
        let env = split_register(keep, n)?;
        let keep_off = offsets(keep);
        let env_off = offsets(&env);
        let kd = keep_off.len();
        let amps = self.amplitudes();
        let mut out = Matrix::zeros(kd, kd);
        let mut v = vec![C64::new(0.0, 0.0); kd];
        for e in &env_off {
            for (slot, ko) in v.iter_mut().zip(&keep_off) {
                *slot = amps[e | ko];
            }
            for r in 0..kd {
                if v[r] == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..kd {
                    out[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Ok(DensityOperator::from_parts(out, self.layout().subset(keep)?))
    }
}

/// `-sum p log2 p` with eigenvalues at or below the clamp counted as zero.
pub fn shannon_entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities.iter().filter(|&&p| p > EIGEN_CLAMP).map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

/// Validates `keep` and returns the complementary qubits in ascending order.
fn split_register(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut mask = 0usize;
    for &q in keep {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        if mask & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        mask |= 1 << q;
    }
    Ok((0..n).filter(|q| mask & (1 << q) == 0).collect())
}

/// Global index offsets for every assignment of the given qubits.
fn offsets(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|l| qubits.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((l >> i) & 1) << q)))
        .collect()
}

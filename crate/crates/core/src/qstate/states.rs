use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;

use super::{c64, RegisterLayout, Role, StateVector, C64};

/// Names accepted by [`named_qubit`].
pub const NAMED_STATES: [&str; 6] = ["0", "1", "+", "-", "+i", "-i"];

/// `(|00> + |11>)/sqrt(2)` with `first` as qubit 0.
pub fn bell_state(first: Role, second: Role) -> StateVector {
    let s = c64(FRAC_1_SQRT_2, 0.);
    let o = c64(0., 0.);
    StateVector::new(vec![s, o, o, s], RegisterLayout::new(vec![first, second]).expect("distinct roles"))
        .expect("normalized")
}

/// Pauli eigenstates by name: `0, 1, +, -, +i, -i`.
pub fn named_qubit(name: &str) -> Option<StateVector> {
    let s = FRAC_1_SQRT_2;
    let (a, b) = match name {
        "0" => (c64(1., 0.), c64(0., 0.)),
        "1" => (c64(0., 0.), c64(1., 0.)),
        "+" => (c64(s, 0.), c64(s, 0.)),
        "-" => (c64(s, 0.), c64(-s, 0.)),
        "+i" => (c64(s, 0.), c64(0., s)),
        "-i" => (c64(s, 0.), c64(0., -s)),
        _ => return None,
    };
    StateVector::qubit(a, b).ok()
}

/// The six Pauli eigenstates, a tomographically complete input set.
pub fn pauli_eigenstates() -> Vec<StateVector> {
    NAMED_STATES.iter().map(|n| named_qubit(n).expect("known name")).collect()
}

/// Haar-random single-qubit state.
pub fn haar_random_qubit<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    let mut draw = || -> f64 { rng.sample(StandardNormal) };
    let raw = [draw(), draw(), draw(), draw()];
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(raw[0], raw[1]) / norm;
    let b = C64::new(raw[2], raw[3]) / norm;
    StateVector::qubit(a, b).expect("normalized by construction")
}

//! Input-state specifications: a named state, explicit amplitudes, or a
//! Haar-random draw from a seed.

use anyhow::{bail, Context, Result};
use qclone_core::qstate::{c64, haar_random_qubit, named_qubit, StateVector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct InputState {
    /// How the state was chosen, e.g. `named:+i` or `seed:7`.
    pub source: String,
    /// `[re, im]` for the `|0>` and `|1>` amplitudes.
    pub amplitudes: [[f64; 2]; 2],
    #[serde(skip)]
    pub state: StateVector,
}

impl InputState {
    fn new(source: String, state: StateVector) -> Self {
        let a = state.amplitudes();
        let amplitudes = [[a[0].re, a[0].im], [a[1].re, a[1].im]];
        Self { source, amplitudes, state }
    }

    /// The state orthogonal to this one, `(-conj b, conj a)`.
    pub fn orthogonal(&self) -> StateVector {
        let a = self.state.amplitudes();
        StateVector::qubit(-a[1].conj(), a[0].conj()).expect("normalized")
    }
}

/// Resolves `--psi` / `--seed`. With neither, seed 0 is used.
pub fn resolve(psi: Option<&str>, seed: Option<u64>) -> Result<InputState> {
    match (psi, seed) {
        (Some(spec), _) => Ok(InputState::new(source_label(spec), parse_psi(spec)?)),
        (None, seed) => {
            let seed = seed.unwrap_or(0);
            Ok(InputState::new(format!("seed:{seed}"), seeded(seed)))
        }
    }
}

pub fn seeded(seed: u64) -> StateVector {
    haar_random_qubit(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn source_label(spec: &str) -> String {
    if named_qubit(spec.trim()).is_some() {
        format!("named:{}", spec.trim())
    } else {
        "amplitudes".to_string()
    }
}

/// Accepts `0 1 + - +i -i`, a real pair `a,b`, or complex pairs
/// `re:im,re:im`. Amplitudes are normalized; a zero vector is rejected.
pub fn parse_psi(spec: &str) -> Result<StateVector> {
    let spec = spec.trim();
    if let Some(s) = named_qubit(spec) {
        return Ok(s);
    }
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("bad psi spec '{spec}': expected a named state (0, 1, +, -, +i, -i) or two amplitudes");
    }
    let amps = parts.iter().map(|p| parse_amplitude(p)).collect::<Result<Vec<C64>>>()?;
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm < 1e-12 {
        bail!("bad psi spec '{spec}': amplitudes must be finite and not both zero");
    }
    Ok(StateVector::qubit(amps[0] / norm, amps[1] / norm)?)
}

fn parse_amplitude(text: &str) -> Result<C64> {
    let number = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad amplitude '{text}'"));
    match text.split_once(':') {
        Some((re, im)) => Ok(c64(number(re)?, number(im)?)),
        None => Ok(c64(number(text)?, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_and_explicit_agree() {
        let a = parse_psi("+").unwrap();
        let b = parse_psi("1,1").unwrap();
        assert!((a.inner(&b).unwrap().norm() - 1.0).abs() < 1e-15);
        let c = parse_psi("0.6:0, 0:0.8").unwrap();
        assert!((c.amplitudes()[1].im - 0.8).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "2", "0,0", "a,b", "1,2,3", "1:x,0"] {
            assert!(parse_psi(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn orthogonal_state() {
        let input = resolve(None, Some(3)).unwrap();
        assert!(input.state.inner(&input.orthogonal()).unwrap().norm() < 1e-15);
        assert_eq!(input.source, "seed:3");
        assert_eq!(resolve(Some("-i"), None).unwrap().source, "named:-i");
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(seeded(9).amplitudes(), seeded(9).amplitudes());
    }
}

use rayon::prelude::*;
use serde::Serialize;

use crate::numfmt::fmt12;
use crate::protocol::{encode, prepare_initial, ProtocolConfig, Variant};
use crate::qstate::{named_qubit, shannon_entropy_bits, Role};
use crate::{Error, Result};

/// Eigenvalues of the reduced state of one signal/noise pair after encoding
/// at angle `t`: `(cos^4, cos^2 sin^2, sin^4, cos^2 sin^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaSpectrum {
    pub t: f64,
    pub lambda: [f64; 4],
}

impl LambdaSpectrum {
    pub fn new(t: f64) -> Self {
        let (c2, s2) = (t.cos().powi(2), t.sin().powi(2));
        Self { t, lambda: [c2 * c2, c2 * s2, s2 * s2, c2 * s2] }
    }

    /// `-sum lambda log2 lambda`, with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        shannon_entropy_bits(&self.lambda)
    }
}

/// Closed-form coherent information from the reference to the signal and
/// noise qubits, in bits. Independent of `n`.
pub fn coherent_information_formula(t: f64) -> f64 {
    LambdaSpectrum::new(t).entropy() - 1.0
}

/// One point of the coherent-information curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    #[serde(rename = "I_formula")]
    pub i_formula: f64,
    #[serde(rename = "I_simulated")]
    pub i_simulated: f64,
    #[serde(rename = "S_joint")]
    pub s_joint: f64,
    #[serde(rename = "S_marginal")]
    pub s_marginal: f64,
    pub n: usize,
}

impl SweepRow {
    /// `n - 1 + H(lambda)`, the expected marginal entropy.
    pub fn expected_marginal(&self) -> f64 {
        (self.n as f64) - 1.0 + LambdaSpectrum::new(self.t).entropy()
    }
}

/// Builds the reference-entangled register, encodes at `t` and measures
/// `S(S_1 N_1..N_n) - S(R S_1 N_1..N_n)` from the state itself.
pub fn coherent_information_simulated(n: usize, t: f64) -> Result<SweepRow> {
    let config = ProtocolConfig::new(n).with_t(t).with_variant(Variant::WithReference);
    let zero = named_qubit("0").expect("known state");
    let state = encode(&config, &prepare_initial(&config, &zero)?)?;
    let mut output = vec![Role::Signal(1)];
    output.extend((1..=n).map(Role::Noise));
    let mut joint = vec![Role::Reference];
    joint.extend(&output);
    let layout = state.layout();
    let s_marginal = state.partial_trace(&layout.indices_of(&output)?)?.von_neumann_entropy()?;
    let s_joint = state.partial_trace(&layout.indices_of(&joint)?)?.von_neumann_entropy()?;
    Ok(SweepRow {
        t,
        i_formula: coherent_information_formula(t),
        i_simulated: s_marginal - s_joint,
        s_joint,
        s_marginal,
        n,
    })
}

/// `points` uniform angles on `[0, t_max]`, both ends included.
pub fn uniform_grid(points: usize, t_max: f64) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| t_max * i as f64 / (points - 1) as f64).collect(),
    }
}

pub const DEFAULT_SWEEP_POINTS: usize = 101;

/// Default grid: 101 points on `[0, pi]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(DEFAULT_SWEEP_POINTS, std::f64::consts::PI)
}

/// Evaluates the curve on every grid point in parallel. Rows come back
/// sorted by `t`.
pub fn sweep_fig_s1(t_grid: &[f64], n: usize) -> Result<Vec<SweepRow>> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut rows = t_grid.par_iter().map(|&t| coherent_information_simulated(n, t)).collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(rows)
}

pub const SWEEP_CSV_HEADER: &str = "t,I_formula,I_simulated,S_joint,S_marginal,n";

/// CSV with 12 significant digits per value.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.t, r.i_formula, r.i_simulated, r.s_joint, r.s_marginal].map(fmt12);
        out.push_str(&fields.join(","));
        out.push_str(&format!(",{}\n", r.n));
    }
    out
}

/// Largest `|I_formula - I_simulated|` over a sweep.
pub fn max_formula_gap(rows: &[SweepRow]) -> f64 {
    rows.iter().map(|r| (r.i_formula - r.i_simulated).abs()).fold(0.0, f64::max)
}

/// What the simulation says about quantum capacity. Only the one-shot
/// coherent-information lower bound is computed; the regularized limit is not.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacitySummary {
    pub t: f64,
    /// Coherent information at `t`, a lower bound on the capacity to the
    /// signal and noise qubits.
    pub lower_bound: f64,
    /// Exact capacity 1 at the protocol angle, witnessed by the decoder.
    pub exact_at_protocol_angle: f64,
    /// Exact capacity 0 to any single signal qubit: its output is constant.
    pub single_signal: f64,
}

pub fn capacity_summary(t: f64) -> CapacitySummary {
    CapacitySummary {
        t,
        lower_bound: coherent_information_formula(t),
        exact_at_protocol_angle: 1.0,
        single_signal: 0.0,
    }
}

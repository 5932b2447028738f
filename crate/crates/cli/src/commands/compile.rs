use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qclone_core::compiler::{
    circuit_to_unitary, compile_decoding, compile_decoding_n1, compile_encoding_for, equivalence_up_to_global_phase,
    export_circuit, gate_count_report_for, EquivalenceResult, ExportFormat, GateCircuit, GateCountReport,
};
use qclone_core::protocol::{decoding_unitary, encoding_unitary_for, AlphaCoefficients, Variant};
use serde::Serialize;

use crate::output::write_atomic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Enc,
    Dec,
    Both,
}

impl Which {
    fn encoder(self) -> bool {
        self != Which::Dec
    }

    fn decoder(self) -> bool {
        self != Which::Enc
    }
}

#[derive(Debug, Serialize)]
pub struct CircuitSummary {
    pub num_qubits: usize,
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub equivalence: EquivalenceResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct CompileReport {
    pub command: &'static str,
    pub n: usize,
    pub t: f64,
    pub variant: Variant,
    pub format: ExportFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoding: Option<CircuitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoding: Option<CircuitSummary>,
    /// Measured counts next to the reference formulas; needs `n >= 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<GateCountReport>,
    pub pass: bool,
}

pub struct CompileOptions<'a> {
    pub n: usize,
    pub t: f64,
    pub variant: Variant,
    pub format: ExportFormat,
    pub which: Which,
    pub out_dir: Option<&'a Path>,
}

fn summarize(
    circuit: &GateCircuit,
    dense: &qclone_core::qstate::Matrix,
    name: &str,
    opts: &CompileOptions,
) -> Result<CircuitSummary> {
    let equivalence = equivalence_up_to_global_phase(&circuit_to_unitary(circuit)?, dense)?;
    let text = export_circuit(circuit, opts.format)?;
    let file = match opts.out_dir {
        Some(dir) => {
            let path = dir.join(format!("{name}.{}", opts.format.extension()));
            write_atomic(&path, &text)?;
            Some(path)
        }
        None => None,
    };
    let counts = circuit.counts();
    Ok(CircuitSummary {
        num_qubits: circuit.num_qubits(),
        one_qubit: counts.one_qubit,
        two_qubit: counts.two_qubit,
        equivalence,
        file,
    })
}

pub fn run(opts: &CompileOptions) -> Result<CompileReport> {
    let CompileOptions { n, t, variant, .. } = *opts;
    if variant == Variant::WithReference {
        return Err(qclone_core::Error::UnsupportedVariant(variant.name()).into());
    }
    if let Some(dir) = opts.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }

    let encoding = if opts.which.encoder() {
        let circuit = compile_encoding_for(variant, n, t)?;
        Some(summarize(&circuit, &encoding_unitary_for(variant, n, t)?, "encoding", opts)?)
    } else {
        None
    };

    let decoding = if opts.which.decoder() {
        let alphas = AlphaCoefficients::for_angle(variant, n, t)?;
        let circuit = if n == 1 { compile_decoding_n1(&alphas)? } else { compile_decoding(n, &alphas)? };
        Some(summarize(&circuit, &decoding_unitary(n, &alphas, 1)?, "decoding", opts)?)
    } else {
        None
    };

    let counts = if n >= 2 { Some(gate_count_report_for(variant, n)?) } else { None };
    // the decoder formula comparison is reported but does not gate the exit code
    let pass = [&encoding, &decoding].into_iter().flatten().all(|c| c.equivalence.equivalent)
        && counts.as_ref().is_none_or(|c| c.enc_matches_formula && c.total_within_bound);
    Ok(CompileReport { command: "compile", n, t, variant, format: opts.format, encoding, decoding, counts, pass })
}

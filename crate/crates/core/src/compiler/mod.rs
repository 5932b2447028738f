//! Compilation of the encoder and decoder into one- and two-qubit gates,
//! dense reconstruction, equivalence checks and gate accounting.

mod export;
mod gate;
mod synth;

pub use export::{export_circuit, parse_text, u3_decomposition, ExportFormat};
pub use gate::{
    circuit_to_unitary, equivalence_up_to_global_phase, EquivalenceResult, Gate, GateCircuit, GateCounts, GateKind,
    DENSE_RECONSTRUCTION_LIMIT,
};
pub use synth::{
    basis_change_v_tilde, compile_ccu, compile_decoding, compile_decoding_for_target, compile_decoding_n1,
    compile_decoding_on, compile_encoding, compile_encoding_for, gate_count_report, gate_count_report_for,
    principal_sqrt, ControlPattern, GateCountReport,
};

//! Information-theoretic checks: the coherent-information curve (closed
//! form and simulated), entropy identities, and encryption audits.

mod audit;
mod coherent;

pub use audit::{
    access_structure, authorized_sets, complement, encryption_audit, AccessStructureReport, AuditReport, ClaimKind,
    SubsystemCheck,
};
pub use coherent::{
    capacity_summary, coherent_information_formula, coherent_information_simulated, default_grid, max_formula_gap,
    sweep_fig_s1, sweep_to_csv, uniform_grid, CapacitySummary, LambdaSpectrum, SweepRow, DEFAULT_SWEEP_POINTS,
    SWEEP_CSV_HEADER,
};

use anyhow::Result;
use qclone_core::analysis::{access_structure, encryption_audit, AccessStructureReport, AuditReport};
use qclone_core::qstate::pauli_eigenstates;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct AuditOutput {
    pub command: &'static str,
    pub n: usize,
    pub audit: AuditReport,
    /// Absent for `n = 1`, which has no unauthorized proper subsets to speak of.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access_structure: Option<AccessStructureReport>,
    pub pass: bool,
}

pub fn run(n: usize) -> Result<AuditOutput> {
    let inputs = pauli_eigenstates();
    let audit = encryption_audit(n, &inputs)?;
    let access = if n >= 2 { Some(access_structure(n, &inputs)?) } else { None };
    let pass = audit.all_pass && access.as_ref().is_none_or(|a| a.all_pass);
    Ok(AuditOutput { command: "audit", n, audit, access_structure: access, pass })
}

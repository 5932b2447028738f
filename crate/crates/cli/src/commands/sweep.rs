use anyhow::Result;
use qclone_core::analysis::{max_formula_gap, sweep_fig_s1, sweep_to_csv, uniform_grid};
use qclone_core::qstate::MATRIX_TOL;

pub struct SweepOutput {
    pub csv: String,
    pub max_gap: f64,
    pub pass: bool,
}

pub fn run(n: usize, points: usize, t_max: f64) -> Result<SweepOutput> {
    let rows = sweep_fig_s1(&uniform_grid(points, t_max), n)?;
    let max_gap = max_formula_gap(&rows);
    Ok(SweepOutput { csv: sweep_to_csv(&rows), max_gap, pass: max_gap < MATRIX_TOL })
}

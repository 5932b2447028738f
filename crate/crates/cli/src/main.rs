//! `qclone`: encrypted-cloning demos, sweeps, audits and circuit compilation.
//!
//! Exit status is 0 when every embedded check passes, 1 when a check fails
//! and 2 on invalid input or any other error.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qclone_core::compiler::ExportFormat;
use qclone_core::protocol::{ProtocolConfig, Variant, PROTOCOL_ANGLE};
use qclone_core::qstate::set_max_qubits;

use commands::compile::{CompileOptions, Which};
use output::{emit, to_json};

const MAX_QUBITS_VAR: &str = "QCLONE_MAX_QUBITS";

#[derive(Parser)]
#[command(name = "qclone", version, about = "Encrypted cloning of qubits: simulate, audit and compile")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    #[value(alias = "rotated-x2")]
    Rotated,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Rotated => Variant::RotatedX2,
        }
    }
}

#[derive(Args)]
struct PsiArgs {
    /// Input state: 0, 1, +, -, +i, -i, `a,b` or `re:im,re:im`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "seed")]
    psi: Option<String>,
    /// Seed for a Haar-random input state (default 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt, check every marginal, decrypt each target and check key consumption.
    Demo {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = PROTOCOL_ANGLE)]
        t: f64,
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        #[command(flatten)]
        psi: PsiArgs,
        /// JSON report path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherent information over a uniform angle grid, as CSV.
    Sweep {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        tmax: f64,
        /// CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile the encoder and decoder, verify them and report gate counts.
    Compile {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = PROTOCOL_ANGLE)]
        t: f64,
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        /// Circuit format: text or openqasm2.
        #[arg(long, default_value = "text")]
        format: ExportFormat,
        #[arg(long, value_enum, default_value = "both")]
        what: Which,
        /// Directory for circuit files and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Marginal, independence and access-structure checks over the Pauli eigenstates.
    Audit {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated cloning to depth k: decrypt every clone with its ancestry key.
    Iterate {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Substitution, decryption from A, reverse encoding and the rotated variant.
    Variants {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn apply_qubit_limit() -> Result<()> {
    if let Ok(raw) = std::env::var(MAX_QUBITS_VAR) {
        let limit: usize = raw.trim().parse().with_context(|| format!("{MAX_QUBITS_VAR}='{raw}' is not a count"))?;
        if limit == 0 {
            bail!("{MAX_QUBITS_VAR} must be positive");
        }
        set_max_qubits(limit);
    }
    Ok(())
}

/// Runs one command; returns whether its checks passed.
fn execute(command: Command) -> Result<bool> {
    apply_qubit_limit()?;
    match command {
        Command::Demo { n, t, variant, psi, out } => {
            let config = ProtocolConfig::new(n).with_t(t).with_variant(variant.into());
            let input = input::resolve(psi.psi.as_deref(), psi.seed)?;
            let report = commands::demo::run(&config, input)?;
            emit(out.as_deref(), &to_json(&report)?)?;
            Ok(report.pass)
        }
        Command::Sweep { n, points, tmax, out } => {
            if !tmax.is_finite() {
                bail!("--tmax must be finite");
            }
            let result = commands::sweep::run(n, points, tmax)?;
            emit(out.as_deref(), &result.csv)?;
            if !result.pass {
                eprintln!("formula and simulation disagree by {:e}", result.max_gap);
            }
            Ok(result.pass)
        }
        Command::Compile { n, t, variant, format, what, out } => {
            let opts = CompileOptions { n, t, variant: variant.into(), format, which: what, out_dir: out.as_deref() };
            let report = commands::compile::run(&opts)?;
            let text = to_json(&report)?;
            if let Some(dir) = &out {
                output::write_atomic(&dir.join("report.json"), &text)?;
            }
            emit(None, &text)?;
            Ok(report.pass)
        }
        Command::Audit { n, out } => {
            let report = commands::audit::run(n)?;
            emit(out.as_deref(), &to_json(&report)?)?;
            Ok(report.pass)
        }
        Command::Iterate { k, psi, out } => {
            let input = input::resolve(psi.psi.as_deref(), psi.seed)?;
            let report = commands::iterate::run(k, input)?;
            emit(out.as_deref(), &to_json(&report)?)?;
            Ok(report.pass)
        }
        Command::Variants { n, psi, out } => {
            let input = input::resolve(psi.psi.as_deref(), psi.seed)?;
            let report = commands::variants::run(n, input)?;
            emit(out.as_deref(), &to_json(&report)?)?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

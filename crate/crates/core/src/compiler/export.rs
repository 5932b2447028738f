//! Circuit serialization.
//!
//! TEXT: a `qubits=N` header, then one gate per line as
//! `KIND q[,q2][;param=value]`. Matrix parameters are row-major `re:im`
//! entries separated by commas. Floats use the shortest representation that
//! parses back to the same value, so export followed by parse is lossless.
//!
//! OPENQASM2: `qelib1.inc` vocabulary. A controlled-`u` is lowered to a
//! `u1` phase on the control followed by `cu3`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateCircuit, GateKind};
use crate::qstate::{c64, Matrix, C64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Text,
    Openqasm2,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ExportFormat::Text),
            "openqasm2" | "qasm" => Ok(ExportFormat::Openqasm2),
            other => Err(format!("unknown circuit format '{other}' (expected text or openqasm2)")),
        }
    }
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Text => "txt",
            ExportFormat::Openqasm2 => "qasm",
        }
    }
}

pub fn export_circuit(c: &GateCircuit, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Text => Ok(to_text(c)),
        ExportFormat::Openqasm2 => to_qasm(c),
    }
}

fn matrix_param(m: &Matrix) -> String {
    let mut entries = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            entries.push(format!("{}:{}", m[(r, c)].re, m[(r, c)].im));
        }
    }
    entries.join(",")
}

fn to_text(c: &GateCircuit) -> String {
    let mut out = format!("qubits={}\n", c.num_qubits());
    for g in c.gates() {
        let qubits: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
        let param = match &g.kind {
            GateKind::Rz(theta) => format!(";theta={theta}"),
            GateKind::Phase(phi) => format!(";phi={phi}"),
            GateKind::ControlledU(u) | GateKind::Generic2q(u) => format!(";u={}", matrix_param(u)),
            _ => String::new(),
        };
        let _ = writeln!(out, "{} {}{}", g.kind.name(), qubits.join(","), param);
    }
    out
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_matrix(text: &str, dim: usize, line: usize) -> Result<Matrix> {
    let entries = text
        .split(',')
        .map(|e| {
            let (re, im) = e.split_once(':').ok_or_else(|| parse_error(line, format!("bad matrix entry '{e}'")))?;
            let re: f64 = re.trim().parse().map_err(|_| parse_error(line, format!("bad number '{re}'")))?;
            let im: f64 = im.trim().parse().map_err(|_| parse_error(line, format!("bad number '{im}'")))?;
            Ok(c64(re, im))
        })
        .collect::<Result<Vec<C64>>>()?;
    if entries.len() != dim * dim {
        return Err(parse_error(line, format!("expected {} matrix entries, found {}", dim * dim, entries.len())));
    }
    Ok(Matrix::from_row_slice(dim, dim, &entries))
}

/// Parses the TEXT format back into a circuit.
pub fn parse_text(text: &str) -> Result<GateCircuit> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_error(1, "missing 'qubits=N' header"))?;
    let num_qubits: usize = header
        .strip_prefix("qubits=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_error(hline, format!("expected 'qubits=N', found '{header}'")))?;
    let mut circuit = GateCircuit::new(num_qubits);
    for (line, content) in lines {
        let (head, param) = match content.split_once(';') {
            Some((h, p)) => (h.trim(), Some(p.trim())),
            None => (content, None),
        };
        let (kind, qubits) =
            head.split_once(' ').ok_or_else(|| parse_error(line, format!("expected 'KIND qubits', found '{head}'")))?;
        let qubits = qubits
            .split(',')
            .map(|q| q.trim().parse::<usize>().map_err(|_| parse_error(line, format!("bad qubit index '{q}'"))))
            .collect::<Result<Vec<_>>>()?;
        let value = |key: &str| -> Result<&str> {
            param
                .and_then(|p| p.strip_prefix(key))
                .and_then(|p| p.strip_prefix('='))
                .ok_or_else(|| parse_error(line, format!("{kind} needs '{key}='")))
        };
        let number = |key: &str| -> Result<f64> {
            let v = value(key)?;
            v.parse().map_err(|_| parse_error(line, format!("bad number '{v}'")))
        };
        let kind = match kind {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "Z" => GateKind::Z,
            "RZ" => GateKind::Rz(number("theta")?),
            "PHASE" => GateKind::Phase(number("phi")?),
            "CNOT" => GateKind::Cnot,
            "CONTROLLED_U" => GateKind::ControlledU(parse_matrix(value("u")?, 2, line)?),
            "GENERIC_2Q" => GateKind::Generic2q(parse_matrix(value("u")?, 4, line)?),
            other => return Err(parse_error(line, format!("unknown gate kind '{other}'"))),
        };
        let gate = Gate::new(kind, &qubits).map_err(|e| parse_error(line, e.to_string()))?;
        circuit.push(gate).map_err(|e| parse_error(line, e.to_string()))?;
    }
    Ok(circuit)
}

/// `u = e^{i gamma} U3(theta, phi, lambda)` with qelib1's
/// `U3 = [[cos, -e^{i lambda} sin], [e^{i phi} sin, e^{i(phi+lambda)} cos]]`
/// at half-angle `theta / 2`. Returns `(gamma, theta, phi, lambda)`.
pub fn u3_decomposition(u: &Matrix) -> (f64, f64, f64, f64) {
    let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let theta = 2.0 * c.norm().atan2(a.norm());
    if a.norm() > 1e-12 {
        let gamma = a.arg();
        if c.norm() > 1e-12 {
            (gamma, theta, c.arg() - gamma, (-b).arg() - gamma)
        } else {
            (gamma, theta, 0.0, d.arg() - gamma)
        }
    } else {
        let gamma = (-b).arg();
        (gamma, theta, c.arg() - gamma, 0.0)
    }
}

fn to_qasm(c: &GateCircuit) -> Result<String> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    for g in c.gates() {
        let q = &g.qubits;
        match &g.kind {
            GateKind::H => writeln!(out, "h q[{}];", q[0]),
            GateKind::X => writeln!(out, "x q[{}];", q[0]),
            GateKind::Z => writeln!(out, "z q[{}];", q[0]),
            GateKind::Rz(theta) => writeln!(out, "rz({theta}) q[{}];", q[0]),
            GateKind::Phase(phi) => writeln!(out, "u1({phi}) q[{}];", q[0]),
            GateKind::Cnot => writeln!(out, "cx q[{}],q[{}];", q[0], q[1]),
            GateKind::ControlledU(u) => {
                let (gamma, theta, phi, lambda) = u3_decomposition(u);
                if gamma != 0.0 {
                    let _ = writeln!(out, "u1({gamma}) q[{}];", q[0]);
                }
                writeln!(out, "cu3({theta},{phi},{lambda}) q[{}],q[{}];", q[0], q[1])
            }
            GateKind::Generic2q(_) => return Err(Error::UnsupportedGate("GENERIC_2Q", "OPENQASM2")),
        }
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}

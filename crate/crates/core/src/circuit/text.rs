//! Line-oriented circuit text format.
//!
//! ```text
//! QUBITS 2
//! RZ 0 1.0000000000000000e-1
//! CNOT 0 1
//! RX 1 -2.5000000000000000e-1
//! ```
//!
//! Angles are written with 17 significant digits, which round-trips every
//! `f64` exactly. `KAK <a> <b>` takes 15 angles and `PHASE <angle>` carries a
//! global phase.

use std::fmt::Write as _;
use std::path::Path;

use super::{Circuit, Gate, KAK_PARAMS};
use crate::error::{Error, Result};

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = format!("QUBITS {}\n", circuit.n_qubits());
    for (i, gate) in circuit.gates().iter().enumerate() {
        let angles = circuit.gate_params(i);
        match *gate {
            Gate::RotZ(q) => writeln!(out, "RZ {q} {:.16e}", angles[0]),
            Gate::RotX(q) => writeln!(out, "RX {q} {:.16e}", angles[0]),
            Gate::Cnot { control, target } => writeln!(out, "CNOT {control} {target}"),
            Gate::Kak(a, b) => {
                let _ = write!(out, "KAK {a} {b}");
                for x in angles {
                    let _ = write!(out, " {x:.16e}");
                }
                writeln!(out)
            }
            Gate::GlobalPhase => writeln!(out, "PHASE {:.16e}", angles[0]),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn read_circuit(path: impl AsRef<Path>) -> Result<Circuit> {
    parse_circuit(&std::fs::read_to_string(path)?)
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line, msg };
        let Some(c) = circuit.as_mut() else {
            if tokens.len() != 2 || tokens[0] != "QUBITS" {
                return Err(err(format!("expected `QUBITS <n>` header, got `{content}`")));
            }
            let n = parse_index(tokens[1], line)?;
            if n == 0 {
                return Err(err("circuit needs at least one qubit".into()));
            }
            circuit = Some(Circuit::new(n));
            continue;
        };
        let (gate, angle_tokens) = match (tokens[0], tokens.len()) {
            ("RZ", 3) => (Gate::RotZ(parse_index(tokens[1], line)?), &tokens[2..]),
            ("RX", 3) => (Gate::RotX(parse_index(tokens[1], line)?), &tokens[2..]),
            ("CNOT", 3) => (
                Gate::Cnot {
                    control: parse_index(tokens[1], line)?,
                    target: parse_index(tokens[2], line)?,
                },
                &tokens[3..],
            ),
            ("KAK", n) if n == 3 + KAK_PARAMS => (
                Gate::Kak(parse_index(tokens[1], line)?, parse_index(tokens[2], line)?),
                &tokens[3..],
            ),
            ("PHASE", 2) => (Gate::GlobalPhase, &tokens[1..]),
            _ => return Err(err(format!("unrecognized gate line `{content}`"))),
        };
        let angles = angle_tokens
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("bad angle `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        c.push(gate, &angles).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        msg: "missing `QUBITS <n>` header".into(),
    })
}

fn parse_index(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad qubit index `{token}`"),
    })
}

//! Line-oriented circuit text format.
//!
//! ```text
//! width 3
//! label example
//! register address 0..1
//! register data 2
//! H 0
//! CNOT 0 2
//! ---
//! CRK 2 1 0
//! ---
//! ```
//!
//! Header lines (`width`, `label`, `register <role> <ranges>`) come first; each
//! gate line is `<KIND> <operands>`; `---` closes a layer. Register ranges are
//! inclusive (`2..5`) or single indices. `CRK <k> <ctrl> <tgt>` and its adjoint
//! `CRKDG`, and `RZ <angle> <q>` carry their parameter first. `#` starts a comment.

use std::fmt::Write;

use super::{Circuit, Gate, GateKind, Layer, RegisterRole};
use crate::error::{Error, Result};

pub fn export_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "width {}", circuit.width()).unwrap();
    if !circuit.label().is_empty() {
        writeln!(out, "label {}", circuit.label()).unwrap();
    }
    for (role, qubits) in circuit.registers() {
        let idx: Vec<usize> = qubits.iter().map(|q| q.0).collect();
        writeln!(out, "register {} {}", role.name(), format_ranges(&idx)).unwrap();
    }
    for layer in circuit.layers() {
        for g in layer.gates() {
            out.push_str(&format_gate(g));
            out.push('\n');
        }
        out.push_str("---\n");
    }
    out
}

fn format_ranges(idx: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && idx[j + 1] == idx[j] + 1 {
            j += 1;
        }
        if j > i {
            parts.push(format!("{}..{}", idx[i], idx[j]));
        } else {
            parts.push(idx[i].to_string());
        }
        i = j + 1;
    }
    parts.join(" ")
}

fn format_gate(g: &Gate) -> String {
    let ops: Vec<String> = g.qubits().map(|q| q.to_string()).collect();
    let ops = ops.join(" ");
    match g.kind() {
        GateKind::CRk { k, .. } => format!("{} {} {}", g.kind().name(), k, ops),
        GateKind::Rz(theta) => format!("RZ {} {}", theta, ops),
        kind => format!("{} {}", kind.name(), ops),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected integer, found `{tok}`")))
}

fn parse_ranges<'a>(toks: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in toks {
        match tok.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_usize(a, line)?, parse_usize(b, line)?);
                if b < a {
                    return Err(parse_err(line, format!("empty range `{tok}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_usize(tok, line)?),
        }
    }
    Ok(out)
}

fn parse_gate(toks: &[&str], line: usize) -> Result<Gate> {
    let (head, rest) = toks.split_first().expect("non-empty line");
    let (kind, ops) = match *head {
        "H" => (GateKind::H, rest),
        "X" => (GateKind::X, rest),
        "Z" => (GateKind::Z, rest),
        "S" => (GateKind::S, rest),
        "SDG" => (GateKind::Sdg, rest),
        "T" => (GateKind::T, rest),
        "TDG" => (GateKind::Tdg, rest),
        "CNOT" => (GateKind::Cnot, rest),
        "CZ" => (GateKind::Cz, rest),
        "TOFFOLI" => (GateKind::Toffoli, rest),
        "CRK" | "CRKDG" => {
            let (k, ops) = rest
                .split_first()
                .ok_or_else(|| parse_err(line, format!("{head} needs a rotation index")))?;
            let k: u32 = k
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| parse_err(line, format!("bad rotation index `{k}`")))?;
            (
                GateKind::CRk {
                    k,
                    adjoint: *head == "CRKDG",
                },
                ops,
            )
        }
        "RZ" => {
            let (a, ops) = rest
                .split_first()
                .ok_or_else(|| parse_err(line, "RZ needs an angle"))?;
            let theta: f64 = a
                .parse()
                .map_err(|_| parse_err(line, format!("bad angle `{a}`")))?;
            (GateKind::Rz(theta), ops)
        }
        other => return Err(parse_err(line, format!("unknown gate `{other}`"))),
    };
    let ops: Vec<usize> = ops
        .iter()
        .map(|t| parse_usize(t, line))
        .collect::<Result<_>>()?;
    Gate::new(kind, &ops).map_err(|e| parse_err(line, e.to_string()))
}

pub fn import_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut label = String::new();
    let mut current = Layer::default();
    let mut dirty = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "---" {
            let c = circuit
                .as_mut()
                .ok_or_else(|| parse_err(line, "layer separator before `width`"))?;
            c.push_raw_layer(std::mem::take(&mut current));
            dirty = false;
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "width" => {
                if circuit.is_some() {
                    return Err(parse_err(line, "duplicate `width`"));
                }
                let w = toks
                    .get(1)
                    .ok_or_else(|| parse_err(line, "`width` needs a value"))?;
                let w = parse_usize(w, line)?;
                if w == 0 {
                    return Err(parse_err(line, "width must be positive"));
                }
                circuit = Some(Circuit::new(w, label.clone()));
            }
            "label" => {
                label = content["label".len()..].trim().to_string();
                if let Some(c) = circuit.as_mut() {
                    c.set_label(label.clone());
                }
            }
            "register" => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "`register` before `width`"))?;
                let role = toks
                    .get(1)
                    .and_then(|r| RegisterRole::from_name(r))
                    .ok_or_else(|| parse_err(line, "unknown register role"))?;
                let idx = parse_ranges(toks[2..].iter().copied(), line)?;
                c.add_register(role, idx)
                    .map_err(|e| parse_err(line, e.to_string()))?;
            }
            _ => {
                let c = circuit
                    .as_ref()
                    .ok_or_else(|| parse_err(line, "gate before `width`"))?;
                let gate = parse_gate(&toks, line)?;
                if let Some(q) = gate.qubits().find(|&q| q >= c.width()) {
                    return Err(parse_err(
                        line,
                        format!("operand {q} out of range for width {}", c.width()),
                    ));
                }
                if let Some(q) = gate.qubits().find(|&q| current.touches(q)) {
                    return Err(parse_err(line, format!("qubit {q} used twice in layer")));
                }
                current.gates.push(gate);
                dirty = true;
            }
        }
    }
    let mut c = circuit.ok_or_else(|| parse_err(0, "missing `width` header"))?;
    if dirty {
        c.push_raw_layer(current);
    }
    Ok(c)
}

//! Layered gate-level representation of Clifford+T circuits.
//!
//! A [`Circuit`] is an ordered list of [`Layer`]s; gates inside a layer act on
//! pairwise disjoint qubits. T-depth is the number of layers holding at least one
//! `T` or `T†`. No commutation-based reordering is ever performed: synthesizers
//! emit their layers explicitly and [`Placement::Asap`] only slides a gate back
//! over layers that do not touch its qubits.

mod gate;
mod text;
mod unitary;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use gate::{Gate, GateKind, QubitId, RegisterRole};
pub use text::{export_text, import_text};
pub use unitary::{Unitary, DEFAULT_UNITARY_CAP};

use crate::error::{Error, Result};

/// Set of gates with disjoint supports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layer {
    gates: Vec<Gate>,
}

impl Layer {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn touches(&self, q: usize) -> bool {
        self.gates.iter().any(|g| g.acts_on(q))
    }

    fn conflict(&self, gate: &Gate) -> Option<usize> {
        gate.qubits().find(|&q| self.touches(q))
    }

    pub fn has_t(&self) -> bool {
        self.gates.iter().any(|g| g.kind().is_t())
    }
}

/// Where [`Circuit::append_gate`] puts a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Earliest layer reachable by scanning back from the end over layers that
    /// do not touch any operand.
    Asap,
    NewLayer,
    IntoLayer(usize),
}

/// Resource counts of a circuit. The T fields are `None` when unlowered macros
/// (Toffoli, CRk, Rz) are present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceMetrics {
    pub t_count: Option<usize>,
    pub t_depth: Option<usize>,
    pub total_depth: usize,
    pub width: usize,
    pub gate_count: usize,
    pub gate_histogram: BTreeMap<String, usize>,
}

impl ResourceMetrics {
    pub fn t_count(&self) -> Result<usize> {
        self.t_count.ok_or_else(|| self.macro_error())
    }

    pub fn t_depth(&self) -> Result<usize> {
        self.t_depth.ok_or_else(|| self.macro_error())
    }

    pub fn count(&self, kind: &str) -> usize {
        self.gate_histogram.get(kind).copied().unwrap_or(0)
    }

    fn macro_error(&self) -> Error {
        let macros: Vec<&str> = ["TOFFOLI", "CRK", "CRKDG", "RZ"]
            .into_iter()
            .filter(|k| self.count(k) > 0)
            .collect();
        Error::MacroPresent(macros.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    registers: BTreeMap<RegisterRole, Vec<QubitId>>,
    layers: Vec<Layer>,
    label: String,
}

impl Circuit {
    pub fn new(width: usize, label: impl Into<String>) -> Self {
        Circuit {
            width,
            registers: BTreeMap::new(),
            layers: Vec::new(),
            label: label.into(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn registers(&self) -> &BTreeMap<RegisterRole, Vec<QubitId>> {
        &self.registers
    }

    pub fn register(&self, role: RegisterRole) -> &[QubitId] {
        self.registers.get(&role).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn role_of(&self, q: usize) -> Option<RegisterRole> {
        self.registers
            .iter()
            .find(|(_, qs)| qs.contains(&QubitId(q)))
            .map(|(r, _)| *r)
    }

    /// Adds qubits to the register of `role`. A qubit can belong to one role only.
    pub fn add_register(
        &mut self,
        role: RegisterRole,
        qubits: impl IntoIterator<Item = usize>,
    ) -> Result<()> {
        for q in qubits {
            self.check_operand(q)?;
            match self.role_of(q) {
                Some(r) if r == role => continue,
                Some(_) => return Err(Error::RegisterMismatch { qubit: q }),
                None => self.registers.entry(role).or_default().push(QubitId(q)),
            }
        }
        Ok(())
    }

    pub fn with_register(
        mut self,
        role: RegisterRole,
        qubits: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        self.add_register(role, qubits)?;
        Ok(self)
    }

    fn check_operand(&self, q: usize) -> Result<()> {
        if q >= self.width {
            Err(Error::OperandOutOfRange {
                index: q,
                width: self.width,
            })
        } else {
            Ok(())
        }
    }

    fn check_gate(&self, gate: &Gate) -> Result<()> {
        gate.qubits().try_for_each(|q| self.check_operand(q))
    }

    /// Appends `gate` and returns the index of the layer it landed in.
    pub fn append_gate(&mut self, gate: Gate, placement: Placement) -> Result<usize> {
        self.check_gate(&gate)?;
        let idx = match placement {
            Placement::NewLayer => self.layers.len(),
            Placement::Asap => {
                let mut idx = self.layers.len();
                while idx > 0 && self.layers[idx - 1].conflict(&gate).is_none() {
                    idx -= 1;
                }
                idx
            }
            Placement::IntoLayer(i) => {
                let layer = self.layers.get(i).ok_or(Error::NoSuchLayer(i))?;
                if let Some(qubit) = layer.conflict(&gate) {
                    return Err(Error::LayerConflict { layer: i, qubit });
                }
                i
            }
        };
        if idx == self.layers.len() {
            self.layers.push(Layer::default());
        }
        self.layers[idx].gates.push(gate);
        Ok(idx)
    }

    /// Appends every gate with [`Placement::Asap`].
    pub fn extend_asap(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.append_gate(g, Placement::Asap)?;
        }
        Ok(())
    }

    /// Appends one explicit layer. Empty input appends nothing.
    pub fn push_layer(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        let mut layer = Layer::default();
        for g in gates {
            self.check_gate(&g)?;
            if let Some(qubit) = layer.conflict(&g) {
                return Err(Error::LayerConflict {
                    layer: self.layers.len(),
                    qubit,
                });
            }
            layer.gates.push(g);
        }
        if !layer.is_empty() {
            self.layers.push(layer);
        }
        Ok(())
    }

    pub(crate) fn push_raw_layer(&mut self, layer: Layer) {
        self.layers.push(layer);
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    pub fn has_macros(&self) -> bool {
        self.gates().any(|g| g.kind().is_macro())
    }

    fn merged_registers(&self, other: &Circuit) -> Result<BTreeMap<RegisterRole, Vec<QubitId>>> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut merged = self.registers.clone();
        for (role, qs) in &other.registers {
            for q in qs {
                match self.role_of(q.0) {
                    Some(r) if r != *role => return Err(Error::RegisterMismatch { qubit: q.0 }),
                    Some(_) => {}
                    None => merged.entry(*role).or_default().push(*q),
                }
            }
        }
        Ok(merged)
    }

    fn joined_label(&self, other: &Circuit) -> String {
        match (self.label.is_empty(), other.label.is_empty()) {
            (true, _) => other.label.clone(),
            (_, true) => self.label.clone(),
            _ => format!("{}+{}", self.label, other.label),
        }
    }

    /// Layer-wise concatenation.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        let registers = self.merged_registers(other)?;
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Ok(Circuit {
            width: self.width,
            registers,
            layers,
            label: self.joined_label(other),
        })
    }

    /// Concatenation where `other`'s gates are re-placed with [`Placement::Asap`],
    /// so gates on untouched qubits merge into earlier layers.
    pub fn compose_asap(&self, other: &Circuit) -> Result<Circuit> {
        let registers = self.merged_registers(other)?;
        let mut out = self.clone();
        out.registers = registers;
        out.label = self.joined_label(other);
        out.extend_asap(other.gates().cloned())?;
        Ok(out)
    }

    /// Reversed layer order with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| Layer {
                gates: l.gates.iter().rev().map(Gate::adjoint).collect(),
            })
            .collect();
        Circuit {
            width: self.width,
            registers: self.registers.clone(),
            layers,
            label: if self.label.is_empty() {
                String::new()
            } else {
                format!("{}^-1", self.label)
            },
        }
    }

    /// Copies this circuit into a wider one, renaming qubit `i` to `map[i]`.
    /// Registers are carried over under the new names.
    pub fn embed(&self, width: usize, map: &[usize]) -> Result<Circuit> {
        if map.len() != self.width {
            return Err(Error::WidthMismatch {
                left: map.len(),
                right: self.width,
            });
        }
        let mut out = Circuit::new(width, self.label.clone());
        for (role, qs) in &self.registers {
            out.add_register(*role, qs.iter().map(|q| map[q.0]))?;
        }
        for layer in &self.layers {
            let mut gates = Vec::with_capacity(layer.gates.len());
            for g in &layer.gates {
                let g = g.remapped(|q| map[q]);
                out.check_gate(&g)?;
                gates.push(g);
            }
            out.push_raw_layer(Layer { gates });
        }
        Ok(out)
    }

    /// Appends every layer of `other` (same width) without merging.
    pub fn append_circuit(&mut self, other: &Circuit) -> Result<()> {
        self.registers = self.merged_registers(other)?;
        self.layers.extend(other.layers.iter().cloned());
        Ok(())
    }

    pub fn metrics(&self) -> ResourceMetrics {
        let mut hist = BTreeMap::new();
        for g in self.gates() {
            *hist.entry(g.kind().name().to_string()).or_insert(0) += 1;
        }
        let lowered = !self.has_macros();
        let t_count = self.gates().filter(|g| g.kind().is_t()).count();
        let t_depth = self.layers.iter().filter(|l| l.has_t()).count();
        ResourceMetrics {
            t_count: lowered.then_some(t_count),
            t_depth: lowered.then_some(t_depth),
            total_depth: self.layers.iter().filter(|l| !l.is_empty()).count(),
            width: self.width,
            gate_count: self.gate_count(),
            gate_histogram: hist,
        }
    }

    pub fn t_depth(&self) -> Result<usize> {
        self.metrics().t_depth()
    }

    pub fn t_count(&self) -> Result<usize> {
        self.metrics().t_count()
    }

    /// Re-checks layer legality and operand ranges.
    pub fn validate(&self) -> Result<()> {
        for (i, layer) in self.layers.iter().enumerate() {
            let mut seen = vec![false; self.width];
            for g in &layer.gates {
                self.check_gate(g)?;
                for q in g.qubits() {
                    if seen[q] {
                        return Err(Error::LayerConflict { layer: i, qubit: q });
                    }
                    seen[q] = true;
                }
            }
        }
        Ok(())
    }

    pub fn to_unitary<T: crate::num::Real>(&self) -> Result<Unitary<T>> {
        Unitary::from_circuit(self, DEFAULT_UNITARY_CAP)
    }
}

//! Bucket-brigade QRAM: coupling (address to one-hot routing register), query
//! (load one data bit from classical cells) and decoupling (inverse coupling).
//!
//! Qubit layout of a full QRAM circuit, in index order:
//! `q` address, `2^q` routing ancillae, `n+1` data, `(n+1) * 2^{q-1}` query extras.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate, RegisterRole};
use crate::error::{Error, Result};
use crate::synth::push_shared_control_toffolis;

/// Classical memory of `2^q` cells, each an `(n+1)`-bit word. Cell `gamma`
/// (address read MSB first) holds the word allocated to that address.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryTable {
    pub q: usize,
    pub n: usize,
    pub cells: Vec<BitString>,
}

impl MemoryTable {
    pub fn new(n: usize, q: usize, cells: Vec<BitString>) -> Result<Self> {
        let table = MemoryTable { q, n, cells };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || self.n == 0 {
            return Err(Error::DimensionMismatch(
                "n and q must be at least 1".into(),
            ));
        }
        if self.q > 20 {
            return Err(Error::DimensionMismatch(format!("q={} too large", self.q)));
        }
        if self.cells.len() != 1 << self.q {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for q={}, expected {}",
                self.cells.len(),
                self.q,
                1usize << self.q
            )));
        }
        if let Some(bad) = self.cells.iter().find(|c| c.len() != self.n + 1) {
            return Err(Error::DimensionMismatch(format!(
                "cell `{bad}` has {} bits, expected {}",
                bad.len(),
                self.n + 1
            )));
        }
        Ok(())
    }

    pub fn word_bits(&self) -> usize {
        self.n + 1
    }

    /// Bit `i` of every cell, in address order.
    pub fn column(&self, i: usize) -> Vec<bool> {
        self.cells.iter().map(|c| c.get(i)).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: MemoryTable = serde_json::from_str(text)
            .map_err(|e| Error::DimensionMismatch(format!("memory table JSON: {e}")))?;
        table.validate()?;
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Qubit index ranges of a full QRAM circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QramLayout {
    pub n: usize,
    pub q: usize,
    pub address: Range<usize>,
    pub routing: Range<usize>,
    pub data: Range<usize>,
    pub query_extra: Range<usize>,
}

impl QramLayout {
    pub fn new(n: usize, q: usize) -> Self {
        let routing = q..q + (1 << q);
        let data = routing.end..routing.end + n + 1;
        let query_extra = data.end..data.end + (n + 1) * (1 << (q - 1));
        QramLayout {
            n,
            q,
            address: 0..q,
            routing,
            data,
            query_extra,
        }
    }

    /// `q + 2^q + (n+1) + (n+1) 2^{q-1}`.
    pub fn width(&self) -> usize {
        self.query_extra.end
    }

    /// Extra qubits reserved for the query of data bit `bit`.
    pub fn extras_for(&self, bit: usize) -> Range<usize> {
        let per = 1 << (self.q - 1);
        let start = self.query_extra.start + bit * per;
        start..start + per
    }
}

/// Switches in stages `2..=q`: `sum_{j=2}^q 2^{j-1} = 2^q - 2`.
pub fn n_routers(q: usize) -> u64 {
    (1u64 << q) - 2
}

fn push_coupling(c: &mut Circuit, address: &[usize], routing: &[usize]) -> Result<()> {
    let q = address.len();
    let half = 1 << (q - 1);
    c.push_layer([Gate::x(routing[0]), Gate::cnot(address[0], routing[half])])?;
    c.push_layer([Gate::cnot(routing[half], routing[0])])?;
    for (j, &shared) in address.iter().enumerate().skip(1) {
        let stride = 1 << (q - 1 - j);
        let pairs: Vec<(usize, usize)> = (0..1usize << q)
            .step_by(2 * stride)
            .map(|p| (routing[p], routing[p + stride]))
            .collect();
        push_shared_control_toffolis(c, shared, &pairs)?;
        c.push_layer(
            pairs
                .iter()
                .map(|&(parent, child)| Gate::cnot(child, parent)),
        )?;
    }
    Ok(())
}

/// Coupling circuit on `q` address qubits followed by `2^q` routing ancillae.
///
/// Maps `|gamma>|0...0>` to `|gamma>|onehot(gamma)>`: routing qubit `gamma` is the
/// only one set. Stage 1 uses a CNOT switch; stage `j >= 2` uses `2^{j-1}`
/// switches (Toffoli + CNOT) whose Toffolis share the address control and four
/// T layers, giving T-depth `4(q-1)`.
pub fn synth_coupling(q: usize) -> Result<Circuit> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let width = q + (1 << q);
    let mut c = Circuit::new(width, format!("coupling q={q}"))
        .with_register(RegisterRole::Address, 0..q)?
        .with_register(RegisterRole::RoutingAncilla, q..width)?;
    let address: Vec<usize> = (0..q).collect();
    let routing: Vec<usize> = (q..width).collect();
    push_coupling(&mut c, &address, &routing)?;
    Ok(c)
}

/// Loads `data ^= XOR_{gamma : column[gamma]} routing[gamma]`.
///
/// Memory bits are classical, so a cell holding 1 contributes a CNOT from its
/// routing ancilla and a cell holding 0 contributes nothing. Cells `2k, 2k+1`
/// load into extra `k`; the extras are XOR-reduced pairwise, copied into the
/// data qubit, then everything but the data qubit is uncomputed.
fn push_query(
    c: &mut Circuit,
    routing: &[usize],
    data: usize,
    extras: &[usize],
    column: &[bool],
) -> Result<()> {
    let loads_even: Vec<Gate> = (0..extras.len())
        .filter(|&k| column[2 * k])
        .map(|k| Gate::cnot(routing[2 * k], extras[k]))
        .collect();
    let loads_odd: Vec<Gate> = (0..extras.len())
        .filter(|&k| column[2 * k + 1])
        .map(|k| Gate::cnot(routing[2 * k + 1], extras[k]))
        .collect();
    let active: Vec<usize> = (0..extras.len())
        .filter(|&k| column[2 * k] || column[2 * k + 1])
        .map(|k| extras[k])
        .collect();
    if active.is_empty() {
        return Ok(());
    }
    let mut reduction: Vec<Vec<Gate>> = Vec::new();
    let mut d = 1;
    while d < active.len() {
        let layer: Vec<Gate> = (0..active.len())
            .step_by(2 * d)
            .filter(|i| i + d < active.len())
            .map(|i| Gate::cnot(active[i + d], active[i]))
            .collect();
        reduction.push(layer);
        d *= 2;
    }
    c.push_layer(loads_even.clone())?;
    c.push_layer(loads_odd.clone())?;
    for layer in &reduction {
        c.push_layer(layer.clone())?;
    }
    c.push_layer([Gate::cnot(active[0], data)])?;
    for layer in reduction.into_iter().rev() {
        c.push_layer(layer)?;
    }
    c.push_layer(loads_odd)?;
    c.push_layer(loads_even)?;
    Ok(())
}

/// Query circuit for one data bit, on `q` address, `2^q` routing, 1 data and
/// `2^{q-1}` extra qubits (in that order). Expects a one-hot routing register.
pub fn synth_query(q: usize, column: &[bool]) -> Result<Circuit> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    if column.len() != 1 << q {
        return Err(Error::LengthMismatch {
            expected: 1 << q,
            got: column.len(),
        });
    }
    let routing: Vec<usize> = (q..q + (1 << q)).collect();
    let data = q + (1 << q);
    let extras: Vec<usize> = (data + 1..data + 1 + (1 << (q - 1))).collect();
    let width = data + 1 + extras.len();
    let mut c = Circuit::new(width, format!("query q={q}"))
        .with_register(RegisterRole::Address, 0..q)?
        .with_register(RegisterRole::RoutingAncilla, routing.clone())?
        .with_register(RegisterRole::Data, [data])?
        .with_register(RegisterRole::QueryExtra, extras.clone())?;
    push_query(&mut c, &routing, data, &extras, column)?;
    Ok(c)
}

/// Number of cell loads: `raw` counts every cell, `emitted` only cells holding 1.
pub fn query_load_counts(column: &[bool]) -> (usize, usize) {
    (column.len(), column.iter().filter(|&&b| b).count())
}

/// How routing is shared between the `n+1` data bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QramMode {
    /// A full coupling / query / decoupling round per data bit.
    #[default]
    PerBit,
    /// Couple once, query every bit, decouple once.
    SharedRouting,
}

/// Full QRAM: `sum_gamma |gamma>|0> -> sum_gamma |gamma>|D_gamma>`, ancillae restored.
pub fn synth_qram(n: usize, q: usize, memory: &MemoryTable, mode: QramMode) -> Result<Circuit> {
    memory.validate()?;
    if memory.n != n || memory.q != q {
        return Err(Error::DimensionMismatch(format!(
            "memory is (n={}, q={}), circuit requested (n={n}, q={q})",
            memory.n, memory.q
        )));
    }
    let layout = QramLayout::new(n, q);
    let width = layout.width();
    let label = match mode {
        QramMode::PerBit => format!("qram n={n} q={q}"),
        QramMode::SharedRouting => format!("qram n={n} q={q} shared"),
    };
    let mut c = Circuit::new(width, label)
        .with_register(RegisterRole::Address, layout.address.clone())?
        .with_register(RegisterRole::RoutingAncilla, layout.routing.clone())?
        .with_register(RegisterRole::Data, layout.data.clone())?
        .with_register(RegisterRole::QueryExtra, layout.query_extra.clone())?;

    let address: Vec<usize> = layout.address.clone().collect();
    let routing: Vec<usize> = layout.routing.clone().collect();
    let mut coupling = Circuit::new(width, "");
    push_coupling(&mut coupling, &address, &routing)?;
    let decoupling = coupling.inverse();

    let query = |c: &mut Circuit, bit: usize| -> Result<()> {
        let extras: Vec<usize> = layout.extras_for(bit).collect();
        push_query(
            c,
            &routing,
            layout.data.start + bit,
            &extras,
            &memory.column(bit),
        )
    };

    match mode {
        QramMode::PerBit => {
            for bit in 0..=n {
                c.append_circuit(&coupling)?;
                query(&mut c, bit)?;
                c.append_circuit(&decoupling)?;
            }
        }
        QramMode::SharedRouting => {
            c.append_circuit(&coupling)?;
            for bit in 0..=n {
                query(&mut c, bit)?;
            }
            c.append_circuit(&decoupling)?;
        }
    }
    Ok(c)
}

/// Closed-form resources of [`synth_qram`]; independent of memory contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QramPrediction {
    pub n: usize,
    pub q: usize,
    pub width: usize,
    pub n_routers: u64,
    pub coupling_t_depth: usize,
    pub query_t_depth: usize,
    pub t_depth: usize,
    pub t_count: usize,
}

pub fn predicted_qram_metrics(n: usize, q: usize, mode: QramMode) -> QramPrediction {
    let width = q + (1 << q) + (n + 1) + (n + 1) * (1 << (q - 1));
    let coupling_t_depth = 4 * (q - 1);
    let query_t_depth = 0;
    let rounds = match mode {
        QramMode::PerBit => n + 1,
        QramMode::SharedRouting => 1,
    };
    let t_depth = match mode {
        QramMode::PerBit => rounds * (2 * coupling_t_depth + query_t_depth),
        QramMode::SharedRouting => 2 * coupling_t_depth + (n + 1) * query_t_depth,
    };
    let coupling_t_count = 6 * n_routers(q) as usize;
    QramPrediction {
        n,
        q,
        width,
        n_routers: n_routers(q),
        coupling_t_depth,
        query_t_depth,
        t_depth,
        t_count: rounds * 2 * coupling_t_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn router_counts() {
        assert_eq!(n_routers(1), 0);
        assert_eq!(n_routers(2), 2);
        assert_eq!(n_routers(3), 6);
    }

    #[test]
    fn coupling_t_depth() {
        assert_eq!(synth_coupling(1).unwrap().t_depth().unwrap(), 0);
        assert_eq!(synth_coupling(3).unwrap().t_depth().unwrap(), 8);
    }

    #[test]
    fn empty_column_gives_empty_query() {
        let c = synth_query(2, &[false; 4]).unwrap();
        assert_eq!(c.gate_count(), 0);
        assert_eq!(c.t_depth().unwrap(), 0);
        assert_eq!(
            synth_query(2, &[true; 3]).unwrap_err(),
            Error::LengthMismatch {
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn widths() {
        assert_eq!(predicted_qram_metrics(1, 2, QramMode::PerBit).width, 12);
        assert_eq!(predicted_qram_metrics(3, 3, QramMode::PerBit).width, 31);
        assert_eq!(QramLayout::new(3, 3).width(), 31);
    }

    #[test]
    fn memory_table_validation() {
        let cell = |s: &str| s.parse::<BitString>().unwrap();
        assert!(MemoryTable::new(1, 1, vec![cell("00"), cell("10")]).is_ok());
        assert!(MemoryTable::new(1, 1, vec![cell("00")]).is_err());
        assert!(MemoryTable::new(1, 1, vec![cell("00"), cell("1")]).is_err());
        let json = r#"{"q":1,"n":1,"cells":["01","11"]}"#;
        let t = MemoryTable::from_json(json).unwrap();
        assert_eq!(t.column(0), vec![false, true]);
        assert!(synth_qram(2, 1, &t, QramMode::PerBit).is_err());
    }
}

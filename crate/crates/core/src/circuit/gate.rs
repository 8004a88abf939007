use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{c, phase, Real};

/// Index of a qubit within a circuit. Qubit 0 is the most significant bit of
/// basis-state indices everywhere in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId(pub usize);

impl QubitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Purpose of a qubit inside a circuit; fixed for the lifetime of the circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterRole {
    Address,
    RoutingAncilla,
    Data,
    Memory,
    QueryExtra,
    Algorithm,
}

impl RegisterRole {
    pub const ALL: [RegisterRole; 6] = [
        RegisterRole::Address,
        RegisterRole::RoutingAncilla,
        RegisterRole::Data,
        RegisterRole::Memory,
        RegisterRole::QueryExtra,
        RegisterRole::Algorithm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegisterRole::Address => "address",
            RegisterRole::RoutingAncilla => "routing",
            RegisterRole::Data => "data",
            RegisterRole::Memory => "memory",
            RegisterRole::QueryExtra => "query_extra",
            RegisterRole::Algorithm => "algorithm",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// Gate kinds of the Clifford+T library plus simulation macros.
///
/// `CRk { k, adjoint: false }` applies phase `e^{2 pi i / 2^k}` to `|11>`; the adjoint
/// applies the conjugate phase. `Rz(theta)` is `diag(e^{-i theta/2}, e^{i theta/2})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Cz,
    Toffoli,
    CRk { k: u32, adjoint: bool },
    Rz(f64),
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Rz(_) => 1,
            GateKind::Cnot | GateKind::Cz | GateKind::CRk { .. } => 2,
            GateKind::Toffoli => 3,
        }
    }

    pub fn is_t(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    /// Macros are exact for simulation but must be lowered before T metrics mean anything.
    pub fn is_macro(self) -> bool {
        matches!(
            self,
            GateKind::Toffoli | GateKind::CRk { .. } | GateKind::Rz(_)
        )
    }

    pub fn adjoint(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::CRk { k, adjoint } => GateKind::CRk {
                k,
                adjoint: !adjoint,
            },
            GateKind::Rz(theta) => GateKind::Rz(-theta),
            other => other,
        }
    }

    /// Histogram key; rotation parameters are dropped.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::CRk { adjoint: false, .. } => "CRK",
            GateKind::CRk { adjoint: true, .. } => "CRKDG",
            GateKind::Rz(_) => "RZ",
        }
    }

    /// Dense matrix on the gate's operands, row-major, operand 0 as the most
    /// significant local bit.
    pub fn local_matrix<T: Real>(self) -> Vec<Complex<T>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let diag = |d: &[Complex<T>]| {
            let n = d.len();
            let mut m = vec![zero; n * n];
            for (i, v) in d.iter().enumerate() {
                m[i * n + i] = *v;
            }
            m
        };
        let quarter = T::FRAC_PI_4();
        match self {
            GateKind::H => vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)],
            GateKind::X => vec![zero, one, one, zero],
            GateKind::Z => diag(&[one, -one]),
            GateKind::S => diag(&[one, c(0.0, 1.0)]),
            GateKind::Sdg => diag(&[one, c(0.0, -1.0)]),
            GateKind::T => diag(&[one, phase(quarter)]),
            GateKind::Tdg => diag(&[one, phase(-quarter)]),
            GateKind::Rz(theta) => {
                let half = T::lit(theta / 2.0);
                diag(&[phase(-half), phase(half)])
            }
            GateKind::Cz => diag(&[one, one, one, -one]),
            GateKind::CRk { k, adjoint } => {
                let mut angle = T::TAU() / T::lit(2f64.powi(k as i32));
                if adjoint {
                    angle = -angle;
                }
                diag(&[one, one, one, phase(angle)])
            }
            GateKind::Cnot => {
                let mut m = diag(&[one, one, zero, zero]);
                m[2 * 4 + 3] = one;
                m[3 * 4 + 2] = one;
                m
            }
            GateKind::Toffoli => {
                let mut m = diag(&[one, one, one, one, one, one, zero, zero]);
                m[6 * 8 + 7] = one;
                m[7 * 8 + 6] = one;
                m
            }
        }
    }
}

/// A gate applied to an ordered list of distinct operands.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    operands: Vec<QubitId>,
}

impl Gate {
    pub fn new(kind: GateKind, operands: &[usize]) -> Result<Self> {
        if operands.len() != kind.arity() {
            return Err(Error::Arity {
                kind: kind.name().to_string(),
                expected: kind.arity(),
                got: operands.len(),
            });
        }
        for (i, a) in operands.iter().enumerate() {
            if operands[..i].contains(a) {
                return Err(Error::DuplicateOperand(*a));
            }
        }
        Ok(Gate {
            kind,
            operands: operands.iter().copied().map(QubitId).collect(),
        })
    }

    fn raw(kind: GateKind, operands: &[usize]) -> Self {
        Self::new(kind, operands).expect("well-formed gate")
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, &[q])
    }
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, &[q])
    }
    pub fn z(q: usize) -> Self {
        Self::raw(GateKind::Z, &[q])
    }
    pub fn s(q: usize) -> Self {
        Self::raw(GateKind::S, &[q])
    }
    pub fn sdg(q: usize) -> Self {
        Self::raw(GateKind::Sdg, &[q])
    }
    pub fn t(q: usize) -> Self {
        Self::raw(GateKind::T, &[q])
    }
    pub fn tdg(q: usize) -> Self {
        Self::raw(GateKind::Tdg, &[q])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::Rz(theta), &[q])
    }
    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::raw(GateKind::Cnot, &[control, target])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::raw(GateKind::Cz, &[a, b])
    }
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::raw(GateKind::Toffoli, &[c1, c2, target])
    }
    pub fn crk(k: u32, control: usize, target: usize) -> Self {
        Self::raw(GateKind::CRk { k, adjoint: false }, &[control, target])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[QubitId] {
        &self.operands
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.operands.iter().map(|q| q.0)
    }

    pub fn acts_on(&self, q: usize) -> bool {
        self.qubits().any(|o| o == q)
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            kind: self.kind.adjoint(),
            operands: self.operands.clone(),
        }
    }

    /// Same gate with operands renamed through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            operands: self.operands.iter().map(|q| QubitId(map(q.0))).collect(),
        }
    }
}

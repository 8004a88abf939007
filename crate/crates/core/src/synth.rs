//! Gate-level synthesis: seven-T Toffoli, QFT / approximate QFT, the
//! Bernstein–Vazirani kernel, and a T-count model for lowered rotations.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, RegisterRole, DEFAULT_UNITARY_CAP};
use crate::error::{Error, Result};
use crate::num::Real;

/// Gate sequence of the seven-T Toffoli on controls `x`, `y` and target `z`.
///
/// The CCZ phase `(-1)^{xyz}` is written as `T^{x+y+z-(x^y)-(x^z)-(y^z)+(x^y^z)}`;
/// the seven parities are exposed on the wires by CNOTs and then uncomputed.
/// Appended with ASAP placement the sequence has T-depth 4:
/// `{T x, T y} {T z} {T† x^y, T x^y^z} {T† x^z, T† y^z}`.
fn toffoli_sequence(x: usize, y: usize, z: usize) -> Vec<Gate> {
    vec![
        Gate::h(z),
        Gate::t(x),
        Gate::t(y),
        Gate::t(z),
        Gate::cnot(x, y), // y = x^y
        Gate::cnot(y, z), // z = x^y^z
        Gate::tdg(y),
        Gate::t(z),
        Gate::cnot(x, z), // z = y^z
        Gate::cnot(z, y), // y = x^z
        Gate::tdg(y),
        Gate::tdg(z),
        Gate::cnot(z, y),
        Gate::cnot(x, z),
        Gate::cnot(y, z),
        Gate::cnot(x, y),
        Gate::h(z),
    ]
}

fn distinct3(a: usize, b: usize, c: usize) -> Result<()> {
    if a == b || a == c {
        Err(Error::DuplicateOperand(a))
    } else if b == c {
        Err(Error::DuplicateOperand(b))
    } else {
        Ok(())
    }
}

/// Clifford+T Toffoli with T-count 7 and T-depth 4, exactly equal to the
/// Toffoli matrix (no global phase). Width is `max(c1, c2, t) + 1`.
pub fn decompose_toffoli(c1: usize, c2: usize, target: usize) -> Result<Circuit> {
    distinct3(c1, c2, target)?;
    let width = c1.max(c2).max(target) + 1;
    let mut c = Circuit::new(width, "toffoli");
    c.extend_asap(toffoli_sequence(c1, c2, target))?;
    Ok(c)
}

/// Appends one stage of Toffolis that all share the control `shared`.
///
/// Each `(other, target)` pair gets the seven-T decomposition laid out on four
/// common T layers. The pure `shared` phase term `T` of every Toffoli acts on
/// the same wire, so the `m` copies are merged into the Clifford `T^m`
/// (which requires `m` even). Stage T-count is `6m`, T-depth 4.
pub(crate) fn push_shared_control_toffolis(
    circuit: &mut Circuit,
    shared: usize,
    pairs: &[(usize, usize)],
) -> Result<()> {
    let m = pairs.len();
    assert!(
        m % 2 == 0,
        "shared-control merge needs an even number of Toffolis"
    );
    let each = |f: &dyn Fn(usize, usize) -> Vec<Gate>| -> Vec<Gate> {
        pairs.iter().flat_map(|&(y, z)| f(y, z)).collect()
    };
    // T^m on the shared control.
    let merged: Vec<Gate> = match m % 8 {
        0 => vec![],
        2 => vec![Gate::s(shared)],
        4 => vec![Gate::z(shared)],
        _ => vec![Gate::sdg(shared)],
    };
    let mut first = each(&|y, z| vec![Gate::h(z), Gate::t(y)]);
    first.extend(merged);
    circuit.push_layer(first)?;
    circuit.push_layer(each(&|_, z| vec![Gate::t(z)]))?;
    for &(y, _) in pairs {
        circuit.push_layer([Gate::cnot(shared, y)])?;
    }
    circuit.push_layer(each(&|y, z| vec![Gate::cnot(y, z)]))?;
    circuit.push_layer(each(&|y, z| vec![Gate::tdg(y), Gate::t(z)]))?;
    for &(_, z) in pairs {
        circuit.push_layer([Gate::cnot(shared, z)])?;
    }
    circuit.push_layer(each(&|y, z| vec![Gate::cnot(z, y)]))?;
    circuit.push_layer(each(&|y, z| vec![Gate::tdg(y), Gate::tdg(z)]))?;
    circuit.push_layer(each(&|y, z| vec![Gate::cnot(z, y)]))?;
    for &(_, z) in pairs {
        circuit.push_layer([Gate::cnot(shared, z)])?;
    }
    circuit.push_layer(each(&|y, z| vec![Gate::cnot(y, z)]))?;
    for &(y, _) in pairs {
        circuit.push_layer([Gate::cnot(shared, y)])?;
    }
    circuit.push_layer(each(&|_, z| vec![Gate::h(z)]))?;
    Ok(())
}

/// Parameters of an `l`-qubit approximate QFT keeping rotations `CR_k` with `k <= beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AqftSpec {
    pub l: usize,
    pub beta: usize,
    pub delta_target: f64,
}

impl AqftSpec {
    pub fn new(l: usize, beta: usize) -> Result<Self> {
        Self::with_delta(l, beta, 1.0)
    }

    pub fn with_delta(l: usize, beta: usize, delta_target: f64) -> Result<Self> {
        if beta < 2 || beta > l {
            return Err(Error::BetaOutOfRange { l, beta });
        }
        if !(delta_target > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta_target must be positive, got {delta_target}"
            )));
        }
        Ok(AqftSpec {
            l,
            beta,
            delta_target,
        })
    }

    /// Cutoff `ceil(log2(l / delta))`, clamped into `2..=l`.
    pub fn for_precision(l: usize, delta_target: f64) -> Result<Self> {
        if l < 2 {
            return Err(Error::BetaOutOfRange { l, beta: 2 });
        }
        let raw = (l as f64 / delta_target).log2().ceil();
        let beta = if raw.is_finite() {
            (raw.max(2.0) as usize).min(l)
        } else {
            l
        };
        Self::with_delta(l, beta, delta_target)
    }

    /// Number of controlled rotations kept: `(2l - beta)(beta - 1) / 2`.
    pub fn crk_count(&self) -> usize {
        (2 * self.l - self.beta) * (self.beta - 1) / 2
    }
}

fn qft_with_cutoff(l: usize, cutoff: usize, label: String) -> Circuit {
    let mut c = Circuit::new(l, label)
        .with_register(RegisterRole::Algorithm, 0..l)
        .expect("qubits in range");
    for i in 0..l {
        c.extend_asap(std::iter::once(Gate::h(i)))
            .expect("in range");
        for j in (i + 1)..l {
            let k = j - i + 1;
            if k <= cutoff {
                c.extend_asap(std::iter::once(Gate::crk(k as u32, j, i)))
                    .expect("in range");
            }
        }
    }
    c
}

/// Textbook QFT on `l` qubits without the final qubit reversal.
///
/// With qubit 0 as the most significant bit the circuit maps `|j>` to
/// `2^{-l/2} sum_k e^{2 pi i jk / 2^l} |rev(k)>`, where `rev` reverses the
/// `l`-bit pattern of `k`.
pub fn synth_qft(l: usize) -> Circuit {
    qft_with_cutoff(l, l, format!("qft l={l}"))
}

/// Approximate QFT: the QFT circuit with every `CR_k`, `k > beta`, dropped.
/// `beta == l` reproduces [`synth_qft`] gate for gate.
pub fn synth_aqft(spec: &AqftSpec) -> Result<Circuit> {
    AqftSpec::with_delta(spec.l, spec.beta, spec.delta_target)?;
    let label = if spec.beta == spec.l {
        format!("qft l={}", spec.l)
    } else {
        format!("aqft l={} beta={}", spec.l, spec.beta)
    };
    Ok(qft_with_cutoff(spec.l, spec.beta, label))
}

/// Spectral-norm distance between the exact and the approximate QFT unitaries.
pub fn aqft_error<T: Real>(spec: &AqftSpec) -> Result<T> {
    if spec.l > DEFAULT_UNITARY_CAP {
        return Err(Error::WidthCapExceeded {
            width: spec.l,
            cap: DEFAULT_UNITARY_CAP,
        });
    }
    if spec.beta == spec.l {
        return Ok(T::zero());
    }
    let exact = synth_qft(spec.l).to_unitary::<T>()?;
    let approx = synth_aqft(spec)?.to_unitary::<T>()?;
    Ok(exact.spectral_distance(&approx))
}

/// T-cost model for lowering controlled rotations.
///
/// A controlled rotation costs three single-qubit `Rz` plus two CNOTs; each `Rz`
/// at precision `p` costs `ceil(c_rz * log2(1/p))` T gates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationCostModel {
    pub c_rz: f64,
    /// `None` selects `delta / (3 * crk_count)`.
    pub rz_precision: Option<f64>,
}

impl Default for RotationCostModel {
    fn default() -> Self {
        RotationCostModel {
            c_rz: 3.0,
            rz_precision: None,
        }
    }
}

impl RotationCostModel {
    pub fn new(c_rz: f64, rz_precision: Option<f64>) -> Result<Self> {
        if !(c_rz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "c_rz must be positive, got {c_rz}"
            )));
        }
        if let Some(p) = rz_precision {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "rz_precision must lie in (0,1), got {p}"
                )));
            }
        }
        Ok(RotationCostModel { c_rz, rz_precision })
    }

    pub fn precision_for(&self, spec: &AqftSpec) -> f64 {
        self.rz_precision
            .unwrap_or_else(|| spec.delta_target / (3.0 * spec.crk_count().max(1) as f64))
    }

    pub fn t_per_rotation(&self, precision: f64) -> u64 {
        (self.c_rz * (1.0 / precision).log2()).ceil().max(0.0) as u64
    }
}

/// Estimated T-count of the lowered AQFT: `crk_count * 3 * t_per_rotation`.
pub fn aqft_t_count_estimate(spec: &AqftSpec, model: &RotationCostModel) -> u64 {
    let per = model.t_per_rotation(model.precision_for(spec));
    spec.crk_count() as u64 * 3 * per
}

/// One layer of `H` on `qubits` of a `width`-qubit circuit.
pub fn hadamard_layer(width: usize, qubits: impl IntoIterator<Item = usize>) -> Circuit {
    let mut c = Circuit::new(width, "h layer");
    c.push_layer(qubits.into_iter().map(Gate::h))
        .expect("disjoint qubits in range");
    c
}

/// `H` on all `n + 1` qubits in a single layer.
pub fn synth_bv_kernel(n: usize) -> Circuit {
    let mut c = Circuit::new(n + 1, format!("bv n={n}"))
        .with_register(RegisterRole::Algorithm, 0..=n)
        .expect("qubits in range");
    c.push_layer((0..=n).map(Gate::h)).expect("disjoint");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn toffoli_counts() {
        let c = decompose_toffoli(0, 1, 2).unwrap();
        assert_eq!(c.t_count().unwrap(), 7);
        assert_eq!(c.t_depth().unwrap(), 4);
        assert_eq!(c.inverse().t_count().unwrap(), 7);
        assert_eq!(
            decompose_toffoli(0, 1, 0).unwrap_err(),
            Error::DuplicateOperand(0)
        );
    }

    #[test]
    fn qft_gate_counts() {
        let q1 = synth_qft(1);
        assert_eq!(q1.metrics().count("H"), 1);
        assert_eq!(q1.metrics().count("CRK"), 0);
        assert_eq!(synth_qft(4).metrics().count("CRK"), 6);
    }

    #[test]
    fn aqft_counts_and_range() {
        let count = |l, b| {
            synth_aqft(&AqftSpec::new(l, b).unwrap())
                .unwrap()
                .metrics()
                .count("CRK")
        };
        assert_eq!(count(4, 3), 5);
        assert_eq!(count(5, 2), 4);
        assert_eq!(count(4, 4), 6);
        assert_eq!(
            AqftSpec::new(4, 5).unwrap_err(),
            Error::BetaOutOfRange { l: 4, beta: 5 }
        );
        assert!(AqftSpec::new(4, 1).is_err());
        assert_eq!(
            synth_aqft(&AqftSpec::new(6, 6).unwrap()).unwrap(),
            synth_qft(6)
        );
    }

    #[test]
    fn cost_model_examples() {
        let spec = AqftSpec::new(4, 3).unwrap();
        let model = RotationCostModel::new(3.0, Some(2f64.powi(-10))).unwrap();
        assert_eq!(aqft_t_count_estimate(&spec, &model), 450);
        let coarse = RotationCostModel::new(3.0, Some(0.5)).unwrap();
        assert_eq!(coarse.t_per_rotation(0.5), 3);
        assert!(RotationCostModel::new(0.0, None).is_err());
        assert!(RotationCostModel::new(3.0, Some(1.0)).is_err());
    }

    #[test]
    fn precision_cutoff_clamps() {
        assert_eq!(AqftSpec::for_precision(16, 1.0).unwrap().beta, 4);
        assert_eq!(AqftSpec::for_precision(4, 1e-9).unwrap().beta, 4);
        assert_eq!(AqftSpec::for_precision(8, 100.0).unwrap().beta, 2);
    }

    #[test]
    fn bv_kernel_is_one_layer_of_h() {
        let c = synth_bv_kernel(2);
        assert_eq!(c.layers().len(), 1);
        assert_eq!(c.gate_count(), 3);
        assert!(c.gates().all(|g| g.kind() == GateKind::H));
        assert_eq!(c.t_depth().unwrap(), 0);
    }
}

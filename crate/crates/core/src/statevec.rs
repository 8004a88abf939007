//! Dense state-vector simulator.
//!
//! Basis index bit `width - 1 - q` holds qubit `q`, i.e. qubit 0 is the most
//! significant bit. Gates are applied by per-kind kernels; measurement draws
//! from a caller-provided RNG so runs are reproducible from their stream.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, QubitId};
use crate::error::{Error, Result};
use crate::num::{phase, Real};

/// Largest register whose marginal [`StateVector::distribution`] will tabulate.
pub const DISTRIBUTION_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real = f64> {
    width: usize,
    amps: Vec<Complex<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: QubitId,
    pub outcome: bool,
    /// Pre-collapse probability of `outcome`.
    pub probability: f64,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>` on `width` qubits.
    pub fn new(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << width];
        amps[index] = Complex::new(T::one(), T::zero());
        StateVector { width, amps }
    }

    /// Wraps raw amplitudes; the caller is responsible for normalisation.
    pub fn from_amplitudes(width: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != 1 << width {
            return Err(Error::WidthMismatch {
                left: amps.len(),
                right: 1 << width,
            });
        }
        Ok(StateVector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.width - 1 - q)
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let ops: Vec<usize> = gate.qubits().collect();
        match gate.kind() {
            GateKind::H => self.hadamard(ops[0]),
            GateKind::X => {
                let b = self.bit(ops[0]);
                self.swap_where(b, 0);
            }
            GateKind::Z => self.phase_where(self.bit(ops[0]), Complex::new(-T::one(), T::zero())),
            GateKind::S => self.phase_where(self.bit(ops[0]), Complex::new(T::zero(), T::one())),
            GateKind::Sdg => self.phase_where(self.bit(ops[0]), Complex::new(T::zero(), -T::one())),
            GateKind::T => self.phase_where(self.bit(ops[0]), phase(T::FRAC_PI_4())),
            GateKind::Tdg => self.phase_where(self.bit(ops[0]), phase(-T::FRAC_PI_4())),
            GateKind::Rz(theta) => {
                let b = self.bit(ops[0]);
                let half = T::lit(theta / 2.0);
                let (lo, hi) = (phase(-half), phase(half));
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a = *a * if i & b != 0 { hi } else { lo };
                }
            }
            GateKind::Cnot => {
                let (c, t) = (self.bit(ops[0]), self.bit(ops[1]));
                self.swap_where(t, c);
            }
            GateKind::Cz => self.phase_where(
                self.bit(ops[0]) | self.bit(ops[1]),
                Complex::new(-T::one(), T::zero()),
            ),
            GateKind::CRk { k, adjoint } => {
                let mut angle = T::TAU() / T::lit(2f64.powi(k as i32));
                if adjoint {
                    angle = -angle;
                }
                self.phase_where(self.bit(ops[0]) | self.bit(ops[1]), phase(angle));
            }
            GateKind::Toffoli => {
                let ctrl = self.bit(ops[0]) | self.bit(ops[1]);
                self.swap_where(self.bit(ops[2]), ctrl);
            }
        }
    }

    fn hadamard(&mut self, q: usize) {
        let b = self.bit(q);
        let s = T::FRAC_1_SQRT_2();
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = (a0 + a1) * s;
                self.amps[i | b] = (a0 - a1) * s;
            }
        }
    }

    /// Swaps amplitude pairs differing in `target` where every bit of `controls` is set.
    fn swap_where(&mut self, target: usize, controls: usize) {
        for i in 0..self.amps.len() {
            if i & target == 0 && i & controls == controls {
                self.amps.swap(i, i | target);
            }
        }
    }

    fn phase_where(&mut self, mask: usize, p: Complex<T>) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = *a * p;
            }
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.width {
            return Err(Error::WidthMismatch {
                left: circuit.width(),
                right: self.width,
            });
        }
        for g in circuit.gates() {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// Marginal probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> T {
        let b = self.bit(q);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & b != 0)
            .map(|(_, a)| a.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
    }

    /// Projects qubit `q` onto `outcome` and renormalises. Returns the
    /// pre-collapse probability of that outcome.
    pub fn collapse(&mut self, q: usize, outcome: bool) -> T {
        let b = self.bit(q);
        let p1 = self.prob_one(q);
        let p = if outcome { p1 } else { T::one() - p1 };
        let scale = if p > T::zero() {
            T::one() / p.sqrt()
        } else {
            T::zero()
        };
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & b != 0) == outcome {
                *a = *a * scale;
            } else {
                *a = Complex::new(T::zero(), T::zero());
            }
        }
        p
    }

    /// Projective Z measurement of `q` with collapse.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> MeasurementRecord {
        let p1 = self.prob_one(q).to_f64().unwrap_or(0.0);
        let outcome = rng.random::<f64>() < p1;
        let p = self.collapse(q, outcome);
        MeasurementRecord {
            qubit: QubitId(q),
            outcome,
            probability: p.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact marginal over `qubits`; entry `x` reads `qubits[0]` as the most
    /// significant bit of `x`.
    pub fn distribution(&self, qubits: &[usize]) -> Result<Vec<T>> {
        if qubits.len() > DISTRIBUTION_CAP {
            return Err(Error::TooManyQubits {
                requested: qubits.len(),
                cap: DISTRIBUTION_CAP,
            });
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.width) {
            return Err(Error::OperandOutOfRange {
                index: q,
                width: self.width,
            });
        }
        let bits: Vec<usize> = qubits.iter().map(|&q| self.bit(q)).collect();
        let k = qubits.len();
        let mut out = vec![T::zero(); 1 << k];
        for (i, a) in self.amps.iter().enumerate() {
            let mut x = 0;
            for (j, b) in bits.iter().enumerate() {
                if i & b != 0 {
                    x |= 1 << (k - 1 - j);
                }
            }
            out[x] = out[x] + a.norm_sqr();
        }
        Ok(out)
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |x, y| x + y)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Relabels basis states: the amplitude at index `i` moves to `perm(i)`.
    /// `perm` must be a bijection on `0..2^width`.
    pub fn permute_basis(&mut self, perm: impl Fn(usize) -> usize) {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        let mut hit = vec![false; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let j = perm(i);
            assert!(!hit[j], "basis relabelling is not a bijection");
            hit[j] = true;
            out[j] = *a;
        }
        self.amps = out;
    }

    /// State of `keep` (in the given order) assuming every other qubit is `|0>`.
    ///
    /// Fails with [`Error::AncillaNotRestored`] if some discarded qubit carries
    /// more than `tol` probability of reading 1.
    pub fn restrict(&self, keep: &[usize], tol: f64) -> Result<StateVector<T>> {
        for q in 0..self.width {
            if keep.contains(&q) {
                continue;
            }
            let p = self.prob_one(q).to_f64().unwrap_or(f64::NAN);
            if !(p <= tol) {
                return Err(Error::AncillaNotRestored {
                    qubit: q,
                    probability: p,
                });
            }
        }
        let k = keep.len();
        let bits: Vec<usize> = keep.iter().map(|&q| self.bit(q)).collect();
        let amps = (0..1usize << k)
            .map(|x| {
                let idx: usize = (0..k)
                    .filter(|j| x & (1 << (k - 1 - j)) != 0)
                    .map(|j| bits[j])
                    .sum();
                self.amps[idx]
            })
            .collect();
        Ok(StateVector { width: k, amps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Placement;
    use crate::rng::stream_rng;

    fn circuit(width: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(width, "");
        c.extend_asap(gates).unwrap();
        c
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::<f64>::new(1);
        s.apply_circuit(&circuit(1, vec![Gate::h(0)])).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0).re - r).abs() < 1e-15);
        assert!((s.amplitude(1).re - r).abs() < 1e-15);
    }

    #[test]
    fn toffoli_flips_target() {
        let mut s = StateVector::<f64>::basis(3, 0b110);
        s.apply_circuit(&circuit(3, vec![Gate::toffoli(0, 1, 2)]))
            .unwrap();
        assert_eq!(s.amplitude(0b111).re, 1.0);
    }

    #[test]
    fn width_mismatch() {
        let mut s = StateVector::<f64>::new(2);
        assert!(matches!(
            s.apply_circuit(&Circuit::new(3, "")),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn measure_plus_state() {
        let mut ones = 0;
        for shot in 0..2000 {
            let mut s = StateVector::<f64>::new(1);
            s.apply_circuit(&circuit(1, vec![Gate::h(0)])).unwrap();
            let rec = s.measure(0, &mut stream_rng(7, shot));
            assert!((rec.probability - 0.5).abs() < 1e-12);
            ones += rec.outcome as usize;
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert!((ones as f64 - 1000.0).abs() < 3.0 * (2000.0f64 * 0.25).sqrt());
    }

    #[test]
    fn measuring_product_state_leaves_other_qubit() {
        let mut s = StateVector::<f64>::new(2);
        s.apply_circuit(&circuit(2, vec![Gate::h(1)])).unwrap();
        let before = s.clone();
        let rec = s.measure(0, &mut stream_rng(1, 0));
        assert!(!rec.outcome);
        assert!((rec.probability - 1.0).abs() < 1e-15);
        assert!((s.fidelity(&before) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distributions() {
        let s = StateVector::<f64>::new(2);
        assert_eq!(s.distribution(&[0, 1]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        let mut u = StateVector::<f64>::new(2);
        u.apply_circuit(&circuit(2, vec![Gate::h(0), Gate::h(1)]))
            .unwrap();
        for p in u.distribution(&[1, 0]).unwrap() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        let big = StateVector::<f64>::new(21);
        assert!(matches!(
            big.distribution(&(0..21).collect::<Vec<_>>()),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn distribution_orders_by_listed_qubits() {
        let s = StateVector::<f64>::basis(2, 0b10);
        assert_eq!(s.distribution(&[1, 0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn restrict_detects_dirty_ancilla() {
        let mut s = StateVector::<f64>::new(2);
        s.apply_gate(&Gate::x(1));
        assert!(matches!(
            s.restrict(&[0], 1e-12),
            Err(Error::AncillaNotRestored { qubit: 1, .. })
        ));
        let r = s.restrict(&[1], 1e-12).unwrap();
        assert_eq!(r.amplitude(1).re, 1.0);
    }

    #[test]
    fn single_precision_state() {
        let mut c = Circuit::new(2, "");
        c.append_gate(Gate::h(0), Placement::Asap).unwrap();
        c.append_gate(Gate::crk(3, 0, 1), Placement::Asap).unwrap();
        let mut s = StateVector::<f32>::new(2);
        s.apply_circuit(&c).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-6);
    }
}

use nalgebra::DMatrix;
use num_complex::Complex;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::num::Real;

pub const DEFAULT_UNITARY_CAP: usize = 12;

/// Dense `2^w x 2^w` matrix stored column by column.
///
/// Built gate by gate from each gate's local matrix; this path is deliberately
/// independent of the specialised kernels in [`crate::statevec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real> {
    width: usize,
    dim: usize,
    cols: Vec<Complex<T>>,
}

/// Applies a `2^k x 2^k` row-major `local` matrix on `operands` of a state vector.
pub(crate) fn apply_local<T: Real>(
    amps: &mut [Complex<T>],
    width: usize,
    operands: &[usize],
    local: &[Complex<T>],
) {
    let k = operands.len();
    let kdim = 1usize << k;
    let bits: Vec<usize> = operands
        .iter()
        .map(|&q| 1usize << (width - 1 - q))
        .collect();
    let mask: usize = bits.iter().sum();
    let offsets: Vec<usize> = (0..kdim)
        .map(|l| {
            (0..k)
                .filter(|i| l & (1 << (k - 1 - i)) != 0)
                .map(|i| bits[i])
                .sum()
        })
        .collect();
    let mut old = vec![Complex::new(T::zero(), T::zero()); kdim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            old[l] = amps[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (m, v) in old.iter().enumerate() {
                acc = acc + local[row * kdim + m] * v;
            }
            amps[base | off] = acc;
        }
    }
}

impl<T: Real> Unitary<T> {
    pub fn identity(width: usize) -> Self {
        let dim = 1usize << width;
        let mut cols = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            cols[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Unitary { width, dim, cols }
    }

    pub fn from_circuit(circuit: &Circuit, cap: usize) -> Result<Self> {
        if circuit.width() > cap {
            return Err(Error::WidthCapExceeded {
                width: circuit.width(),
                cap,
            });
        }
        let mut u = Self::identity(circuit.width());
        for g in circuit.gates() {
            u.left_apply(g);
        }
        Ok(u)
    }

    /// `self <- G * self`.
    pub fn left_apply(&mut self, gate: &Gate) {
        let local = gate.kind().local_matrix::<T>();
        let ops: Vec<usize> = gate.qubits().collect();
        let dim = self.dim;
        for col in self.cols.chunks_mut(dim) {
            apply_local(col, self.width, &ops, &local);
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.cols[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[Complex<T>] {
        &self.cols[col * self.dim..(col + 1) * self.dim]
    }

    /// Builds a matrix from a row-major closure.
    pub fn from_fn(width: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let dim = 1usize << width;
        let mut cols = Vec::with_capacity(dim * dim);
        for c in 0..dim {
            for r in 0..dim {
                cols.push(f(r, c));
            }
        }
        Unitary { width, dim, cols }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.width, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let dim = self.dim;
        let mut cols = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for c in 0..dim {
            let out = &mut cols[c * dim..(c + 1) * dim];
            for (k, b) in rhs.column(c).iter().enumerate() {
                if b.re == T::zero() && b.im == T::zero() {
                    continue;
                }
                for (o, a) in out.iter_mut().zip(self.column(k)) {
                    *o = *o + a * b;
                }
            }
        }
        Unitary {
            width: self.width,
            dim,
            cols,
        }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim];
        for (k, b) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.column(k)) {
                *o = *o + a * b;
            }
        }
        out
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Max-norm of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> T {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Self::identity(self.width))
    }

    /// Spectral norm of `self - other`, computed by SVD in double precision.
    pub fn spectral_distance(&self, other: &Self) -> T {
        let dim = self.dim;
        let m = DMatrix::<Complex<f64>>::from_fn(dim, dim, |r, c| {
            let d = self.get(r, c) - other.get(r, c);
            Complex::new(
                d.re.to_f64().unwrap_or(f64::NAN),
                d.im.to_f64().unwrap_or(f64::NAN),
            )
        });
        let sv = m.singular_values();
        T::lit(sv.iter().copied().fold(0.0, f64::max))
    }
}

//! Clifford+T toolkit for the quantum noisy binary linear problem algorithm.
//!
//! The crate covers a layered circuit IR, synthesis of the Toffoli, QFT/AQFT
//! and bucket-brigade QRAM circuits, a dense state-vector simulator, the
//! end-to-end sampling pipeline and the analytic success/repetition bounds.
//! Numerical code is generic over [`Real`] (`f32`/`f64`) and exact
//! probabilities over [`ExactScalar`]; the aliases below fix common choices.

pub mod bits;
pub mod bounds;
pub mod circuit;
pub mod error;
pub mod nblp;
pub mod num;
pub mod qram;
pub mod rng;
pub mod statevec;
pub mod synth;

pub use bits::BitString;
pub use circuit::{
    Circuit, Gate, GateKind, Layer, Placement, QubitId, RegisterRole, ResourceMetrics,
};
pub use error::{Error, Result};
pub use num::{ExactScalar, Real};
pub use statevec::{MeasurementRecord, StateVector};

pub type StateVectorF64 = statevec::StateVector<f64>;
pub type StateVectorF32 = statevec::StateVector<f32>;
pub type UnitaryF64 = circuit::Unitary<f64>;
pub type UnitaryF32 = circuit::Unitary<f32>;
/// Exact rational used for closed-form probabilities.
pub type ExactProb = num_rational::Ratio<i128>;

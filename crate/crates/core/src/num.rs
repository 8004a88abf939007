//! Scalar traits shared by the simulator, the unitary builder and the bound formulas.
//!
//! Floating code is written against [`Real`] (implemented for `f32` and `f64`).
//! Closed-form probabilities that are rational numbers by construction are written
//! against [`ExactScalar`], which additionally admits `num_rational::Ratio`.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Lossy conversion from a count.
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Field-like scalar able to hold a closed-form probability exactly or approximately.
pub trait ExactScalar: Num + FromPrimitive + Clone + PartialOrd + Debug {}

impl<T> ExactScalar for T where T: Num + FromPrimitive + Clone + PartialOrd + Debug {}

/// `e^{i theta}` in the requested precision.
pub fn phase<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `2^k` as a scalar, for `k` possibly beyond `i32`-sized `powi` usefulness.
pub fn pow2<T: Real>(k: i32) -> T {
    T::lit(2.0).powi(k)
}

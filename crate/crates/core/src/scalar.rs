//! Scalar abstraction: the numeric kernel is generic over the real field.
//!
//! Everything downstream works with `Complex<T>` for any `T: Scalar`; the
//! crate root pins `f64` aliases for the shipped harness and CLI.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar the toolkit is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Send
    + Sync
    + Debug
    + Display
    + Default
    + 'static
{
    /// Lift a literal into the scalar type. Panics only on non-finite input,
    /// which never occurs for the fixed tolerances this is used with.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in scalar")
    }

    /// A validity tolerance calibrated for f64, widened when the scalar's
    /// own epsilon dominates (f32). At f64 this returns `base` unchanged.
    fn tol(base: f64) -> Self {
        Self::real(base).max(Self::epsilon() * Self::real(128.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic scalar.
pub type C<T> = Complex<T>;

pub fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    Complex::new(T::real(re), T::real(im))
}

pub fn c_zero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn c_one<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// e^{iθ}
pub fn phase<T: Scalar>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Base-2 logarithm with the 0·log 0 = 0 convention used by every entropy here.
pub fn xlog2x<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        x * x.log2()
    } else {
        T::zero()
    }
}

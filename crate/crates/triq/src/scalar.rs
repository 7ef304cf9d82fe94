//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is written against [`Scalar`] so the same code
//! runs in `f64` (the default everywhere precision matters) and `f32`.
//! Tolerances are specified as `f64` literals and converted on use.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the core math is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

/// Complex number over a [`Scalar`].
pub type C<T> = Complex<T>;

/// Converts an `f64` constant (tolerance, coefficient) into `T`.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Complex zero.
#[inline]
pub fn czero<T: Scalar>() -> C<T> {
    C::new(T::zero(), T::zero())
}

/// Complex one.
#[inline]
pub fn cone<T: Scalar>() -> C<T> {
    C::new(T::one(), T::zero())
}

/// `x` as a purely real complex number.
#[inline]
pub fn creal<T: Scalar>(x: T) -> C<T> {
    C::new(x, T::zero())
}

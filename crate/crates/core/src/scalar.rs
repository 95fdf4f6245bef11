//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the kernels, inverters and cost functionals run on.
///
/// Implemented for `f32` and `f64`. Accuracy targets quoted in the docs
/// (e.g. `1e-12` for [`erfcx`](crate::laplace::erfcx)) refer to `f64`; in `f32`
/// the same routines converge to single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

/// Hash key for memoizing functions of a scalar argument.
#[inline]
pub(crate) fn key<T: Real>(x: T) -> u64 {
    x.to_f64().unwrap_or(f64::NAN).to_bits()
}

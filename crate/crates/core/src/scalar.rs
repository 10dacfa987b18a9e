//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are expressed in `f64` and converted with
/// [`lit`]; they are tuned for `f64`; `f32` instantiations are meant for
/// cheap previews and loose-tolerance sweeps.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

/// `i·x` for a real `x`.
#[inline]
pub(crate) fn imag<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

#[inline]
pub(crate) fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn expm1<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let half_im = z.im / two;
    let s = half_im.sin();
    // e^a cos b - 1 = expm1(a) cos b - 2 sin^2(b/2)
    let re = z.re.exp_m1() * z.im.cos() - two * s * s;
    let im = z.re.exp() * z.im.sin();
    Complex::new(re, im)
}

/// Principal logarithm, `Im ln z ∈ (-π, π]`.
#[inline]
pub(crate) fn ln<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.norm().ln(), z.im.atan2(z.re))
}

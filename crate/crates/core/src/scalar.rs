//! Floating-point abstraction shared by the generic numerical layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast, ToPrimitive};

/// Real floating-point type the symbol, quadrature and harmonic layers are generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable")
}

/// `n!` as a floating-point number.
pub fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * from_usize::<T>(i))
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic_number<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::zero(), |acc, i| acc + T::one() / from_usize::<T>(i))
}

/// Surface measure of the unit sphere in `R^n`.
pub fn sphere_area<T: Scalar>(n: usize) -> T {
    // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2), via the two-step recurrence.
    let pi = T::PI();
    match n {
        0 => T::zero(),
        1 => lit(2.0),
        2 => lit::<T>(2.0) * pi,
        _ => sphere_area::<T>(n - 2) * lit::<T>(2.0) * pi / from_usize::<T>(n - 2),
    }
}

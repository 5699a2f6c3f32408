//! Real scalar abstraction.
//!
//! Algebra coefficients are `Complex<T>` for any `T: Real`; the crate root
//! exposes `f64` aliases for everyday use.

use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point type backing the real and imaginary parts of coefficients.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + NumAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant; lossy for narrower types.
    #[inline]
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant representable")
    }

    #[inline]
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex coefficient over `T`.
pub type Scalar<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_convert() {
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::of(0.5), 0.5f32);
        assert_eq!(f32::of_usize(7).as_f64(), 7.0);
    }
}

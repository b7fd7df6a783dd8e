//! Coefficient fields.
//!
//! Two fields are supported: exact rationals (`Rational`, always kept in
//! lowest terms by `num-rational`) and double-precision complex numbers
//! (`c64`). Generic code is written against [`Scalar`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

pub use faer::c64;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// |x|^2 as a double. For rationals this is a rounded value.
    fn modulus_sq(&self) -> f64;

    fn to_c64(&self) -> c64;

    fn from_i64(v: i64) -> Self;

    /// True for fields where `is_zero` is an exact test.
    const EXACT: bool;
}

impl Scalar for Rational {
    fn modulus_sq(&self) -> f64 {
        let v = self.to_f64().unwrap_or(f64::INFINITY);
        v * v
    }

    fn to_c64(&self) -> c64 {
        c64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }

    const EXACT: bool = true;
}

impl Scalar for c64 {
    fn modulus_sq(&self) -> f64 {
        self.norm_sqr()
    }

    fn to_c64(&self) -> c64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        c64::new(v as f64, 0.0)
    }

    const EXACT: bool = false;
}

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let a = rational(6, -4);
        assert_eq!(*a.numer(), (-3).into());
        assert_eq!(*a.denom(), 2.into());
    }

    #[test]
    fn complex_modulus() {
        assert_eq!(c64::new(3.0, 4.0).modulus_sq(), 25.0);
        assert_eq!(rational(1, 2).modulus_sq(), 0.25);
    }
}

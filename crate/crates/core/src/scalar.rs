//! Field abstraction shared by the floating and exact kernels.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// A real field the matrix routines can run over.
///
/// Implemented for `f64` (the floating kernel) and [`Rational`] (the exact
/// kernel). Elimination routines pick pivots by [`Scalar::magnitude`] and
/// treat a pivot as unusable when [`Scalar::is_negligible`] says so.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> f64;

    /// `true` when `self` should be treated as a zero pivot relative to `scale`.
    fn is_negligible(&self, scale: f64) -> bool;

    fn is_finite(&self) -> bool {
        true
    }

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        libm::fabs(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        !f64::is_finite(*self) || libm::fabs(*self) <= f64::EPSILON * scale.max(f64::MIN_POSITIVE)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Correctly rounded `f64` value of a big rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Exact rational equal to the given finite `f64`.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    BigRational::from_float(v)
}

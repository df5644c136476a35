//! Minimal field abstraction shared by scalars, rational functions and
//! function-field elements, so formulas (the PVI residual, the x-formula,
//! the b-entry formulas) can be written once and evaluated both at sample
//! points and as identities in a function field.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait FieldScalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero (or a zero divisor in a
    /// malformed tower).
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let k = n.unsigned_abs();
        for _ in 0..k {
            acc = acc + one.clone();
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let d = Self::from_i64(den);
        Self::from_i64(num) * d.try_inv().expect("nonzero denominator")
    }

    /// Embed an arbitrary rational constant.
    fn from_rat(r: &BigRational) -> Self {
        use num_traits::ToPrimitive;
        let n = r.numer().to_i64().expect("numerator fits i64");
        let d = r.denom().to_i64().expect("denominator fits i64");
        Self::from_ratio(n, d)
    }

    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    fn div(&self, rhs: &Self) -> Self {
        self.clone() * rhs.inv()
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl FieldScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn from_rat(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Convenience constructor for `BigRational` literals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

//! Rational functions in one variable: reduced fractions of polynomials
//! with a monic denominator.  These are themselves a `FieldScalar`, so
//! matrices and the generic PVI formulas work over them directly.

use crate::field::FieldScalar;
use crate::poly::{Poly, PolyGcd};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn<S: PolyGcd> {
    pub num: Poly<S>,
    pub den: Poly<S>,
}

impl<S: PolyGcd> RatFn<S> {
    /// Construct and normalize: cancel the gcd, make the denominator monic.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divexact(&g), den.divexact(&g))
        };
        let lead_inv = den.lc().inv();
        num = num.scale(&lead_inv);
        den = den.scale(&lead_inv);
        RatFn { num, den }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(s: S) -> Self {
        Self::from_poly(Poly::constant(s))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn is_zero_fn(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().map_or(true, |d| d == 0) && self.den.degree() == Some(0)
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        RatFn::new(n, self.den.clone() * self.den.clone())
    }

    pub fn eval(&self, x: &S) -> Option<S> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) * d.inv())
    }

    /// Substitute a rational function for the variable.
    pub fn compose(&self, g: &RatFn<S>) -> RatFn<S> {
        let mut acc = RatFn::from_poly(Poly::zero());
        for c in self.num.c.iter().rev() {
            acc = acc * g.clone() + RatFn::constant(c.clone());
        }
        let mut accd = RatFn::from_poly(Poly::zero());
        for c in self.den.c.iter().rev() {
            accd = accd * g.clone() + RatFn::constant(c.clone());
        }
        acc * accd.inv()
    }

    /// max(deg num, deg den): the degree of the induced map P1 → P1.
    pub fn map_degree(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }
}

impl<S: PolyGcd> Add for RatFn<S> {
    type Output = RatFn<S>;
    fn add(self, rhs: Self) -> Self {
        RatFn::new(
            self.num.clone() * rhs.den.clone() + rhs.num.clone() * self.den.clone(),
            self.den * rhs.den,
        )
    }
}
impl<S: PolyGcd> Sub for RatFn<S> {
    type Output = RatFn<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
impl<S: PolyGcd> Neg for RatFn<S> {
    type Output = RatFn<S>;
    fn neg(self) -> Self {
        RatFn {
            num: -self.num,
            den: self.den,
        }
    }
}
impl<S: PolyGcd> Mul for RatFn<S> {
    type Output = RatFn<S>;
    fn mul(self, rhs: Self) -> Self {
        // cross-cancel before multiplying to keep degrees down
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = if g1.degree() == Some(0) {
            self.num
        } else {
            self.num.divexact(&g1)
        };
        let d2 = if g1.degree() == Some(0) {
            rhs.den
        } else {
            rhs.den.divexact(&g1)
        };
        let n2 = if g2.degree() == Some(0) {
            rhs.num
        } else {
            rhs.num.divexact(&g2)
        };
        let d1 = if g2.degree() == Some(0) {
            self.den
        } else {
            self.den.divexact(&g2)
        };
        RatFn::new(n1 * n2, d1 * d2)
    }
}

impl<S: PolyGcd> FieldScalar for RatFn<S> {
    fn zero() -> Self {
        RatFn::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_fn()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero_fn() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_i64(n: i64) -> Self {
        RatFn::constant(S::from_i64(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        RatFn::constant(S::from_ratio(num, den))
    }
    fn from_rat(r: &num_rational::BigRational) -> Self {
        RatFn::constant(S::from_rat(r))
    }
}

impl<S: PolyGcd + fmt::Display> fmt::Display for RatFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<S: PolyGcd> fmt::Debug for RatFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RatFn[{:?}/{:?}]",
            self.num.degree(),
            self.den.degree()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type R = RatFn<BigRational>;

    fn poly(v: &[i64]) -> Poly<BigRational> {
        Poly::from_ints(v)
    }

    #[test]
    fn normalization_is_idempotent_and_monic() {
        let r = R::new(poly(&[2, 2]), poly(&[0, 4])); // (2s+2)/(4s) = (s/2 + 1/2)/s
        let r2 = R::new(r.num.clone(), r.den.clone());
        assert_eq!(r, r2);
        assert!(r.den.lc() == BigRational::from_integer(1.into()));
    }

    #[test]
    fn field_ops() {
        let x = R::x();
        let one = R::one();
        let y = (x.clone() - one.clone()) * (x.clone() + one.clone());
        let z = x.clone() * x.clone() - one.clone();
        assert_eq!(y, z);
        let q = y.div(&z);
        assert_eq!(q, R::one());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/ds (s^2/(s+1)) = (s^2 + 2s)/(s+1)^2
        let r = R::new(poly(&[0, 0, 1]), poly(&[1, 1]));
        let d = r.derivative();
        assert_eq!(d, R::new(poly(&[0, 2, 1]), poly(&[1, 2, 1])));
    }
}

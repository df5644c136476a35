//! Function field of a hyperelliptic curve u² = f(s): elements a + b·u
//! with a, b rational functions of s.  The degenerate case b ≡ 0 over a
//! placeholder curve doubles as the function field of a rational line, so
//! genus-zero and elliptic solutions share one code path.

use crate::field::FieldScalar;
use crate::poly::{Poly, PolyGcd};
use crate::ratfn::RatFn;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurveData<S: PolyGcd> {
    /// u² = f(s); f must be squarefree for the derivative rule to be valid.
    pub f: Poly<S>,
}

#[derive(Clone)]
pub struct CurveFn<S: PolyGcd> {
    pub a: RatFn<S>,
    pub b: RatFn<S>,
    pub curve: Arc<CurveData<S>>,
}

impl<S: PolyGcd> CurveFn<S> {
    pub fn line_curve() -> Arc<CurveData<S>> {
        Arc::new(CurveData { f: Poly::x() })
    }

    pub fn curve_from(f: Poly<S>) -> Arc<CurveData<S>> {
        Arc::new(CurveData { f })
    }

    pub fn from_ratfn(curve: &Arc<CurveData<S>>, a: RatFn<S>) -> Self {
        CurveFn {
            a,
            b: RatFn::zero(),
            curve: curve.clone(),
        }
    }

    pub fn from_parts(curve: &Arc<CurveData<S>>, a: RatFn<S>, b: RatFn<S>) -> Self {
        CurveFn {
            a,
            b,
            curve: curve.clone(),
        }
    }

    pub fn u(curve: &Arc<CurveData<S>>) -> Self {
        CurveFn {
            a: RatFn::zero(),
            b: RatFn::one(),
            curve: curve.clone(),
        }
    }

    pub fn s_var(curve: &Arc<CurveData<S>>) -> Self {
        Self::from_ratfn(curve, RatFn::x())
    }

    pub fn constant(curve: &Arc<CurveData<S>>, c: S) -> Self {
        Self::from_ratfn(curve, RatFn::constant(c))
    }

    fn f_rat(&self) -> RatFn<S> {
        RatFn::from_poly(self.curve.f.clone())
    }

    fn same_curve(&self, rhs: &Self) -> bool {
        Arc::ptr_eq(&self.curve, &rhs.curve) || self.curve.f == rhs.curve.f
    }

    /// The curve an arithmetic result should carry.  Elements with b = 0
    /// never touch f, so generic constants (created curve-less by
    /// `zero()`/`one()`) adopt the other operand's curve; two elements with
    /// nonzero u-part must agree.
    fn result_curve(&self, rhs: &Self) -> Arc<CurveData<S>> {
        let lb = !self.b.is_zero_fn();
        let rb = !rhs.b.is_zero_fn();
        if lb && rb {
            assert!(self.same_curve(rhs), "curve mismatch");
            self.curve.clone()
        } else if lb {
            self.curve.clone()
        } else if rb {
            rhs.curve.clone()
        } else if self.same_curve(rhs) {
            self.curve.clone()
        } else {
            // both are pure rational functions; either tag works
            self.curve.clone()
        }
    }

    /// d/ds with du/ds = f'(s)/(2u), i.e. d(a+bu)/ds = a' + (b' + b·f'/(2f))·u.
    pub fn derivative(&self) -> Self {
        let fp = RatFn::from_poly(self.curve.f.derivative());
        let f = self.f_rat();
        let half = S::from_ratio(1, 2);
        let ub = self.b.derivative()
            + self.b.clone() * fp * RatFn::constant(half) * f.inv();
        CurveFn {
            a: self.a.derivative(),
            b: ub,
            curve: self.curve.clone(),
        }
    }
}

impl<S: PolyGcd> PartialEq for CurveFn<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a || self.b != other.b {
            return false;
        }
        self.b.is_zero_fn() || self.same_curve(other)
    }
}
impl<S: PolyGcd> Eq for CurveFn<S> {}

impl<S: PolyGcd> Add for CurveFn<S> {
    type Output = CurveFn<S>;
    fn add(self, rhs: Self) -> Self {
        let curve = self.result_curve(&rhs);
        CurveFn {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            curve,
        }
    }
}
impl<S: PolyGcd> Sub for CurveFn<S> {
    type Output = CurveFn<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
impl<S: PolyGcd> Neg for CurveFn<S> {
    type Output = CurveFn<S>;
    fn neg(self) -> Self {
        CurveFn {
            a: -self.a,
            b: -self.b,
            curve: self.curve,
        }
    }
}
impl<S: PolyGcd> Mul for CurveFn<S> {
    type Output = CurveFn<S>;
    fn mul(self, rhs: Self) -> Self {
        let curve = self.result_curve(&rhs);
        let f = RatFn::from_poly(curve.f.clone());
        // (a1 + b1 u)(a2 + b2 u) = a1a2 + b1b2 f + (a1b2 + a2b1) u
        let a = self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.b.clone() * f;
        let b = self.a * rhs.b + rhs.a * self.b;
        CurveFn { a, b, curve }
    }
}

impl<S: PolyGcd> FieldScalar for CurveFn<S> {
    fn zero() -> Self {
        // placeholder curve; binary ops adopt the other operand's curve
        CurveFn {
            a: RatFn::zero(),
            b: RatFn::zero(),
            curve: Self::line_curve(),
        }
    }
    fn one() -> Self {
        CurveFn {
            a: RatFn::one(),
            b: RatFn::zero(),
            curve: Self::line_curve(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero_fn() && self.b.is_zero_fn()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(a+bu) = (a-bu)/(a² - b²f); the norm is nonzero because f is
        // squarefree of degree ≥ 1, so it cannot be a square of a rational
        // function unless a = b = 0.
        let f = self.f_rat();
        let norm = self.a.clone() * self.a.clone() - self.b.clone() * self.b.clone() * f;
        let ninv = norm.try_inv()?;
        Some(CurveFn {
            a: self.a.clone() * ninv.clone(),
            b: -(self.b.clone() * ninv),
            curve: self.curve.clone(),
        })
    }
    fn from_i64(n: i64) -> Self {
        let mut c = Self::one();
        c.a = RatFn::constant(S::from_i64(n));
        c
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        let mut c = Self::one();
        c.a = RatFn::constant(S::from_ratio(num, den));
        c
    }
    fn from_rat(r: &num_rational::BigRational) -> Self {
        let mut c = Self::one();
        c.a = RatFn::constant(S::from_rat(r));
        c
    }
}

impl<S: PolyGcd + fmt::Display> fmt::Display for CurveFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero_fn() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero_fn() {
            write!(f, "[{}]*u", self.b)
        } else {
            write!(f, "{} + [{}]*u", self.a, self.b)
        }
    }
}

impl<S: PolyGcd> fmt::Debug for CurveFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveFn[a={:?}, b={:?}]", self.a, self.b)
    }
}

/// Fix up the placeholder curve introduced by `zero()`/`one()`: binary ops
/// between a placeholder constant and a genuine curve element must adopt
/// the genuine curve.  Called by consumers that mix generic constants in.
pub fn on_curve<S: PolyGcd>(x: CurveFn<S>, curve: &Arc<CurveData<S>>) -> CurveFn<S> {
    CurveFn {
        a: x.a,
        b: x.b,
        curve: curve.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type C = CurveFn<BigRational>;

    #[test]
    fn u_squared_reduces_to_f() {
        // u² on u² = s(s²+s-1) is s³+s²-s; derivative of u² is 3s²+2s-1
        let f = Poly::from_ints(&[0, -1, 1, 1]);
        let curve = C::curve_from(f.clone());
        let u = C::u(&curve);
        let u2 = u.clone() * u.clone();
        assert_eq!(u2.a, RatFn::from_poly(f));
        assert!(u2.b.is_zero_fn());
        let d = u2.derivative();
        assert_eq!(d.a, RatFn::from_poly(Poly::from_ints(&[-1, 2, 3])));
    }

    #[test]
    fn derivative_of_u_power_rule() {
        // g = u on u² = s³: dg/ds = (3/(2s))·u
        let curve = C::curve_from(Poly::from_ints(&[0, 0, 0, 1]));
        let u = C::u(&curve);
        let d = u.derivative();
        assert!(d.a.is_zero_fn());
        assert_eq!(
            d.b,
            RatFn::new(Poly::from_ints(&[3]), Poly::from_ints(&[0, 2]))
        );
    }

    #[test]
    fn derivative_of_plain_polynomial() {
        let curve = C::curve_from(Poly::from_ints(&[0, -1, 1, 1]));
        let s = C::s_var(&curve);
        let d = (s.clone() * s).derivative();
        assert_eq!(d.a, RatFn::from_poly(Poly::from_ints(&[0, 2])));
    }

    #[test]
    fn inverse_on_curve() {
        let curve = C::curve_from(Poly::from_ints(&[0, -1, 1, 1]));
        let u = C::u(&curve);
        let s = C::s_var(&curve);
        let x = u.clone() + s.clone();
        let xi = x.try_inv().unwrap();
        let prod = x * xi;
        assert_eq!(prod.a, RatFn::one());
        assert!(prod.b.is_zero_fn());
    }

    #[test]
    fn leibniz_rule_on_samples() {
        let curve = C::curve_from(Poly::from_ints(&[0, -1, 1, 1]));
        let u = C::u(&curve);
        let s = C::s_var(&curve);
        let g = u.clone() * s.clone() + s.clone();
        let h = u.clone() - s.clone() * s.clone();
        let lhs = (g.clone() * h.clone()).derivative();
        let rhs = g.clone() * h.derivative() + h * g.derivative();
        assert_eq!(lhs, rhs);
    }
}

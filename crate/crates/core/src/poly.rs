//! Dense univariate polynomials over a field scalar, with a gcd that is
//! specialised to an integer primitive-remainder sequence for rational
//! coefficients (naive monic Euclid explodes coefficient sizes on the
//! degrees this project reaches).

use crate::field::FieldScalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<S> {
    /// little-endian coefficients, no trailing zeros
    pub c: Vec<S>,
}

impl<S: FieldScalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            c: vec![S::one()],
        }
    }

    pub fn constant(s: S) -> Self {
        let mut p = Poly { c: vec![s] };
        p.trim();
        p
    }

    pub fn x() -> Self {
        Poly {
            c: vec![S::zero(), S::one()],
        }
    }

    pub fn from_coeffs(c: Vec<S>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    /// Coefficients given as (numerator, denominator) integer pairs,
    /// little-endian.
    pub fn from_ratios(v: &[(i64, i64)]) -> Self {
        Poly::from_coeffs(v.iter().map(|&(n, d)| S::from_ratio(n, d)).collect())
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Poly::from_coeffs(v.iter().map(|&n| S::from_i64(n)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().map_or(false, |x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> S {
        self.c.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff(&self, i: usize) -> S {
        self.c.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, s: &S) -> Self {
        Poly::from_coeffs(self.c.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.c.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.c.len() - 1);
        for (i, c) in self.c.iter().enumerate().skip(1) {
            out.push(c.clone() * S::from_i64(i as i64));
        }
        Poly::from_coeffs(out)
    }

    pub fn divrem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let db = rhs.degree().unwrap();
        if self.degree().map_or(true, |da| da < db) {
            return (Poly::zero(), self.clone());
        }
        let blead_inv = rhs.lc().inv();
        let mut r = self.c.clone();
        let mut q = vec![S::zero(); r.len() - db];
        while r.len() > db {
            let lead = r.last().unwrap().clone() * blead_inv.clone();
            let shift = r.len() - 1 - db;
            q[shift] = lead.clone();
            for (j, c) in rhs.c.iter().enumerate() {
                let delta = lead.clone() * c.clone();
                r[shift + j] = r[shift + j].clone() - delta;
            }
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
            if r.len() <= db {
                break;
            }
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.divrem(rhs).1
    }

    pub fn divexact(&self, rhs: &Self) -> Self {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.clone() * base.clone();
            }
            base = base.clone() * base.clone();
            k >>= 1;
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose_poly(&self, g: &Poly<S>) -> Poly<S> {
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc * g.clone() + Poly::constant(c.clone());
        }
        acc
    }

    /// Resultant of self and rhs via the Euclidean recursion.
    pub fn resultant(&self, rhs: &Self) -> S {
        fn go<S: FieldScalar>(a: &Poly<S>, b: &Poly<S>) -> S {
            if b.is_zero() {
                return if a.degree() == Some(0) {
                    S::one()
                } else {
                    S::zero()
                };
            }
            let da = a.deg_or_zero();
            let db = b.deg_or_zero();
            if db == 0 {
                return pow_scalar(&b.lc(), da as u32);
            }
            let r = a.rem(b);
            let dr = r.degree();
            let sign = if (da * db) % 2 == 1 {
                -S::one()
            } else {
                S::one()
            };
            match dr {
                None => S::zero(),
                Some(dr) => {
                    sign * pow_scalar(&b.lc(), (da - dr) as u32) * go(b, &r)
                }
            }
        }
        if self.is_zero() || rhs.is_zero() {
            return S::zero();
        }
        go(self, rhs)
    }
}

pub fn pow_scalar<S: FieldScalar>(x: &S, mut k: u32) -> S {
    let mut acc = S::one();
    let mut base = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base.clone();
        k >>= 1;
    }
    acc
}

impl<S: FieldScalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(S::zero);
            let b = rhs.c.get(i).cloned().unwrap_or_else(S::zero);
            out.push(a + b);
        }
        Poly::from_coeffs(out)
    }
}

impl<S: FieldScalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: FieldScalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Self {
        Poly {
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<S: FieldScalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<S: FieldScalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*s", c)?,
                _ => write!(f, "({})*s^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl<S: FieldScalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[deg {:?}]", self.degree())
    }
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

/// Polynomial gcd, monic.  The default implementation is the monic
/// Euclidean algorithm (fine for small degrees over number fields); the
/// BigRational implementation clears denominators and runs a primitive
/// pseudo-remainder sequence over Z to keep coefficients small.
pub trait PolyGcd: FieldScalar {
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let r = r0.rem(&r1).monic();
            r0 = r1;
            r1 = r;
        }
        r0.monic()
    }
}

impl PolyGcd for crate::scalar::ExactScalar {}

impl PolyGcd for BigRational {
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let mut r0 = to_int_primitive(a);
        let mut r1 = to_int_primitive(b);
        if r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
        }
        while !r1.is_empty() {
            let r = int_prem(&r0, &r1);
            r0 = r1;
            r1 = int_primitive(r);
        }
        let rational = Poly::from_coeffs(
            r0.iter()
                .map(|z| BigRational::from_integer(z.clone()))
                .collect::<Vec<_>>(),
        );
        rational.monic()
    }
}

fn to_int_primitive(p: &Poly<BigRational>) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in &p.c {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .c
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    int_primitive(ints)
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return v;
    }
    for c in v.iter_mut() {
        *c /= &g;
    }
    v
}

/// Pseudo-remainder: lc(b)^(da-db+1) · a  mod  b, over Z.
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let blead = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    let mut steps = da as i64 - db as i64 + 1;
    while r.len() > db && !r.is_empty() {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &blead;
        }
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &lead * c;
        }
        while r.last().map_or(false, |x| x.is_zero()) {
            r.pop();
        }
        steps -= 1;
    }
    let _ = steps;
    r
}

impl<S: PolyGcd> Poly<S> {
    pub fn gcd(&self, rhs: &Self) -> Self {
        S::poly_gcd(self, rhs)
    }

    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.divexact(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Discriminant of a rational polynomial: (-1)^{d(d-1)/2} res(f, f') / lc(f).
pub fn discriminant(f: &Poly<BigRational>) -> BigRational {
    let d = f.deg_or_zero();
    let res = f.resultant(&f.derivative());
    let sign: BigRational = crate::field::rat_int(if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 });
    sign * res / f.lc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::from_ints(v)
    }

    #[test]
    fn divrem_and_gcd() {
        let a = p(&[-1, 0, 1]); // s^2 - 1
        let b = p(&[1, 1]); // s + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(&[-1, 1]));
        let g = a.gcd(&p(&[-1, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn gcd_is_monic_regardless_of_content() {
        let a = p(&[2, 4]).scale(&rat(3, 5));
        let b = p(&[1, 2]);
        assert_eq!(a.gcd(&b), Poly::from_ratios(&[(1, 2), (1, 1)]));
    }

    #[test]
    fn discriminant_of_cubics() {
        // disc(s(8s^2-11s+8)) = -8640
        let f = p(&[0, 8, -11, 8]);
        assert_eq!(discriminant(&f), rat_int(-8640));
        // disc(s(s^2+s+7)) = -1323
        let f = p(&[0, 7, 1, 1]);
        assert_eq!(discriminant(&f), rat_int(-1323));
        // disc(s(s^2-1)) = 4
        let f = p(&[0, -1, 0, 1]);
        assert_eq!(discriminant(&f), rat_int(4));
    }

    #[test]
    fn squarefree_part_strips_squares() {
        let f = p(&[1, 1]).pow(3) * p(&[2, 1]);
        let sf = f.squarefree_part();
        assert_eq!(sf, (p(&[1, 1]) * p(&[2, 1])).monic());
    }
}

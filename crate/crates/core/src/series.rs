//! Truncated Puiseux/Laurent series in x = t^(1/q), used to extend a
//! solution's leading asymptotics at t = 0 order by order through the PVI
//! equation.  Precision is tracked as an absolute exponent bound: a series
//! knows its coefficients for exponents < `abs_prec` (in units of 1/q).

use crate::field::FieldScalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const INF: i64 = i64::MAX / 4;

#[derive(Clone, PartialEq, Eq)]
pub struct Puiseux<S> {
    /// exponent denominator: exponents are m/q for integer m
    pub q: i64,
    /// order: exponent (in 1/q units) of the first stored coefficient
    pub ord: i64,
    /// coefficients for exponents ord, ord+1, …, ord+c.len()-1
    pub c: Vec<S>,
    /// coefficients are valid for exponents < abs_prec (1/q units)
    pub abs_prec: i64,
}

impl<S: FieldScalar> Puiseux<S> {
    pub fn zero(q: i64) -> Self {
        Puiseux {
            q,
            ord: INF,
            c: vec![],
            abs_prec: INF,
        }
    }

    pub fn constant(q: i64, s: S) -> Self {
        if s.is_zero() {
            return Self::zero(q);
        }
        Puiseux {
            q,
            ord: 0,
            c: vec![s],
            abs_prec: INF,
        }
    }

    /// The exact monomial c·t^{m/q}.
    pub fn monomial(q: i64, coeff: S, m: i64) -> Self {
        if coeff.is_zero() {
            return Self::zero(q);
        }
        Puiseux {
            q,
            ord: m,
            c: vec![coeff],
            abs_prec: INF,
        }
    }

    pub fn t(q: i64) -> Self {
        Self::monomial(q, S::one(), q)
    }

    pub fn is_zero_series(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn truncate(&self, abs_prec: i64) -> Self {
        let mut out = self.clone();
        out.abs_prec = out.abs_prec.min(abs_prec);
        if out.ord >= out.abs_prec {
            out.c.clear();
            out.ord = out.abs_prec;
            return out;
        }
        let keep = (out.abs_prec - out.ord).max(0) as usize;
        out.c.truncate(keep);
        out
    }

    fn normalized(mut self) -> Self {
        while !self.c.is_empty() && self.c[0].is_zero() {
            self.c.remove(0);
            self.ord += 1;
        }
        if self.c.is_empty() && self.abs_prec >= INF {
            self.ord = INF;
        }
        self
    }

    pub fn coeff_at(&self, m: i64) -> S {
        if m < self.ord {
            return S::zero();
        }
        let idx = (m - self.ord) as usize;
        self.c.get(idx).cloned().unwrap_or_else(S::zero)
    }

    /// Leading exponent (1/q units) of the first nonzero known coefficient,
    /// or None when the series is zero to known precision.
    pub fn leading(&self) -> Option<(i64, S)> {
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                return Some((self.ord + i as i64, c.clone()));
            }
        }
        None
    }

    pub fn inv_series(&self) -> Self {
        let me = self.clone().normalized();
        let lead = me.c.first().expect("inverse of zero series").clone();
        assert!(!lead.is_zero());
        let lead_inv = lead.inv();
        // u = 1 + v with v of positive order; invert by Neumann series
        let n = if me.abs_prec >= INF {
            me.c.len().max(1)
        } else {
            ((me.abs_prec - me.ord).max(1)) as usize
        };
        let mut inv = vec![S::zero(); n];
        inv[0] = lead_inv.clone();
        for k in 1..n {
            // coefficient of x^k in (self/x^ord): c_k; recurrence
            let mut acc = S::zero();
            for j in 0..k {
                let a = me.c.get(k - j).cloned().unwrap_or_else(S::zero);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a * inv[j].clone();
            }
            inv[k] = -(acc * lead_inv.clone());
        }
        let abs_prec = if me.abs_prec >= INF {
            if me.c.len() <= 1 {
                INF
            } else {
                -me.ord + n as i64
            }
        } else {
            me.abs_prec - 2 * me.ord
        };
        Puiseux {
            q: me.q,
            ord: -me.ord,
            c: inv,
            abs_prec,
        }
        .truncate(abs_prec)
    }

    /// d/dt: exponent m/q maps coefficient c to c·(m/q) at exponent m/q − 1.
    pub fn d_dt(&self) -> Self {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, x) in self.c.iter().enumerate() {
            let m = self.ord + i as i64;
            c.push(x.clone() * S::from_ratio(m, self.q));
        }
        Puiseux {
            q: self.q,
            ord: self.ord - self.q,
            c,
            abs_prec: if self.abs_prec >= INF {
                INF
            } else {
                self.abs_prec - self.q
            },
        }
        .normalized()
    }

    /// Substitute: evaluate a polynomial-like list of coefficients of powers
    /// of this series (Horner).  Coefficient k multiplies self^k.
    pub fn horner(coeffs: &[S], x: &Puiseux<S>) -> Puiseux<S> {
        let mut acc = Puiseux::zero(x.q);
        for c in coeffs.iter().rev() {
            acc = acc * x.clone() + Puiseux::constant(x.q, c.clone());
        }
        acc
    }
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

/// Bring two series onto a common exponent denominator.
fn align<S: FieldScalar>(a: Puiseux<S>, b: Puiseux<S>) -> (Puiseux<S>, Puiseux<S>) {
    if a.q == b.q {
        (a, b)
    } else {
        let q = lcm_i64(a.q, b.q);
        (rescale(&a, q), rescale(&b, q))
    }
}

impl<S: FieldScalar> Add for Puiseux<S> {
    type Output = Puiseux<S>;
    fn add(self, rhs: Self) -> Self {
        let (lhs, rhs) = align(self, rhs);
        let abs_prec = lhs.abs_prec.min(rhs.abs_prec);
        if lhs.c.is_empty() {
            return rhs.truncate(abs_prec);
        }
        if rhs.c.is_empty() {
            return lhs.truncate(abs_prec);
        }
        let ord = lhs.ord.min(rhs.ord);
        let hi = (lhs.ord + lhs.c.len() as i64)
            .max(rhs.ord + rhs.c.len() as i64)
            .min(abs_prec);
        let len = (hi - ord).max(0) as usize;
        let mut c = vec![S::zero(); len];
        for (i, slot) in c.iter_mut().enumerate() {
            let m = ord + i as i64;
            *slot = lhs.coeff_at(m) + rhs.coeff_at(m);
        }
        Puiseux {
            q: lhs.q,
            ord,
            c,
            abs_prec,
        }
        .normalized()
    }
}

impl<S: FieldScalar> Neg for Puiseux<S> {
    type Output = Puiseux<S>;
    fn neg(self) -> Self {
        Puiseux {
            q: self.q,
            ord: self.ord,
            c: self.c.into_iter().map(|x| -x).collect(),
            abs_prec: self.abs_prec,
        }
    }
}

impl<S: FieldScalar> Sub for Puiseux<S> {
    type Output = Puiseux<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: FieldScalar> Mul for Puiseux<S> {
    type Output = Puiseux<S>;
    fn mul(self, rhs: Self) -> Self {
        let (lhs, rhs) = align(self, rhs);
        if lhs.c.is_empty() || rhs.c.is_empty() {
            // zero to some precision times a series of order o is zero to
            // precision (prec + o); an exactly-zero factor gives exact zero
            let prec_from = |z: &Puiseux<S>, other: &Puiseux<S>| -> i64 {
                if z.abs_prec >= INF {
                    INF
                } else if other.c.is_empty() {
                    z.abs_prec.min(other.abs_prec)
                } else {
                    z.abs_prec.saturating_add(other.ord)
                }
            };
            let abs_prec = if lhs.c.is_empty() && rhs.c.is_empty() {
                prec_from(&lhs, &rhs).min(prec_from(&rhs, &lhs))
            } else if lhs.c.is_empty() {
                prec_from(&lhs, &rhs)
            } else {
                prec_from(&rhs, &lhs)
            };
            let mut z = Puiseux::zero(lhs.q);
            z.abs_prec = abs_prec;
            return z;
        }
        let ord = lhs.ord + rhs.ord;
        // error from truncations: min(prec1 + ord2, prec2 + ord1)
        let abs_prec = if lhs.abs_prec >= INF && rhs.abs_prec >= INF {
            INF
        } else {
            (lhs.abs_prec.saturating_add(rhs.ord)).min(rhs.abs_prec.saturating_add(lhs.ord))
        };
        let len_cap = if abs_prec >= INF {
            lhs.c.len() + rhs.c.len() - 1
        } else {
            ((abs_prec - ord).max(0) as usize).min(lhs.c.len() + rhs.c.len() - 1)
        };
        let mut c = vec![S::zero(); len_cap];
        for (i, a) in lhs.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if i + j >= len_cap {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Puiseux {
            q: lhs.q,
            ord,
            c,
            abs_prec,
        }
        .normalized()
    }
}

impl<S: FieldScalar> FieldScalar for Puiseux<S> {
    fn zero() -> Self {
        Puiseux::zero(1)
    }
    fn one() -> Self {
        Puiseux::constant(1, S::one())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_series()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero_series() {
            None
        } else {
            Some(self.inv_series())
        }
    }
    fn from_i64(n: i64) -> Self {
        Puiseux::constant(1, S::from_i64(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Puiseux::constant(1, S::from_ratio(num, den))
    }
    fn from_rat(r: &num_rational::BigRational) -> Self {
        Puiseux::constant(1, S::from_rat(r))
    }
}

impl<S: FieldScalar + fmt::Display> fmt::Display for Puiseux<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·t^({}/{})", c, self.ord + i as i64, self.q)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.abs_prec < INF {
            write!(f, " + O(t^({}/{}))", self.abs_prec, self.q)?;
        }
        Ok(())
    }
}

impl<S: FieldScalar> fmt::Debug for Puiseux<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Puiseux[q={}, ord={}, len={}, prec={}]",
            self.q,
            self.ord,
            self.c.len(),
            self.abs_prec
        )
    }
}

/// Square root of a series with even leading exponent, given a square root
/// of the leading coefficient; coefficients follow from
/// 2·w0·w_j = v_j − Σ_{0<i<j} w_i·w_{j−i}.
pub fn sqrt_series<S: FieldScalar>(p: &Puiseux<S>, leading_root: &S) -> Option<Puiseux<S>> {
    let me = p.clone();
    let (ord, lead) = me.leading()?;
    if ord % 2 != 0 {
        return None;
    }
    if leading_root.clone() * leading_root.clone() != lead {
        return None;
    }
    let len = if me.abs_prec >= INF {
        me.c.len()
    } else {
        ((me.abs_prec - ord).max(1)) as usize
    };
    let mut w = vec![S::zero(); len];
    w[0] = leading_root.clone();
    let two_w0_inv = (S::from_i64(2) * leading_root.clone()).inv();
    for j in 1..len {
        let mut acc = me.coeff_at(ord + j as i64);
        for i in 1..j {
            acc = acc - w[i].clone() * w[j - i].clone();
        }
        w[j] = acc * two_w0_inv.clone();
    }
    Some(Puiseux {
        q: me.q,
        ord: ord / 2,
        c: w,
        abs_prec: if me.abs_prec >= INF {
            INF
        } else {
            me.abs_prec - ord / 2
        },
    })
}

/// Rescale a q1-series to a finer denominator q2 (q1 | q2).
pub fn rescale<S: FieldScalar>(p: &Puiseux<S>, q2: i64) -> Puiseux<S> {
    assert_eq!(q2 % p.q, 0);
    let k = q2 / p.q;
    if k == 1 {
        return p.clone();
    }
    if p.c.is_empty() {
        let mut z = Puiseux::zero(q2);
        z.abs_prec = p.abs_prec.saturating_mul(k);
        return z;
    }
    let mut c = vec![S::zero(); (p.c.len() - 1) * k as usize + 1];
    for (i, x) in p.c.iter().enumerate() {
        c[i * k as usize] = x.clone();
    }
    Puiseux {
        q: q2,
        ord: p.ord * k,
        c,
        abs_prec: if p.abs_prec >= INF {
            INF
        } else {
            p.abs_prec.saturating_mul(k)
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Puiseux<BigRational>;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1 - t) = 1 + t + t² + …
        let q = 1;
        let one = P::constant(q, r(1, 1));
        let t = P::t(q);
        let x = (one.clone() - t).truncate(6);
        let inv = x.inv_series();
        for k in 0..6 {
            assert_eq!(inv.coeff_at(k), r(1, 1));
        }
    }

    #[test]
    fn derivative_of_sqrt_t() {
        // d/dt t^(1/2) = (1/2) t^(-1/2)
        let x = P::monomial(2, r(1, 1), 1);
        let d = x.d_dt();
        assert_eq!(d.ord, -1);
        assert_eq!(d.coeff_at(-1), r(1, 2));
    }

    #[test]
    fn truncation_tracks_error_through_multiplication() {
        let q = 1;
        let t = P::t(q);
        let a = (P::constant(q, r(1, 1)) + t.clone()).truncate(3); // 1 + t + O(t³)
        let b = t.clone() * t.clone(); // t²
        let prod = a * b; // t² + t³ + O(t⁵)
        assert_eq!(prod.abs_prec, 5);
        assert_eq!(prod.coeff_at(2), r(1, 1));
        assert_eq!(prod.coeff_at(3), r(1, 1));
    }
}

//! Unit quaternions with coordinates in (1/4)·Z[√m], m ∈ {1, 2, 3, 5}.
//!
//! Every binary polyhedral group in the catalog embeds in the unit group
//! of one of these orders (icosians for m = 5), so group elements multiply
//! with a handful of i64 operations and hash directly.  Matrix form over
//! Q(ζ_n) is derived on demand.

use crate::matrix::Matrix;
use crate::scalar::{sqrt_in_cyclotomic, ExactScalar, Tower};
use num_rational::BigRational;


/// One coordinate: (a + b√m)/4.
pub type Coord = (i64, i64);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Quat {
    /// field marker m of √m
    pub m: i64,
    /// coordinates (w, x, y, z), each (a + b√m)/4
    pub c: [Coord; 4],
}

fn cadd(a: Coord, b: Coord) -> Coord {
    (a.0 + b.0, a.1 + b.1)
}

fn cneg(a: Coord) -> Coord {
    (-a.0, -a.1)
}

/// product of two coordinates, result scaled by 1/16
fn cmul16(m: i64, a: Coord, b: Coord) -> Coord {
    (a.0 * b.0 + m * a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

impl Quat {
    pub fn new(m: i64, c: [Coord; 4]) -> Self {
        Quat { m, c }
    }

    pub fn one(m: i64) -> Self {
        Quat {
            m,
            c: [(4, 0), (0, 0), (0, 0), (0, 0)],
        }
    }

    pub fn minus_one(m: i64) -> Self {
        Quat {
            m,
            c: [(-4, 0), (0, 0), (0, 0), (0, 0)],
        }
    }

    pub fn i(m: i64) -> Self {
        Quat {
            m,
            c: [(0, 0), (4, 0), (0, 0), (0, 0)],
        }
    }

    pub fn j(m: i64) -> Self {
        Quat {
            m,
            c: [(0, 0), (0, 0), (4, 0), (0, 0)],
        }
    }

    pub fn k(m: i64) -> Self {
        Quat {
            m,
            c: [(0, 0), (0, 0), (0, 0), (4, 0)],
        }
    }

    pub fn mul(&self, o: &Quat) -> Quat {
        debug_assert_eq!(self.m, o.m);
        let m = self.m;
        let [w1, x1, y1, z1] = self.c;
        let [w2, x2, y2, z2] = o.c;
        let p = |a: Coord, b: Coord| cmul16(m, a, b);
        let w = cadd(
            cadd(p(w1, w2), cneg(p(x1, x2))),
            cadd(cneg(p(y1, y2)), cneg(p(z1, z2))),
        );
        let x = cadd(
            cadd(p(w1, x2), p(x1, w2)),
            cadd(p(y1, z2), cneg(p(z1, y2))),
        );
        let y = cadd(
            cadd(p(w1, y2), cneg(p(x1, z2))),
            cadd(p(y1, w2), p(z1, x2)),
        );
        let z = cadd(
            cadd(p(w1, z2), p(x1, y2)),
            cadd(cneg(p(y1, x2)), p(z1, w2)),
        );
        let fix = |c: Coord| -> Coord {
            debug_assert!(c.0 % 4 == 0 && c.1 % 4 == 0, "non-integral quaternion product");
            (c.0 / 4, c.1 / 4)
        };
        Quat {
            m,
            c: [fix(w), fix(x), fix(y), fix(z)],
        }
    }

    /// Conjugate; equals the inverse for unit quaternions.
    pub fn conj(&self) -> Quat {
        Quat {
            m: self.m,
            c: [self.c[0], cneg(self.c[1]), cneg(self.c[2]), cneg(self.c[3])],
        }
    }

    pub fn inv(&self) -> Quat {
        self.conj()
    }

    pub fn neg(&self) -> Quat {
        Quat {
            m: self.m,
            c: [cneg(self.c[0]), cneg(self.c[1]), cneg(self.c[2]), cneg(self.c[3])],
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Quat::one(self.m)
    }

    pub fn is_central(&self) -> bool {
        self.is_one() || *self == Quat::minus_one(self.m)
    }

    /// |q|² · 16 as (a + b√m); unit quaternions give (16, 0).
    pub fn norm16(&self) -> Coord {
        let m = self.m;
        let mut acc = (0i64, 0i64);
        for c in self.c {
            acc = cadd(acc, cmul16(m, c, c));
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.norm16() == (16, 0)
    }

    /// SL2 trace = 2·(real part) = (a + b√m)/2 given real part (a+b√m)/4.
    /// Returned as the numerator pair of (a + b√m)/2.
    pub fn trace_pair(&self) -> Coord {
        self.c[0]
    }

    pub fn order(&self) -> u32 {
        let mut q = *self;
        let one = Quat::one(self.m);
        for k in 1..=240 {
            if q == one {
                return k;
            }
            q = q.mul(self);
        }
        panic!("element order exceeds cap; not a unit of a small group");
    }

    /// Order of the image in the projective group (quotient by ±1).
    pub fn projective_order(&self) -> u32 {
        let mut q = *self;
        for k in 1..=240 {
            if q.is_central() {
                return k;
            }
            q = q.mul(self);
        }
        panic!("projective order exceeds cap");
    }

    /// Cyclotomic conductor for the matrix embedding of √m and i.
    pub fn zeta_order(m: i64) -> u32 {
        match m {
            1 => 4,
            2 => 8,
            3 => 12,
            5 => 20,
            _ => panic!("unsupported coordinate field"),
        }
    }

    /// 2×2 matrix over Q(ζ_n): q = w + xi + yj + zk ↦
    /// [[w + x·i, y + z·i], [−y + z·i, w − x·i]].
    pub fn to_matrix(&self) -> Matrix<ExactScalar> {
        let n = Self::zeta_order(self.m);
        let tower = Tower::cyclotomic(n);
        let i = crate::scalar::pow_scalar(&ExactScalar::zeta_in(&tower), n / 4);
        let sqrt_m = if self.m == 1 {
            ExactScalar::from_int(1)
        } else {
            sqrt_in_cyclotomic(&BigRational::from_integer(self.m.into()), n)
                .expect("sqrt of coordinate field marker")
        };
        let coord = |c: Coord| -> ExactScalar {
            let a = ExactScalar::from_rational(BigRational::new(c.0.into(), 4.into()));
            let b = ExactScalar::from_rational(BigRational::new(c.1.into(), 4.into()));
            a + b * sqrt_m.clone()
        };
        let w = coord(self.c[0]);
        let x = coord(self.c[1]);
        let y = coord(self.c[2]);
        let z = coord(self.c[3]);
        Matrix::from_rows(vec![
            vec![w.clone() + x.clone() * i.clone(), y.clone() + z.clone() * i.clone()],
            vec![-y + z * i.clone(), w - x * i],
        ])
    }

    /// Exact SL2 trace as a scalar in Q(√m) (cyclotomic embedding).
    pub fn trace_scalar(&self) -> ExactScalar {
        let n = Self::zeta_order(self.m);
        let sqrt_m = if self.m == 1 {
            ExactScalar::from_int(1)
        } else {
            sqrt_in_cyclotomic(&BigRational::from_integer(self.m.into()), n)
                .expect("sqrt of coordinate field marker")
        };
        let (a, b) = self.c[0];
        ExactScalar::from_rational(BigRational::new(a.into(), 2.into()))
            + ExactScalar::from_rational(BigRational::new(b.into(), 2.into())) * sqrt_m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let i = Quat::i(1);
        let j = Quat::j(1);
        let k = Quat::k(1);
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&k), i);
        assert_eq!(k.mul(&i), j);
        assert_eq!(i.mul(&i), Quat::minus_one(1));
        assert_eq!(i.order(), 4);
    }

    #[test]
    fn icosian_order_ten_element() {
        // x = (φ + i + (φ-1)j)/2, real part φ/2 = cos(π/5): order 10
        let x = Quat::new(5, [(1, 1), (2, 0), (-1, 1), (0, 0)]);
        assert!(x.is_unit());
        assert_eq!(x.order(), 10);
        assert_eq!(x.projective_order(), 5);
        // k conjugates x to its inverse
        let k = Quat::k(5);
        let c = k.mul(&x).mul(&k.inv());
        assert_eq!(c, x.inv());
    }

    #[test]
    fn matrix_embedding_is_sl2_and_multiplicative() {
        let x = Quat::new(5, [(1, 1), (2, 0), (-1, 1), (0, 0)]);
        let k = Quat::k(5);
        let mx = x.to_matrix();
        let mk = k.to_matrix();
        assert_eq!(mx.det(), ExactScalar::from_int(1));
        assert_eq!(mk.det(), ExactScalar::from_int(1));
        assert_eq!(x.mul(&k).to_matrix(), mx * mk);
        assert_eq!(x.trace_scalar(), x.to_matrix().trace());
    }
}

//! The Hurwitz moves on triples.  Generic over anything that multiplies
//! and inverts, so the same formulas act on quaternions, 2×2 matrices and
//! 3×3 reflection matrices.

use std::hash::Hash;

pub trait GroupElt: Clone + Eq + Hash {
    fn gmul(&self, rhs: &Self) -> Self;
    fn ginv(&self) -> Self;
}

impl GroupElt for crate::quat::Quat {
    fn gmul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn ginv(&self) -> Self {
        self.inv()
    }
}

impl GroupElt for crate::matrix::Matrix<crate::scalar::ExactScalar> {
    fn gmul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn ginv(&self) -> Self {
        self.inverse().expect("group element must be invertible")
    }
}

pub type Triple<T> = [T; 3];

/// ω1(M1,M2,M3) = (M2, M2·M1·M2⁻¹, M3)
pub fn omega1<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    let conj = t[1].gmul(&t[0]).gmul(&t[1].ginv());
    [t[1].clone(), conj, t[2].clone()]
}

/// ω2(M1,M2,M3) = (M1, M3, M3·M2·M3⁻¹)
pub fn omega2<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    let conj = t[2].gmul(&t[1]).gmul(&t[2].ginv());
    [t[0].clone(), t[2].clone(), conj]
}

pub fn omega1_inv<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    // inverse of ω1: (x, y, z) ↦ (x⁻¹·y·x, x, z)
    let conj = t[0].ginv().gmul(&t[1]).gmul(&t[0]);
    [conj, t[0].clone(), t[2].clone()]
}

pub fn omega2_inv<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    // inverse of ω2: (x, y, z) ↦ (x, y⁻¹·z·y, y)
    let conj = t[1].ginv().gmul(&t[2]).gmul(&t[1]);
    [t[0].clone(), conj, t[1].clone()]
}

pub fn omega1_sq<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    omega1(&omega1(t))
}

pub fn omega2_sq<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    omega2(&omega2(t))
}

/// The third braid move on the 4-tuple (M1,…,M4) with M4·M3·M2·M1 = 1,
/// written on the triple: (M1, M2, M3) ↦ (M1, M2, (M3·M2·M1)⁻¹).
/// It swaps M4 into the third slot.
pub fn sigma3<T: GroupElt>(t: &Triple<T>) -> Triple<T> {
    let m4 = t[2].gmul(&t[1]).gmul(&t[0]).ginv();
    [t[0].clone(), t[1].clone(), m4]
}

/// Product M3·M2·M1 (its inverse is the local monodromy at infinity).
pub fn product<T: GroupElt>(t: &Triple<T>) -> T {
    t[2].gmul(&t[1]).gmul(&t[0])
}

pub fn m4<T: GroupElt>(t: &Triple<T>) -> T {
    product(t).ginv()
}

/// A word in the generators ω1, ω2 (and inverses), applied left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Omega1,
    Omega2,
    Omega1Inv,
    Omega2Inv,
    Omega1Sq,
    Omega2Sq,
}

pub fn apply_word<T: GroupElt>(word: &[Move], t: &Triple<T>) -> Triple<T> {
    let mut cur = t.clone();
    for mv in word {
        cur = match mv {
            Move::Omega1 => omega1(&cur),
            Move::Omega2 => omega2(&cur),
            Move::Omega1Inv => omega1_inv(&cur),
            Move::Omega2Inv => omega2_inv(&cur),
            Move::Omega1Sq => omega1_sq(&cur),
            Move::Omega2Sq => omega2_sq(&cur),
        };
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quat;

    #[test]
    fn omegas_are_mutually_inverse() {
        let t = [Quat::i(1), Quat::j(1), Quat::k(1)];
        assert_eq!(omega1_inv(&omega1(&t)), t);
        assert_eq!(omega2_inv(&omega2(&t)), t);
        assert_eq!(omega1(&omega1_inv(&t)), t);
        assert_eq!(omega2(&omega2_inv(&t)), t);
    }

    #[test]
    fn omegas_fix_the_product() {
        let t = [
            Quat::i(1),
            Quat::new(1, [(2, 0), (2, 0), (2, 0), (2, 0)]),
            Quat::j(1),
        ];
        let p = product(&t);
        assert_eq!(product(&omega1(&t)), p);
        assert_eq!(product(&omega2(&t)), p);
        // σ3 replaces M3 by M4 = p⁻¹, so the new product is p⁻¹·M2·M1
        assert_eq!(product(&sigma3(&t)), p.inv().mul(&t[1]).mul(&t[0]));
    }

    #[test]
    fn central_triple_is_fixed() {
        let m = Quat::minus_one(1);
        let t = [m, m, m];
        assert_eq!(omega1(&t), t);
        assert_eq!(omega2(&t), t);
    }
}

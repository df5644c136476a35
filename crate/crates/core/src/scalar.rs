//! Exact arithmetic in a fixed tower of fields:
//!
//! ```text
//!   Q  ⊂  Q(ζ_n)  ⊂  Q(ζ_n)(√d)
//! ```
//!
//! with at most one cyclotomic layer and at most one quadratic layer.
//! Every scalar in the project (matrix entries, traces, eigenvalues, θ
//! parameters) lives in such a tower.  Elements are residues: polynomials
//! in ζ_n of degree < φ(n) with rational coefficients, plus an optional
//! √d component.  Equality is decidable; no floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible towers: {0} vs {1}")]
    IncompatibleTowers(String, String),
    #[error("zero divisor encountered; quadratic layer is not a field (d is a square below)")]
    ZeroDivisor,
    #[error("square root not available in this tower")]
    NoSquareRoot,
}

pub type ScalarResult<T> = Result<T, ScalarError>;

// ---------------------------------------------------------------------------
// dense polynomial helpers over BigRational (little-endian coefficients)
// ---------------------------------------------------------------------------

pub(crate) type Coeffs = Vec<BigRational>;

pub(crate) fn ptrim(v: &mut Coeffs) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub fn ptrim_public(v: &mut Coeffs) {
    ptrim(v)
}

pub(crate) fn padd(a: &[BigRational], b: &[BigRational]) -> Coeffs {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x + y);
    }
    ptrim(&mut out);
    out
}

pub(crate) fn pneg(a: &[BigRational]) -> Coeffs {
    a.iter().map(|c| -c.clone()).collect()
}

pub(crate) fn psub(a: &[BigRational], b: &[BigRational]) -> Coeffs {
    padd(a, &pneg(b))
}

pub(crate) fn pmul(a: &[BigRational], b: &[BigRational]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    ptrim(&mut out);
    out
}

pub(crate) fn pscale(a: &[BigRational], c: &BigRational) -> Coeffs {
    let mut out: Coeffs = a.iter().map(|x| x * c).collect();
    ptrim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn prem(a: &[BigRational], m: &[BigRational]) -> Coeffs {
    debug_assert!(m.last().map_or(false, |c| c.is_one()));
    let mut r: Coeffs = a.to_vec();
    ptrim(&mut r);
    let md = m.len() - 1;
    while r.len() > md {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - md;
        if !lead.is_zero() {
            for (j, c) in m.iter().enumerate().take(md) {
                let idx = shift + j;
                let delta = &lead * c;
                r[idx] -= delta;
            }
        }
        r.pop();
        ptrim(&mut r);
    }
    r
}

/// Extended gcd in Q[x]: returns (g, u) with u*a ≡ g (mod m), g the monic
/// gcd of a and m.  Used for inversion modulo an irreducible modulus.
fn pext_gcd_mod(a: &[BigRational], m: &[BigRational]) -> (Coeffs, Coeffs) {
    let mut r0: Coeffs = m.to_vec();
    let mut r1: Coeffs = a.to_vec();
    ptrim(&mut r0);
    ptrim(&mut r1);
    let mut u0: Coeffs = vec![];
    let mut u1: Coeffs = vec![BigRational::one()];
    while !r1.is_empty() {
        // quotient of r0 by r1
        let (q, r) = pdivrem(&r0, &r1);
        let u2 = psub(&u0, &pmul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
    }
    // normalize gcd monic
    let lead = r0.last().cloned().unwrap_or_else(BigRational::one);
    let inv = BigRational::one() / lead;
    (pscale(&r0, &inv), pscale(&u0, &inv))
}

pub(crate) fn pdivrem(a: &[BigRational], b: &[BigRational]) -> (Coeffs, Coeffs) {
    let mut r: Coeffs = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let blead = b.last().expect("division by zero polynomial").clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let lead = r.last().unwrap() / &blead;
        let shift = r.len() - 1 - db;
        q[shift] = lead.clone();
        for (j, c) in b.iter().enumerate() {
            let delta = &lead * c;
            r[shift + j] -= delta;
        }
        ptrim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    ptrim(&mut q);
    (q, r)
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials
// ---------------------------------------------------------------------------

/// Coefficients of the n-th cyclotomic polynomial, monic, little-endian.
pub fn cyclotomic_poly(n: u32) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigRational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in 1..n {
        if n % d == 0 {
            den = pmul(&den, &cyclotomic_poly(d));
        }
    }
    let (q, r) = pdivrem(&num, &den);
    assert!(r.is_empty(), "cyclotomic division must be exact");
    cache.lock().unwrap().insert(n, q.clone());
    q
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

// ---------------------------------------------------------------------------
// towers
// ---------------------------------------------------------------------------

/// Field tower descriptor: base Q, optional cyclotomic layer Q(ζ_n),
/// optional quadratic layer adjoining √d with d in the layer below.
#[derive(Debug)]
pub struct Tower {
    /// n of the cyclotomic layer; `None` means no cyclotomic layer.
    pub cyc: Option<u32>,
    /// d of the quadratic layer, as a residue in the layer below
    /// (a constant vector when there is no cyclotomic layer).
    pub quad: Option<Coeffs>,
    /// modulus Φ_n, cached (empty when no cyclotomic layer)
    modulus: Coeffs,
    /// residue degree of the cyclotomic layer (1 when absent)
    deg: usize,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.cyc == other.cyc && self.quad == other.quad
    }
}
impl Eq for Tower {}

impl Tower {
    pub fn rational() -> Arc<Tower> {
        static T: OnceLock<Arc<Tower>> = OnceLock::new();
        T.get_or_init(|| {
            Arc::new(Tower {
                cyc: None,
                quad: None,
                modulus: vec![],
                deg: 1,
            })
        })
        .clone()
    }

    pub fn cyclotomic(n: u32) -> Arc<Tower> {
        assert!(n >= 2, "cyclotomic layer needs n >= 2");
        let modulus = cyclotomic_poly(n);
        let deg = modulus.len() - 1;
        Arc::new(Tower {
            cyc: Some(n),
            quad: None,
            modulus,
            deg,
        })
    }

    /// Tower adjoining √d, with d an element of `base` (which must not
    /// already have a quadratic layer).
    pub fn with_sqrt(base: &Arc<Tower>, d: &ExactScalar) -> Arc<Tower> {
        assert!(base.quad.is_none(), "tower already has a quadratic layer");
        assert!(
            d.tower_ref() == base || d.is_rational(),
            "d must live in the base tower"
        );
        let dv = d.a.clone();
        assert!(!dv.is_empty(), "d must be nonzero");
        Arc::new(Tower {
            cyc: base.cyc,
            quad: Some(dv),
            modulus: base.modulus.clone(),
            deg: base.deg,
        })
    }

    pub fn descriptor(&self) -> String {
        let mut s = String::from("Q");
        if let Some(n) = self.cyc {
            s.push_str(&format!("(z{})", n));
        }
        if let Some(d) = &self.quad {
            s.push_str(&format!("(sqrt[{}])", render_coeffs(d)));
        }
        s
    }

    fn reduce(&self, v: &[BigRational]) -> Coeffs {
        if self.modulus.is_empty() {
            let mut out = v.to_vec();
            ptrim(&mut out);
            assert!(out.len() <= 1, "nonconstant residue in rational tower");
            out
        } else {
            prem(v, &self.modulus)
        }
    }

    fn mul_base(&self, a: &[BigRational], b: &[BigRational]) -> Coeffs {
        self.reduce(&pmul(a, b))
    }

    fn inv_base(&self, a: &[BigRational]) -> ScalarResult<Coeffs> {
        let mut av = a.to_vec();
        ptrim(&mut av);
        if av.is_empty() {
            return Err(ScalarError::DivisionByZero);
        }
        if av.len() == 1 {
            return Ok(vec![BigRational::one() / &av[0]]);
        }
        let (g, u) = pext_gcd_mod(&av, &self.modulus);
        if g.len() != 1 {
            // Φ_n is irreducible over Q, so this cannot happen for a
            // genuine cyclotomic modulus.
            return Err(ScalarError::ZeroDivisor);
        }
        Ok(self.reduce(&u))
    }
}

/// Structural comparison: `big` contains `small` when the cyclotomic layer
/// divides and the quadratic layer of `small` (if any) maps to `big`'s.
fn tower_extends(big: &Arc<Tower>, small: &Arc<Tower>) -> bool {
    let ns = small.cyc.unwrap_or(1);
    let nb = big.cyc.unwrap_or(1);
    if ns != 0 && nb % ns != 0 {
        return false;
    }
    match (&small.quad, &big.quad) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(ds), Some(db)) => {
            if ns == nb {
                ds == db
            } else {
                // embed ds along ζ_ns ↦ ζ_nb^{nb/ns} and compare
                let k = (nb / ns) as usize;
                let mut v = vec![BigRational::zero(); ds.len().saturating_sub(1) * k + 1];
                for (i, c) in ds.iter().enumerate() {
                    if !c.is_zero() {
                        v[i * k] = c.clone();
                    }
                }
                &big.reduce(&v) == db
            }
        }
    }
}

fn render_coeffs(v: &[BigRational]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut parts = vec![];
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        if i == 0 {
            parts.push(cs);
        } else if i == 1 {
            parts.push(format!("{}*z", cs));
        } else {
            parts.push(format!("{}*z^{}", cs, i));
        }
    }
    parts.join(" + ")
}

// ---------------------------------------------------------------------------
// scalars
// ---------------------------------------------------------------------------

/// An element `a + b·√d` of a field tower (b = 0 and no √d when the tower
/// has no quadratic layer).  Canonical form: residues reduced modulo Φ_n,
/// rational coefficients in lowest terms (maintained by `BigRational`).
#[derive(Clone)]
pub struct ExactScalar {
    tower: Arc<Tower>,
    a: Coeffs,
    b: Coeffs,
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_empty() {
            write!(f, "{}", render_coeffs(&self.a))
        } else if self.a.is_empty() {
            write!(f, "({})*w", render_coeffs(&self.b))
        } else {
            write!(f, "{} + ({})*w", render_coeffs(&self.a), render_coeffs(&self.b))
        }
    }
}

impl ExactScalar {
    pub fn from_rational(r: BigRational) -> Self {
        let mut a = vec![r];
        ptrim(&mut a);
        ExactScalar {
            tower: Tower::rational(),
            a,
            b: vec![],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// The generator ζ_n of the cyclotomic tower Q(ζ_n).
    pub fn zeta(n: u32) -> Self {
        let tower = Tower::cyclotomic(n);
        Self::zeta_in(&tower)
    }

    /// ζ_n as an element of the given tower (which must have cyclotomic
    /// layer n).
    pub fn zeta_in(tower: &Arc<Tower>) -> Self {
        tower.cyc.expect("tower has no cyclotomic layer");
        let a = vec![BigRational::zero(), BigRational::one()];
        ExactScalar {
            tower: tower.clone(),
            a: prem(&a, &tower.modulus),
            b: vec![],
        }
    }

    /// The √d generator of a quadratic tower.
    pub fn sqrt_gen(tower: &Arc<Tower>) -> Self {
        assert!(tower.quad.is_some(), "tower has no quadratic layer");
        ExactScalar {
            tower: tower.clone(),
            a: vec![],
            b: vec![BigRational::one()],
        }
    }

    pub fn in_tower(tower: &Arc<Tower>, a: Coeffs, b: Coeffs) -> Self {
        let a = tower.reduce(&a);
        let b = tower.reduce(&b);
        assert!(b.is_empty() || tower.quad.is_some());
        ExactScalar {
            tower: tower.clone(),
            a,
            b,
        }
    }

    pub fn tower_ref(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_empty() && self.a.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.b.is_empty() || self.a.len() > 1 {
            return None;
        }
        Some(self.a.first().cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn coeff_a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn coeff_b(&self) -> &[BigRational] {
        &self.b
    }

    /// Promote both operands into a common tower, preferring the larger
    /// one (so constants never downgrade a quadratic or cyclotomic layer).
    /// Pure rationals embed anywhere; Q(ζ_n) embeds in Q(ζ_m) when n | m
    /// and the quadratic layers agree under that embedding.
    pub fn promote_pair(x: &Self, y: &Self) -> ScalarResult<(Self, Self)> {
        if Arc::ptr_eq(&x.tower, &y.tower) || x.tower == y.tower {
            let mut y2 = y.clone();
            y2.tower = x.tower.clone();
            return Ok((x.clone(), y2));
        }
        if tower_extends(&x.tower, &y.tower) {
            if let Some(e) = y.try_embed(&x.tower) {
                return Ok((x.clone(), e));
            }
        }
        if tower_extends(&y.tower, &x.tower) {
            if let Some(e) = x.try_embed(&y.tower) {
                return Ok((e, y.clone()));
            }
        }
        // incomparable towers: a rational value still embeds anywhere
        if x.is_rational() {
            return Ok((x.embed_rational_into(&y.tower), y.clone()));
        }
        if y.is_rational() {
            return Ok((x.clone(), y.embed_rational_into(&x.tower)));
        }
        Err(ScalarError::IncompatibleTowers(
            x.tower.descriptor(),
            y.tower.descriptor(),
        ))
    }

    fn embed_rational_into(&self, tower: &Arc<Tower>) -> Self {
        debug_assert!(self.is_rational());
        ExactScalar {
            tower: tower.clone(),
            a: self.a.clone(),
            b: vec![],
        }
    }

    /// True when `self` lives in a tower at least as large as `other`'s,
    /// so the result of a binary op should carry `self`'s tower.
    pub fn tower_contains(&self, other: &Self) -> bool {
        tower_extends(&self.tower, &other.tower)
    }

    /// Attempt to embed into `target`.  Succeeds when the cyclotomic layer
    /// divides the target's and the quadratic layers agree under that
    /// embedding (or this element has none).
    pub fn try_embed(&self, target: &Arc<Tower>) -> Option<Self> {
        if self.tower == *target {
            let mut out = self.clone();
            out.tower = target.clone();
            return Some(out);
        }
        if self.is_rational() {
            return Some(self.embed_rational_into(target));
        }
        let n = self.tower.cyc.unwrap_or(1);
        let m = target.cyc.unwrap_or(1);
        if n == 0 || m % n != 0 {
            return None;
        }
        let embed_vec = |v: &[BigRational]| -> Coeffs {
            if n == m {
                return target.reduce(v);
            }
            let k = (m / n) as usize;
            let mut out = vec![BigRational::zero(); v.len().saturating_sub(1) * k + 1];
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out[i * k] = c.clone();
                }
            }
            target.reduce(&out)
        };
        // quadratic layers must match after embedding
        match (&self.tower.quad, &target.quad) {
            (None, _) => {}
            (Some(d), Some(dt)) => {
                if &embed_vec(d) != dt {
                    return None;
                }
            }
            (Some(_), None) => return None,
        }
        if self.tower.quad.is_none() && !self.b.is_empty() {
            return None;
        }
        Some(ExactScalar {
            tower: target.clone(),
            a: embed_vec(&self.a),
            b: embed_vec(&self.b),
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> ScalarResult<Self> {
        let (x, y) = Self::promote_pair(self, rhs)?;
        Ok(ExactScalar {
            tower: x.tower.clone(),
            a: padd(&x.a, &y.a),
            b: padd(&x.b, &y.b),
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> ScalarResult<Self> {
        let (x, y) = Self::promote_pair(self, rhs)?;
        let t = &x.tower;
        // (a1 + b1 w)(a2 + b2 w) = a1a2 + b1b2 d + (a1b2 + a2b1) w
        let mut a = t.mul_base(&x.a, &y.a);
        if !x.b.is_empty() && !y.b.is_empty() {
            let d = t.quad.as_ref().expect("quadratic layer");
            let bb = t.mul_base(&x.b, &y.b);
            a = padd(&a, &t.mul_base(&bb, d));
        }
        let b = padd(&t.mul_base(&x.a, &y.b), &t.mul_base(&x.b, &y.a));
        Ok(ExactScalar {
            tower: t.clone(),
            a,
            b,
        })
    }

    pub fn checked_inv(&self) -> ScalarResult<Self> {
        if self.is_zero_scalar() {
            return Err(ScalarError::DivisionByZero);
        }
        let t = &self.tower;
        if self.b.is_empty() {
            return Ok(ExactScalar {
                tower: t.clone(),
                a: t.inv_base(&self.a)?,
                b: vec![],
            });
        }
        // 1/(a+bw) = (a-bw)/(a^2 - b^2 d)
        let d = t.quad.as_ref().unwrap();
        let a2 = t.mul_base(&self.a, &self.a);
        let b2d = t.mul_base(&t.mul_base(&self.b, &self.b), d);
        let norm = psub(&a2, &b2d);
        if norm.is_empty() {
            return Err(ScalarError::ZeroDivisor);
        }
        let ninv = t.inv_base(&norm)?;
        Ok(ExactScalar {
            tower: t.clone(),
            a: t.mul_base(&self.a, &ninv),
            b: pneg(&t.mul_base(&self.b, &ninv)),
        })
    }

    pub fn is_zero_scalar(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// Exact square root within the tower, when recognizable: rational
    /// squares, monomials c·ζ^k, and d·(such a square) in a quadratic
    /// tower.  Returns `None` otherwise.
    pub fn sqrt_in_tower(&self) -> Option<Self> {
        if self.is_zero_scalar() {
            return Some(self.clone());
        }
        if !self.b.is_empty() {
            return None;
        }
        if let Some(s) = self.sqrt_of_base_part() {
            return Some(s);
        }
        // self = d·q: sqrt = sqrt(q)·√d when q has a recognizable root
        if let Some(dv) = &self.tower.quad {
            let d = ExactScalar {
                tower: self.tower.clone(),
                a: dv.clone(),
                b: vec![],
            };
            let q = self.checked_mul(&d.checked_inv().ok()?).ok()?;
            if q.b.is_empty() {
                if let Some(s) = q.sqrt_of_base_part() {
                    let w = ExactScalar {
                        tower: self.tower.clone(),
                        a: vec![],
                        b: vec![BigRational::one()],
                    };
                    let out = s * w;
                    if out.clone() * out.clone() == *self {
                        return Some(out);
                    }
                }
            }
        }
        None
    }

    /// Square root of an element with zero √d-part, treating it as a member
    /// of the base layer: rational squares and monomials c·ζ^k.
    fn sqrt_of_base_part(&self) -> Option<Self> {
        debug_assert!(self.b.is_empty());
        if let Some(r) = self.as_rational() {
            let s = rational_sqrt(&r)?;
            return Some(ExactScalar {
                tower: self.tower.clone(),
                a: vec![s],
                b: vec![],
            });
        }
        let n = self.tower.cyc?;
        for k in 0..n {
            // test self · ζ^{-k} rational, i.e. self = c·ζ^k
            let zk = self.zeta_power((n - k) % n);
            let m = self.checked_mul(&zk).ok()?;
            let c = match m.as_rational() {
                Some(c) => c,
                None => continue,
            };
            // sqrt(ζ^k): k even → ζ^{k/2}; k odd and n odd → ζ^{(k+n)/2};
            // k odd and n even would need ζ_{2n} (outside this tower).
            let half = if k % 2 == 0 {
                k / 2
            } else if n % 2 == 1 {
                (k + n) / 2
            } else {
                return None;
            };
            let (cs, cneg) = match rational_sqrt(&c) {
                Some(s) => (s, false),
                None => (rational_sqrt(&(-&c))?, true),
            };
            let mut out = self.zeta_power(half)
                * ExactScalar {
                    tower: self.tower.clone(),
                    a: vec![cs],
                    b: vec![],
                };
            if cneg {
                // need sqrt(-1) = ζ_4^{±1}; available iff 4 | n
                if n % 4 != 0 {
                    return None;
                }
                out = out * self.zeta_power(n / 4);
            }
            let sq = out.clone() * out.clone();
            return if sq == *self { Some(out) } else { None };
        }
        None
    }

    fn zeta_power(&self, k: u32) -> Self {
        let t = &self.tower;
        let n = t.cyc.expect("cyclotomic layer");
        let k = (k % n) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        ExactScalar {
            tower: t.clone(),
            a: t.reduce(&v),
            b: vec![],
        }
    }

    /// Key for hashing/ordering: tower descriptor plus coefficient vectors.
    fn key(&self) -> (Option<u32>, &Option<Coeffs>, &Coeffs, &Coeffs) {
        (self.tower.cyc, &self.tower.quad, &self.a, &self.b)
    }
}

pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}


impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.tower == other.tower {
            return self.a == other.a && self.b == other.b;
        }
        match Self::promote_pair(self, other) {
            Ok((x, y)) => x.a == y.a && x.b == y.b,
            Err(_) => false,
        }
    }
}
impl Eq for ExactScalar {}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical forms (deterministic minima over
/// conjugates); it has no field-theoretic meaning, but agrees with Eq:
/// rational values compare by value alone, irrational values by tower
/// descriptor and coefficients.
impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => self.a.cmp(&other.a),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => {
                let ka = self.key();
                let kb = other.key();
                (ka.0, ka.1, ka.2, ka.3).cmp(&(kb.0, kb.1, kb.2, kb.3))
            }
        }
    }
}

impl Hash for ExactScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Equality is value-based across towers; rational values must hash
        // identically no matter which tower carries them.  Irrational
        // values hash with their tower descriptor, so Hash agrees with Eq
        // whenever the values compared share a tower (which every hashed
        // collection in this crate maintains).
        if self.is_rational() {
            0u8.hash(state);
            self.a.hash(state);
        } else {
            1u8.hash(state);
            self.tower.cyc.hash(state);
            self.tower.quad.hash(state);
            self.a.hash(state);
            self.b.hash(state);
        }
    }
}

impl std::ops::Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("tower mismatch in add")
    }
}
impl std::ops::Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        self.checked_add(&(-rhs)).expect("tower mismatch in sub")
    }
}
impl std::ops::Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("tower mismatch in mul")
    }
}
impl std::ops::Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        ExactScalar {
            tower: self.tower.clone(),
            a: pneg(&self.a),
            b: pneg(&self.b),
        }
    }
}

impl crate::field::FieldScalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar::from_int(0)
    }
    fn one() -> Self {
        ExactScalar::from_int(1)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_scalar()
    }
    fn try_inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn from_i64(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::ratio(num, den)
    }
    fn from_rat(r: &BigRational) -> Self {
        ExactScalar::from_rational(r.clone())
    }
}

// ---------------------------------------------------------------------------
// square roots of small rationals inside cyclotomic fields
// ---------------------------------------------------------------------------

/// Express √d (d a nonzero rational) inside Q(ζ_n), when the classical
/// quadratic Gauss sum formulas allow it.  Squarefree-factor d, then:
/// √p ∈ Q(ζ_p) for p ≡ 1 (mod 4), √-p ∈ Q(ζ_p) for p ≡ 3 (mod 4),
/// √2 ∈ Q(ζ_8), √-1 = ζ_4.
pub fn sqrt_in_cyclotomic(d: &BigRational, n: u32) -> Option<ExactScalar> {
    if d.is_zero() {
        return Some(ExactScalar::from_int(0));
    }
    let tower = Tower::cyclotomic(n);
    let num = d.numer().clone();
    let den = d.denom().clone();
    // √(num/den) = √(num·den)/den
    let m = &num * &den;
    let neg = m.is_negative();
    let mut m_abs: BigInt = m.abs();
    // extract square part
    let mut square = BigInt::one();
    let mut squarefree: Vec<u64> = vec![];
    let mut p = BigInt::from(2u32);
    while &p * &p <= m_abs {
        let mut count = 0u32;
        while (&m_abs % &p).is_zero() {
            m_abs /= &p;
            count += 1;
        }
        if count > 0 {
            for _ in 0..count / 2 {
                square *= &p;
            }
            if count % 2 == 1 {
                squarefree.push(p.to_string().parse().ok()?);
            }
        }
        p += 1;
    }
    if m_abs > BigInt::one() {
        squarefree.push(m_abs.to_string().parse().ok()?);
    }
    let _ = neg;
    // acc = (square/den) · Π factors; each q ≡ 3 (mod 4) factor arrives as
    // i√q, so acc² may come out as -d.  A final ζ_4 twist fixes the sign
    // when 4 | n; either square root is acceptable.
    let mut acc = ExactScalar::in_tower(&tower, vec![BigRational::new(square, den)], vec![]);
    for q in squarefree {
        let q32 = q as u32;
        if q == 2 {
            if n % 8 != 0 {
                return None;
            }
            // √2 = ζ_8 + ζ_8^{-1}
            let z = ExactScalar::zeta_in(&tower);
            let k = n / 8;
            let s = pow_scalar(&z, k) + pow_scalar(&z, n - k);
            acc = acc * s;
        } else {
            if n % q32 != 0 {
                return None;
            }
            acc = acc * gauss_sum(&tower, n, q32);
        }
    }
    let target = ExactScalar::from_rational(d.clone());
    let sq = acc.clone() * acc.clone();
    if sq == target {
        return Some(acc);
    }
    if -sq == target && n % 4 == 0 {
        let i = pow_scalar(&ExactScalar::zeta_in(&tower), n / 4);
        let acc2 = acc * i;
        if acc2.clone() * acc2.clone() == target {
            return Some(acc2);
        }
    }
    None
}

fn gauss_sum(tower: &Arc<Tower>, n: u32, q: u32) -> ExactScalar {
    // Σ_{k=1}^{q-1} (k|q) ζ_q^k, with ζ_q = ζ_n^{n/q}
    let step = n / q;
    let mut acc = ExactScalar::from_int(0);
    let z = ExactScalar::zeta_in(tower);
    for k in 1..q {
        let legendre = legendre_symbol(k as i64, q as i64);
        let term = pow_scalar(&z, (k * step) % n);
        acc = if legendre == 1 { acc + term } else { acc - term };
    }
    acc
}

fn legendre_symbol(a: i64, p: i64) -> i64 {
    let mut base = a.rem_euclid(p);
    let mut exp = (p - 1) / 2;
    let mut acc = 1i64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    if acc == p - 1 {
        -1
    } else {
        acc
    }
}

pub fn pow_scalar(x: &ExactScalar, k: u32) -> ExactScalar {
    let mut acc = ExactScalar::from_int(1);
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        k >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// serialization of scalars: tower descriptor + coefficient strings
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct ScalarRepr {
    pub cyclotomic: Option<u32>,
    pub quad_d: Option<Vec<String>>,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

impl ExactScalar {
    pub fn to_repr(&self) -> ScalarRepr {
        ScalarRepr {
            cyclotomic: self.tower.cyc,
            quad_d: self
                .tower
                .quad
                .as_ref()
                .map(|d| d.iter().map(|c| c.to_string()).collect()),
            a: self.a.iter().map(|c| c.to_string()).collect(),
            b: self.b.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_repr(r: &ScalarRepr) -> Option<Self> {
        let parse = |v: &[String]| -> Option<Coeffs> {
            v.iter()
                .map(|s| s.parse::<BigRational>().ok())
                .collect::<Option<Vec<_>>>()
        };
        let tower = match (r.cyclotomic, &r.quad_d) {
            (None, None) => Tower::rational(),
            (Some(n), None) => Tower::cyclotomic(n),
            (base, Some(d)) => {
                let bt = match base {
                    None => Tower::rational(),
                    Some(n) => Tower::cyclotomic(n),
                };
                let dv = parse(d)?;
                let ds = ExactScalar::in_tower(&bt, dv, vec![]);
                Tower::with_sqrt(&bt, &ds)
            }
        };
        Some(ExactScalar::in_tower(&tower, parse(&r.a)?, parse(&r.b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn rational_arithmetic() {
        let x = ExactScalar::ratio(2, 3) + ExactScalar::ratio(1, 6);
        assert_eq!(x, ExactScalar::ratio(5, 6));
    }

    #[test]
    fn zeta5_relation() {
        // ζ5^4 + ζ5^3 + ζ5^2 + ζ5 = -1
        let z = ExactScalar::zeta(5);
        let s = pow_scalar(&z, 4) + pow_scalar(&z, 3) + pow_scalar(&z, 2) + z.clone();
        assert_eq!(s, ExactScalar::from_int(-1));
    }

    #[test]
    fn golden_ratio_identity() {
        // in Q(√5): ((1+√5)/2)·((√5-1)/2) = 1
        let t = Tower::with_sqrt(&Tower::rational(), &ExactScalar::from_int(5));
        let w = ExactScalar::sqrt_gen(&t);
        let one = ExactScalar::from_int(1);
        let half = ExactScalar::ratio(1, 2);
        let phi = (one.clone() + w.clone()) * half.clone();
        let psi = (w - one) * half;
        assert_eq!(phi * psi, ExactScalar::from_int(1));
    }

    #[test]
    fn inverse_in_cyclotomic() {
        let z = ExactScalar::zeta(7);
        let x = z.clone() + ExactScalar::from_int(2);
        let xi = x.checked_inv().unwrap();
        assert_eq!(x * xi, ExactScalar::from_int(1));
        assert!(ExactScalar::from_int(0).checked_inv().is_err());
    }

    #[test]
    fn embedding_zeta5_into_zeta20() {
        let z5 = ExactScalar::zeta(5);
        let z20 = ExactScalar::zeta(20);
        let e = z5.try_embed(z20.tower_ref()).unwrap();
        assert_eq!(e, pow_scalar(&z20, 4));
        // mixed arithmetic promotes automatically
        let s = z5.checked_add(&pow_scalar(&z20, 4)).unwrap();
        assert_eq!(s, pow_scalar(&z20, 4) * ExactScalar::from_int(2));
    }

    #[test]
    fn sqrt5_in_zeta20() {
        let s = sqrt_in_cyclotomic(&rat(5, 1), 20).unwrap();
        assert_eq!(s.clone() * s, ExactScalar::from_int(5));
    }

    #[test]
    fn sqrt_minus3_in_zeta3_tower() {
        let s = sqrt_in_cyclotomic(&rat(-3, 1), 3).unwrap();
        assert_eq!(s.clone() * s, ExactScalar::from_int(-3));
    }

    #[test]
    fn sqrt_minus7_in_zeta7() {
        let s = sqrt_in_cyclotomic(&rat(-7, 1), 7).unwrap();
        assert_eq!(s.clone() * s, ExactScalar::from_int(-7));
    }

    #[test]
    fn monomial_sqrt_in_tower() {
        // sqrt of ζ3 is ζ6 = -ζ3^2, available inside Q(ζ3)
        let z = ExactScalar::zeta(3);
        let r = z.sqrt_in_tower().unwrap();
        assert_eq!(r.clone() * r, z);
        // sqrt of 4·ζ7^3 inside Q(ζ7): (k+n)/2 trick for odd n
        let z7 = ExactScalar::zeta(7);
        let x = pow_scalar(&z7, 3) * ExactScalar::from_int(4);
        let r = x.sqrt_in_tower().unwrap();
        assert_eq!(r.clone() * r, x);
    }

    #[test]
    fn incompatible_towers_detected() {
        let z5 = ExactScalar::zeta(5);
        let z7 = ExactScalar::zeta(7);
        assert!(z5.checked_add(&z7).is_err());
    }

    #[test]
    fn quadratic_inverse_and_zero() {
        let t = Tower::with_sqrt(&Tower::rational(), &ExactScalar::from_int(5));
        let w = ExactScalar::sqrt_gen(&t);
        let x = w.clone() + ExactScalar::from_int(3);
        let xi = x.checked_inv().unwrap();
        assert_eq!(x * xi, ExactScalar::from_int(1));
    }
}

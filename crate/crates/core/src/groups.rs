//! Exact catalogs of the finite groups in scope: the binary dihedral,
//! tetrahedral, octahedral and icosahedral subgroups of SL2 (as unit
//! quaternions), and the rank-3 reflection groups H3, the Klein group of
//! order 336 and the Valentiner group of order 2160 (as 3×3 matrices over
//! cyclotomic towers).  Heavy bookkeeping (hashing, conjugacy, generation
//! tests) runs through faithful mod-p shadows; every stored element is
//! exact.

use crate::braid;
use crate::matrix::Matrix;
use crate::quat::Quat;
use crate::scalar::{ExactScalar, Tower};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group name: {0}")]
    UnknownGroup(String),
    #[error("closure exceeded {0} elements; generators are wrong")]
    ClosureOverflow(usize),
    #[error("element is not in the group")]
    NotInGroup,
    #[error("expected order {expected}, closure produced {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("no usable reduction prime found")]
    NoShadowPrime,
    #[error("catalog construction failed: {0}")]
    Construction(String),
}

pub type GroupResult<T> = Result<T, GroupError>;

// ---------------------------------------------------------------------------
// projective class labels
// ---------------------------------------------------------------------------

/// Projective conjugacy-class tag for elements of the rank-2 groups.
/// Order 2 → a, 3 → b, 4 → g; order 5 splits by trace into c (fifth-turn,
/// trace ±(1+√5)/2) and d (two-fifths turn, trace ±(√5−1)/2).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum ClassLabel {
    Identity,
    A,
    B,
    C,
    D,
    G,
    Other(u32),
}

impl ClassLabel {
    pub fn letter(&self) -> char {
        match self {
            ClassLabel::Identity => '1',
            ClassLabel::A => 'a',
            ClassLabel::B => 'b',
            ClassLabel::C => 'c',
            ClassLabel::D => 'd',
            ClassLabel::G => 'g',
            ClassLabel::Other(_) => '?',
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Other(n) => write!(f, "o{}", n),
            _ => write!(f, "{}", self.letter()),
        }
    }
}

/// Label of a quaternion by projective order and trace.
pub fn label_quat(q: &Quat) -> ClassLabel {
    let n = q.projective_order();
    match n {
        1 => ClassLabel::Identity,
        2 => ClassLabel::A,
        3 => ClassLabel::B,
        4 => ClassLabel::G,
        5 => {
            // trace = (a + b√m)/2 with m = 5 for the icosian groups
            let (a, b) = q.trace_pair();
            if (a, b) == (1, 1) || (a, b) == (-1, -1) {
                ClassLabel::C
            } else if (a, b) == (-1, 1) || (a, b) == (1, -1) {
                ClassLabel::D
            } else {
                ClassLabel::Other(5)
            }
        }
        n => ClassLabel::Other(n),
    }
}

/// Sorted multiset of the four local labels (M1, M2, M3, M4), e.g. "abcd".
pub fn type_string(t: &[Quat; 3]) -> String {
    let m4 = braid::m4(t);
    let mut chars: Vec<char> = [t[0], t[1], t[2], m4]
        .iter()
        .map(|q| label_quat(q).letter())
        .collect();
    chars.sort();
    chars.into_iter().collect()
}

/// Pretty form of a type string: "aabc" → "a^2 b c".
pub fn pretty_type(s: &str) -> String {
    let mut out: Vec<String> = vec![];
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let k = j - i;
        if k == 1 {
            out.push(c.to_string());
        } else {
            out.push(format!("{}^{}", c, k));
        }
        i = j;
    }
    out.join(" ")
}

// ---------------------------------------------------------------------------
// quaternion groups
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct QuatGroup {
    pub name: String,
    pub m: i64,
    pub gens: Vec<Quat>,
    pub elements: Vec<Quat>,
    pub order: usize,
    /// one conjugator per ±pair (−g acts like g by conjugation)
    conjugators: Vec<Quat>,
    elem_set: HashSet<Quat>,
}

impl QuatGroup {
    fn build(name: &str, m: i64, gens: Vec<Quat>, expected: usize) -> GroupResult<QuatGroup> {
        for g in &gens {
            assert!(g.is_unit(), "generator is not a unit quaternion");
        }
        let elements = closure_quat(&gens, 2 * expected)?;
        if elements.len() != expected {
            return Err(GroupError::OrderMismatch {
                expected,
                got: elements.len(),
            });
        }
        let mut sorted = elements.clone();
        sorted.sort();
        let elem_set: HashSet<Quat> = sorted.iter().copied().collect();
        let mut conjugators = vec![];
        let mut seen = HashSet::new();
        for g in &sorted {
            if seen.contains(g) {
                continue;
            }
            seen.insert(*g);
            seen.insert(g.neg());
            conjugators.push(*g);
        }
        Ok(QuatGroup {
            name: name.to_string(),
            m,
            gens,
            order: sorted.len(),
            conjugators,
            elem_set,
            elements: sorted,
        })
    }

    pub fn contains(&self, q: &Quat) -> bool {
        self.elem_set.contains(q)
    }

    pub fn center(&self) -> Vec<Quat> {
        self.elements
            .iter()
            .copied()
            .filter(|z| {
                self.elements
                    .iter()
                    .all(|g| z.mul(g) == g.mul(z))
            })
            .collect()
    }

    pub fn class_label(&self, q: &Quat) -> GroupResult<ClassLabel> {
        if !self.contains(q) {
            return Err(GroupError::NotInGroup);
        }
        Ok(label_quat(q))
    }

    /// Representatives of the conjugacy classes (deterministic order).
    pub fn class_reps(&self) -> Vec<Quat> {
        let mut visited: HashSet<Quat> = HashSet::new();
        let mut reps = vec![];
        for e in &self.elements {
            if visited.contains(e) {
                continue;
            }
            reps.push(*e);
            for g in &self.conjugators {
                visited.insert(g.mul(e).mul(&g.inv()));
            }
        }
        reps
    }

    /// Lexicographic minimum of the conjugated triple over the group.
    pub fn canonical_triple(&self, t: &[Quat; 3]) -> [Quat; 3] {
        let mut best: Option<[Quat; 3]> = None;
        for g in &self.conjugators {
            let gi = g.inv();
            let cand = [
                g.mul(&t[0]).mul(&gi),
                g.mul(&t[1]).mul(&gi),
                g.mul(&t[2]).mul(&gi),
            ];
            match &best {
                None => best = Some(cand),
                Some(b) => {
                    if cand < *b {
                        best = Some(cand);
                    }
                }
            }
        }
        best.unwrap()
    }

    /// Number of distinct conjugates of a triple (orbit size under
    /// conjugation by the group).
    pub fn conj_orbit_size(&self, t: &[Quat; 3]) -> usize {
        let mut set: HashSet<[Quat; 3]> = HashSet::new();
        for g in &self.elements {
            let gi = g.inv();
            set.insert([
                g.mul(&t[0]).mul(&gi),
                g.mul(&t[1]).mul(&gi),
                g.mul(&t[2]).mul(&gi),
            ]);
        }
        set.len()
    }

    pub fn generates(&self, t: &[Quat; 3]) -> bool {
        match closure_quat(&t.to_vec(), self.order + 1) {
            Ok(els) => els.len() == self.order,
            Err(_) => false,
        }
    }

    /// All conjugacy classes of (ordered) triples, as canonical
    /// representatives, split into (generating, non-generating).
    pub fn triple_classes(&self) -> (Vec<[Quat; 3]>, Vec<[Quat; 3]>) {
        use rayon::prelude::*;
        let reps = self.class_reps();
        let pairs: Vec<(Quat, Quat)> = reps
            .iter()
            .flat_map(|r| self.elements.iter().map(move |m2| (*r, *m2)))
            .collect();
        let sets: Vec<HashSet<[Quat; 3]>> = pairs
            .par_iter()
            .map(|(m1, m2)| {
                let mut local = HashSet::new();
                for m3 in &self.elements {
                    local.insert(self.canonical_triple(&[*m1, *m2, *m3]));
                }
                local
            })
            .collect();
        let mut all: HashSet<[Quat; 3]> = HashSet::new();
        for s in sets {
            all.extend(s);
        }
        let mut classes: Vec<[Quat; 3]> = all.into_iter().collect();
        classes.sort();
        let (mut gen, mut non) = (vec![], vec![]);
        for t in classes {
            if self.generates(&t) {
                gen.push(t);
            } else {
                non.push(t);
            }
        }
        (gen, non)
    }
}

fn closure_quat(gens: &[Quat], cap: usize) -> GroupResult<Vec<Quat>> {
    let m = gens.first().map(|g| g.m).unwrap_or(1);
    let mut seen: HashSet<Quat> = HashSet::new();
    let mut list = vec![Quat::one(m)];
    seen.insert(Quat::one(m));
    let mut head = 0;
    while head < list.len() {
        let cur = list[head];
        head += 1;
        for g in gens {
            let p = cur.mul(g);
            if seen.insert(p) {
                if list.len() >= cap {
                    return Err(GroupError::ClosureOverflow(cap));
                }
                list.push(p);
            }
        }
    }
    Ok(list)
}

// quaternion constants

fn icosian_x5() -> Quat {
    // (φ + i + (φ−1)j)/2: real part cos(π/5), order 10
    Quat::new(5, [(1, 1), (2, 0), (-1, 1), (0, 0)])
}

fn quat_s(m: i64) -> Quat {
    // (1 + i + j + k)/2, order 6
    Quat::new(m, [(2, 0), (2, 0), (2, 0), (2, 0)])
}

pub fn binary_dihedral(n4: usize) -> GroupResult<QuatGroup> {
    let (m, x) = match n4 {
        8 => (1, Quat::i(1)),
        12 => (3, Quat::new(3, [(2, 0), (0, 2), (0, 0), (0, 0)])),
        16 => (2, Quat::new(2, [(0, 2), (0, 2), (0, 0), (0, 0)])),
        20 => (5, icosian_x5()),
        _ => {
            return Err(GroupError::UnknownGroup(format!(
                "binary-dihedral-{}",
                n4
            )))
        }
    };
    let y = if n4 == 20 { Quat::k(5) } else { Quat::j(m) };
    QuatGroup::build(&format!("binary-dihedral-{}", n4), m, vec![x, y], n4)
}

pub fn binary_tetrahedral() -> GroupResult<QuatGroup> {
    QuatGroup::build(
        "binary-tetrahedral",
        1,
        vec![Quat::i(1), quat_s(1)],
        24,
    )
}

pub fn binary_octahedral() -> GroupResult<QuatGroup> {
    let t = Quat::new(2, [(0, 2), (0, 2), (0, 0), (0, 0)]); // (1+i)/√2
    QuatGroup::build("binary-octahedral", 2, vec![t, quat_s(2)], 48)
}

pub fn binary_icosahedral() -> GroupResult<QuatGroup> {
    QuatGroup::build(
        "binary-icosahedral",
        5,
        vec![icosian_x5(), quat_s(5), Quat::i(5)],
        120,
    )
}

// ---------------------------------------------------------------------------
// mod-p shadows for matrix groups
// ---------------------------------------------------------------------------

/// Reduction of a tower modulo a prime p: ζ_n ↦ an order-n element of F_p*,
/// √d ↦ a square root of the image of d.  For a finite matrix group whose
/// entries are p-integral and whose order is coprime to p, this reduction
/// is injective on the group, so fingerprints are collision-free there
/// (products are still verified exactly on every hash hit).
#[derive(Clone, Debug)]
pub struct FpShadow {
    pub p: u64,
    pub zeta_img: u64,
    pub sqrt_d_img: Option<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = vec![];
    let mut m = p - 1;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            factors.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'outer: for g in 2..p {
        for &f in &factors {
            if pow_mod(g, (p - 1) / f, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("p is prime")
}

impl FpShadow {
    /// Find a shadow for the tower avoiding primes dividing `avoid`
    /// (typically the group order and generator denominators).
    pub fn find(tower: &Arc<Tower>, avoid: &[u64], start: u64) -> GroupResult<FpShadow> {
        let n = tower.cyc.unwrap_or(1) as u64;
        let mut p = start.max(3);
        for _ in 0..100000 {
            p += 1;
            if !is_prime(p) {
                continue;
            }
            if n > 1 && (p - 1) % n != 0 {
                continue;
            }
            if avoid.iter().any(|&a| a != 0 && a % p == 0) {
                continue;
            }
            let zeta_img = if n > 1 {
                let g = primitive_root(p);
                pow_mod(g, (p - 1) / n, p)
            } else {
                1
            };
            let sqrt_d_img = match &tower.quad {
                None => None,
                Some(dv) => {
                    // evaluate d at zeta_img, then look for a square root
                    let dimg = match eval_coeffs_mod(dv, zeta_img, p) {
                        Some(v) => v,
                        None => continue,
                    };
                    let mut found = None;
                    for y in 0..p {
                        if y * y % p == dimg {
                            found = Some(y);
                            break;
                        }
                    }
                    match found {
                        Some(y) => Some(y),
                        None => continue,
                    }
                }
            };
            return Ok(FpShadow {
                p,
                zeta_img,
                sqrt_d_img,
            });
        }
        Err(GroupError::NoShadowPrime)
    }

    pub fn scalar(&self, s: &ExactScalar) -> Option<u64> {
        let a = eval_coeffs_mod(s.coeff_a(), self.zeta_img, self.p)?;
        if s.coeff_b().is_empty() {
            return Some(a);
        }
        let b = eval_coeffs_mod(s.coeff_b(), self.zeta_img, self.p)?;
        let w = self.sqrt_d_img?;
        Some((a + b * w % self.p) % self.p)
    }

    pub fn matrix(&self, m: &Matrix<ExactScalar>) -> Option<Vec<u64>> {
        m.e.iter().map(|s| self.scalar(s)).collect()
    }

    pub fn mat_mul(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % p;
                }
            }
        }
        out
    }

    pub fn mat_inv3(&self, m: &[u64]) -> Vec<u64> {
        let p = self.p;
        let det = {
            let d = |i: usize, j: usize| m[i * 3 + j] as i128;
            let raw = d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1))
                - d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0))
                + d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0));
            raw.rem_euclid(p as i128) as u64
        };
        let dinv = inv_mod(det, p);
        let mut adj = vec![0u64; 9];
        for i in 0..3 {
            for j in 0..3 {
                // cofactor C_ji
                let mut sub = [0i128; 4];
                let mut idx = 0;
                for r in 0..3 {
                    if r == j {
                        continue;
                    }
                    for c in 0..3 {
                        if c == i {
                            continue;
                        }
                        sub[idx] = m[r * 3 + c] as i128;
                        idx += 1;
                    }
                }
                let minor = sub[0] * sub[3] - sub[1] * sub[2];
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[i * 3 + j] = (sign as i128 * minor).rem_euclid(p as i128) as u64;
            }
        }
        adj.iter().map(|&x| x * dinv % p).collect()
    }
}

fn eval_coeffs_mod(v: &[BigRational], x: u64, p: u64) -> Option<u64> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let red = |z: &BigInt| -> u64 {
        let m = ((z % &pb) + &pb) % &pb;
        m.to_u64().expect("residue fits in u64")
    };
    let mut acc: u64 = 0;
    for c in v.iter().rev() {
        let dm = red(c.denom());
        if dm == 0 {
            return None;
        }
        let cv = red(c.numer()) * inv_mod(dm, p) % p;
        acc = (acc * x + cv) % p;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// 3×3 reflection groups
// ---------------------------------------------------------------------------

pub struct MatGroup {
    pub name: String,
    pub tower: Arc<Tower>,
    /// the catalog generating reflections
    pub gens: Vec<Matrix<ExactScalar>>,
    pub elements: Vec<Matrix<ExactScalar>>,
    pub order: usize,
    pub shadow: FpShadow,
    /// shadow of each element, parallel to `elements`
    pub shadow_elems: Vec<Vec<u64>>,
    shadow_index: HashMap<Vec<u64>, usize>,
    /// indices of the reflections (order 2, rank(r−1) = 1)
    pub reflections: Vec<usize>,
}

/// rank(r − 1) over the exact field.
pub fn rank_minus_one(m: &Matrix<ExactScalar>) -> usize {
    let n = m.n;
    let mut d = m.clone();
    for i in 0..n {
        let v = d.at(i, i).clone() - ExactScalar::from_int(1);
        d.set(i, i, v);
    }
    d.rank()
}

pub fn is_reflection(m: &Matrix<ExactScalar>) -> bool {
    rank_minus_one(m) == 1 && (m.clone() * m.clone()).is_identity()
}

impl MatGroup {
    pub fn build(
        name: &str,
        tower: &Arc<Tower>,
        gens: Vec<Matrix<ExactScalar>>,
        expected: usize,
    ) -> GroupResult<MatGroup> {
        let mut start = 20;
        loop {
            let shadow = FpShadow::find(tower, &[expected as u64], start)?;
            match Self::build_with_shadow(name, tower, &gens, expected, &shadow) {
                Ok(g) => return Ok(g),
                Err(GroupError::NoShadowPrime) => {
                    start = shadow.p;
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn build_with_shadow(
        name: &str,
        tower: &Arc<Tower>,
        gens: &[Matrix<ExactScalar>],
        expected: usize,
        shadow: &FpShadow,
    ) -> GroupResult<MatGroup> {
        let cap = 2 * expected;
        let mut elements = vec![Matrix::<ExactScalar>::identity(3)];
        let mut shadows = vec![shadow
            .matrix(&elements[0])
            .ok_or(GroupError::NoShadowPrime)?];
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        index.insert(shadows[0].clone(), 0);
        let gshadows: Vec<Vec<u64>> = gens
            .iter()
            .map(|g| shadow.matrix(g).ok_or(GroupError::NoShadowPrime))
            .collect::<GroupResult<_>>()?;
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            let cur_fp = shadows[head].clone();
            head += 1;
            for (g, gfp) in gens.iter().zip(&gshadows) {
                let pfp = shadow.mat_mul(&cur_fp, gfp, 3);
                if let Some(&i) = index.get(&pfp) {
                    // verify exactly on hash hit (guards against a shadow
                    // collision if the generators are not what they claim)
                    debug_assert!(elements[i] == cur.clone() * g.clone());
                    continue;
                }
                let prod = cur.clone() * g.clone();
                if shadow.matrix(&prod).as_ref() != Some(&pfp) {
                    return Err(GroupError::NoShadowPrime);
                }
                if elements.len() >= cap {
                    return Err(GroupError::ClosureOverflow(cap));
                }
                index.insert(pfp.clone(), elements.len());
                elements.push(prod);
                shadows.push(pfp);
            }
        }
        if elements.len() != expected {
            return Err(GroupError::OrderMismatch {
                expected,
                got: elements.len(),
            });
        }
        let reflections: Vec<usize> = (0..elements.len())
            .filter(|&i| is_reflection(&elements[i]))
            .collect();
        Ok(MatGroup {
            name: name.to_string(),
            tower: tower.clone(),
            gens: gens.to_vec(),
            order: elements.len(),
            shadow: shadow.clone(),
            shadow_elems: shadows,
            shadow_index: index,
            elements,
            reflections,
        })
    }

    pub fn contains_fp(&self, fp: &[u64]) -> Option<usize> {
        self.shadow_index.get(fp).copied()
    }

    /// Canonical conjugation key of a triple of group elements, computed
    /// in the shadow (faithful on the group).
    pub fn canonical_triple_key(&self, t: &[Matrix<ExactScalar>; 3]) -> Vec<u64> {
        let fps: Vec<Vec<u64>> = t
            .iter()
            .map(|m| self.shadow.matrix(m).expect("triple entries must reduce"))
            .collect();
        self.canonical_key_fp(&fps)
    }

    pub fn canonical_key_fp(&self, fps: &[Vec<u64>]) -> Vec<u64> {
        let mut best: Option<Vec<u64>> = None;
        for gfp in &self.shadow_elems {
            let gi = self.shadow.mat_inv3(gfp);
            let mut cand = Vec::with_capacity(27);
            for f in fps {
                let c = self
                    .shadow
                    .mat_mul(&self.shadow.mat_mul(gfp, f, 3), &gi, 3);
                cand.extend(c);
            }
            match &best {
                None => best = Some(cand),
                Some(b) => {
                    if cand < *b {
                        best = Some(cand)
                    }
                }
            }
        }
        best.unwrap()
    }

    /// Generation test via the shadow: the subgroup generated by the triple
    /// reaches more than `threshold` elements iff it is the whole group
    /// (threshold = the largest proper subgroup order).
    pub fn generates(&self, t: &[Matrix<ExactScalar>; 3], threshold: usize) -> bool {
        let fps: Vec<Vec<u64>> = match t.iter().map(|m| self.shadow.matrix(m)).collect() {
            Some(v) => v,
            None => return false,
        };
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut queue: Vec<Vec<u64>> = vec![self
            .shadow
            .matrix(&Matrix::identity(3))
            .expect("identity reduces")];
        seen.insert(queue[0].clone());
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head].clone();
            head += 1;
            for f in &fps {
                let p = self.shadow.mat_mul(&cur, f, 3);
                if seen.insert(p.clone()) {
                    if seen.len() > threshold {
                        return true;
                    }
                    queue.push(p);
                }
            }
        }
        seen.len() == self.order
    }
}

fn mat3_from_rows(rows: [[ExactScalar; 3]; 3]) -> Matrix<ExactScalar> {
    Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().collect()).collect())
}

/// Reflection 1 + e_i ⊗ α with α a row vector: identity except row i,
/// which becomes e_i + α.
pub fn reflection_from_row(i: usize, alpha: &[ExactScalar; 3]) -> Matrix<ExactScalar> {
    let mut m = Matrix::<ExactScalar>::identity(3);
    for j in 0..3 {
        let v = m.at(i, j).clone() + alpha[j].clone();
        m.set(i, j, v);
    }
    m
}

/// H3 from its Cartan matrix over Q(√5): pairwise products of the three
/// generating reflections have orders 2, 3, 5.
pub fn h3_reflection() -> GroupResult<MatGroup> {
    let tower = Tower::with_sqrt(&Tower::rational(), &ExactScalar::from_int(5));
    let w = ExactScalar::sqrt_gen(&tower); // √5
    let half = ExactScalar::ratio(1, 2);
    let phi = (ExactScalar::from_int(1) + w) * half; // (1+√5)/2
    let z = ExactScalar::from_int(0);
    let one = ExactScalar::from_int(1);
    let m2 = ExactScalar::from_int(-2);
    let cartan: [[ExactScalar; 3]; 3] = [
        [m2.clone(), z.clone(), phi.clone()],
        [z.clone(), m2.clone(), one.clone()],
        [phi.clone(), one.clone(), m2.clone()],
    ];
    let gens: Vec<Matrix<ExactScalar>> = (0..3)
        .map(|i| reflection_from_row(i, &cartan[i]))
        .collect();
    // Coxeter relations pinned before the (slower) closure
    let r = |i: usize| gens[i].clone();
    assert!((r(0) * r(1)).pow(2).is_identity());
    assert!((r(1) * r(2)).pow(3).is_identity());
    assert!((r(2) * r(0)).pow(5).is_identity());
    for g in &gens {
        assert!(is_reflection(g));
    }
    MatGroup::build("h3", &tower, gens, 120)
}

/// The Klein reflection group of order 336 over Q(ζ7): reflections are the
/// negatives of the 21 involutions of the simple group of order 168, here
/// generated by diag(ζ⁴, ζ², ζ), the coordinate 3-cycle, and the standard
/// symmetric involution with entries (ζ^k − ζ^{-k})/√−7.
pub fn klein_reflection() -> GroupResult<MatGroup> {
    let tower = Tower::cyclotomic(7);
    let zp = |k: u32| crate::scalar::pow_scalar(&ExactScalar::zeta_in(&tower), k);
    let z = ExactScalar::from_int(0);
    let g = mat3_from_rows([
        [zp(4), z.clone(), z.clone()],
        [z.clone(), zp(2), z.clone()],
        [z.clone(), z.clone(), zp(1)],
    ]);
    let h = mat3_from_rows([
        [z.clone(), ExactScalar::from_int(1), z.clone()],
        [z.clone(), z.clone(), ExactScalar::from_int(1)],
        [ExactScalar::from_int(1), z.clone(), z.clone()],
    ]);
    // √−7 = ζ+ζ²+ζ⁴−ζ³−ζ⁵−ζ⁶ (quadratic Gauss sum)
    let sqrt_m7 = zp(1) + zp(2) + zp(4) - zp(3) - zp(5) - zp(6);
    assert_eq!(
        sqrt_m7.clone() * sqrt_m7.clone(),
        ExactScalar::from_int(-7)
    );
    let c = ExactScalar::from_int(-1) * sqrt_m7.checked_inv().unwrap();
    let d = |a: u32, b: u32| (zp(a) - zp(b)) * c.clone();
    let iota = mat3_from_rows([
        [d(1, 6), d(2, 5), d(4, 3)],
        [d(2, 5), d(4, 3), d(1, 6)],
        [d(4, 3), d(1, 6), d(2, 5)],
    ]);
    assert!((iota.clone() * iota.clone()).is_identity());
    assert_eq!(iota.det(), ExactScalar::from_int(1));
    assert_eq!(iota.trace(), ExactScalar::from_int(-1));

    // the simple group of order 168, then its 21 involutions negated
    let simple = MatGroup::build("klein-simple", &tower, vec![g, h, iota], 168)?;
    let mut reflections: Vec<Matrix<ExactScalar>> = simple
        .elements
        .iter()
        .filter(|m| {
            m.trace() == ExactScalar::from_int(-1)
                && ((*m).clone() * (*m).clone()).is_identity()
        })
        .map(|m| -m.clone())
        .collect();
    if reflections.len() != 21 {
        return Err(GroupError::Construction(format!(
            "expected 21 reflections, found {}",
            reflections.len()
        )));
    }
    // deterministic order for the generating-triple search
    reflections.sort_by_key(|m| simple.shadow.matrix(m).unwrap());

    // find a generating triple of reflections whose braid orbit has size 7
    let probe = MatGroup::build("klein-reflection", &tower, reflections.clone(), 336)?;
    let max_proper = 48; // 2 × (largest proper subgroup of the simple group)
    let mut seen_orbits: HashSet<Vec<u64>> = HashSet::new();
    let mut fallback: Option<[Matrix<ExactScalar>; 3]> = None;
    for i in 0..reflections.len() {
        for j in 0..reflections.len() {
            if j == i {
                continue;
            }
            for k in 0..reflections.len() {
                if k == i || k == j {
                    continue;
                }
                let t = [
                    reflections[i].clone(),
                    reflections[j].clone(),
                    reflections[k].clone(),
                ];
                if !probe.generates(&t, max_proper) {
                    continue;
                }
                if fallback.is_none() {
                    fallback = Some(t.clone());
                }
                let key = probe.canonical_triple_key(&t);
                if seen_orbits.contains(&key) {
                    continue;
                }
                let members = reflection_triple_orbit(&probe, &t, 200);
                if let Some(members) = members {
                    let size = members.len();
                    seen_orbits.extend(members);
                    if size == 7 {
                        return MatGroup::build("klein-reflection", &tower, t.to_vec(), 336);
                    }
                }
            }
        }
    }
    let t = fallback.ok_or_else(|| {
        GroupError::Construction("no generating reflection triple found".into())
    })?;
    MatGroup::build("klein-reflection", &tower, t.to_vec(), 336)
}

/// Orbit of a reflection triple under ⟨ω1², ω2²⟩, as canonical shadow keys.
pub fn reflection_triple_orbit(
    group: &MatGroup,
    t: &[Matrix<ExactScalar>; 3],
    cap: usize,
) -> Option<HashSet<Vec<u64>>> {
    let key = |t: &[Matrix<ExactScalar>; 3]| group.canonical_triple_key(t);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue = vec![t.clone()];
    seen.insert(key(t));
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        for next in [braid::omega1_sq(&cur), braid::omega2_sq(&cur)] {
            if seen.insert(key(&next)) {
                if seen.len() > cap {
                    return None;
                }
                queue.push(next);
            }
        }
    }
    Some(seen)
}

pub fn reflection_triple_orbit_size(
    group: &MatGroup,
    t: &[Matrix<ExactScalar>; 3],
    cap: usize,
) -> Option<usize> {
    reflection_triple_orbit(group, t, cap).map(|s| s.len())
}

/// Classify the generating reflection triples of a rank-3 group into
/// classes under the full Hurwitz moves ⟨ω1, ω2⟩ together with
/// conjugation, and report (degree, genus) per class, where the degree is
/// the orbit size of a member under the squares ⟨ω1², ω2²⟩ (the branch
/// count of the associated solution).  All reflections of the catalog
/// groups are conjugate, so triples with first entry a fixed reflection
/// meet every conjugacy class.
pub fn generating_reflection_orbit_classes(
    group: &MatGroup,
    max_proper: usize,
    cap: usize,
) -> Vec<(usize, i64)> {
    let refl: Vec<Matrix<ExactScalar>> = group
        .reflections
        .iter()
        .map(|&i| group.elements[i].clone())
        .collect();
    assert!(!refl.is_empty());
    let rho = refl[0].clone();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = vec![];
    for r2 in &refl {
        for r3 in &refl {
            let t = [rho.clone(), r2.clone(), r3.clone()];
            if !group.generates(&t, max_proper) {
                continue;
            }
            let key = group.canonical_triple_key(&t);
            if seen.contains(&key) {
                continue;
            }
            // full-braid class
            let class = crate::hurwitz::orbit_generic(
                t.clone(),
                |x| crate::braid::omega1(x),
                |x| crate::braid::omega2(x),
                |x| group.canonical_triple_key(x),
                cap,
            )
            .expect("class within cap");
            for m in &class.members {
                seen.insert(group.canonical_triple_key(m));
            }
            // degree and genus from the pure (squared) orbit of the seed
            let orbit = crate::hurwitz::orbit_generic(
                t,
                |x| crate::braid::omega1_sq(x),
                |x| crate::braid::omega2_sq(x),
                |x| group.canonical_triple_key(x),
                cap,
            )
            .expect("orbit within cap");
            let genus = crate::hurwitz::genus_from_perms(&orbit.sigma0, &orbit.sigma1);
            out.push((orbit.members.len(), genus));
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// catalog registry
// ---------------------------------------------------------------------------

pub enum GroupEntry {
    Quat(QuatGroup),
    Mat(MatGroup),
}

impl GroupEntry {
    pub fn order(&self) -> usize {
        match self {
            GroupEntry::Quat(g) => g.order,
            GroupEntry::Mat(g) => g.order,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            GroupEntry::Quat(g) => &g.name,
            GroupEntry::Mat(g) => &g.name,
        }
    }
}

pub const GROUP_NAMES: &[&str] = &[
    "quaternion-8",
    "binary-dihedral-8",
    "binary-dihedral-12",
    "binary-dihedral-16",
    "binary-dihedral-20",
    "binary-tetrahedral",
    "binary-octahedral",
    "binary-icosahedral",
    "h3",
    "klein-reflection",
    "valentiner",
];

/// Build (or fetch from the in-process cache) a catalog group by name.
pub fn build_group(name: &str) -> GroupResult<Arc<GroupEntry>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<GroupEntry>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(name) {
        return Ok(g.clone());
    }
    let built = match name {
        "quaternion-8" | "binary-dihedral-8" => GroupEntry::Quat(binary_dihedral(8)?),
        "binary-dihedral-12" => GroupEntry::Quat(binary_dihedral(12)?),
        "binary-dihedral-16" => GroupEntry::Quat(binary_dihedral(16)?),
        "binary-dihedral-20" => GroupEntry::Quat(binary_dihedral(20)?),
        "binary-tetrahedral" => GroupEntry::Quat(binary_tetrahedral()?),
        "binary-octahedral" => GroupEntry::Quat(binary_octahedral()?),
        "binary-icosahedral" => GroupEntry::Quat(binary_icosahedral()?),
        "h3" => GroupEntry::Mat(h3_reflection()?),
        "klein-reflection" => GroupEntry::Mat(klein_reflection()?),
        "valentiner" => GroupEntry::Mat(crate::midconv::build_valentiner()?),
        _ => return Err(GroupError::UnknownGroup(name.to_string())),
    };
    let arc = Arc::new(built);
    cache
        .lock()
        .unwrap()
        .insert(name.to_string(), arc.clone());
    Ok(arc)
}

// ---------------------------------------------------------------------------
// JSON export
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct GroupExport {
    pub name: String,
    pub rank: usize,
    pub order: usize,
    pub tower: String,
    pub generators: Vec<Vec<crate::scalar::ScalarRepr>>,
}

pub fn export_group(entry: &GroupEntry) -> GroupExport {
    match entry {
        GroupEntry::Quat(g) => GroupExport {
            name: g.name.clone(),
            rank: 2,
            order: g.order,
            tower: format!("Q(z{})", Quat::zeta_order(g.m)),
            generators: g
                .gens
                .iter()
                .map(|q| q.to_matrix().e.iter().map(|s| s.to_repr()).collect())
                .collect(),
        },
        GroupEntry::Mat(g) => GroupExport {
            name: g.name.clone(),
            rank: 3,
            order: g.order,
            tower: g.tower.descriptor(),
            generators: g
                .gens
                .iter()
                .map(|m| m.e.iter().map(|s| s.to_repr()).collect())
                .collect(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_group_orders() {
        assert_eq!(binary_dihedral(8).unwrap().order, 8);
        assert_eq!(binary_dihedral(12).unwrap().order, 12);
        assert_eq!(binary_dihedral(16).unwrap().order, 16);
        assert_eq!(binary_dihedral(20).unwrap().order, 20);
        assert_eq!(binary_tetrahedral().unwrap().order, 24);
        assert_eq!(binary_octahedral().unwrap().order, 48);
    }

    #[test]
    fn binary_icosahedral_order_120() {
        let g = binary_icosahedral().unwrap();
        assert_eq!(g.order, 120);
        assert_eq!(g.center().len(), 2);
        // 9 conjugacy classes
        assert_eq!(g.class_reps().len(), 9);
    }

    #[test]
    fn class_labels_in_2i() {
        let g = binary_icosahedral().unwrap();
        assert_eq!(
            g.class_label(&Quat::minus_one(5)).unwrap(),
            ClassLabel::Identity
        );
        // trace (1+√5)/2 ⇒ projective order 5, label c; trace 1 ⇒ order 3, label b
        let mut seen_c = false;
        let mut seen_b = false;
        for e in &g.elements {
            let l = label_quat(e);
            if e.trace_pair() == (1, 1) {
                assert_eq!(l, ClassLabel::C);
                assert_eq!(e.projective_order(), 5);
                seen_c = true;
            }
            if e.trace_pair() == (2, 0) {
                assert_eq!(l, ClassLabel::B);
                assert_eq!(e.projective_order(), 3);
                // M³ = ±1
                let m3 = e.mul(e).mul(e);
                assert!(m3.is_central());
                seen_b = true;
            }
        }
        assert!(seen_c && seen_b);
    }

    #[test]
    fn h3_order_and_reflections() {
        let g = h3_reflection().unwrap();
        assert_eq!(g.order, 120);
        assert_eq!(g.reflections.len(), 15);
    }

    #[test]
    fn klein_reflection_group() {
        let g = klein_reflection().unwrap();
        assert_eq!(g.order, 336);
        assert_eq!(g.reflections.len(), 21);
        for i in 0..3 {
            assert!(is_reflection(&g.gens[i]));
        }
    }
}

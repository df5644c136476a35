//! Finite orbits of the pure mapping-class-group action ⟨ω1², ω2²⟩ on
//! conjugacy classes of monodromy triples, branch permutations and the
//! Riemann–Hurwitz genus, and the equivalence classing that collapses the
//! generating triples of the binary icosahedral group into the table of
//! solution rows.

use crate::braid::{self, GroupElt};
use crate::groups::{label_quat, type_string, ClassLabel, QuatGroup};
use crate::matrix::Matrix;
use crate::quat::Quat;
use crate::scalar::{ExactScalar, Tower};
use crate::weylf4::{self, Theta};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit exceeded the cap of {0} states")]
    OrbitCapExceeded(usize),
}

/// Orbit of a triple class under ⟨ω1², ω2²⟩ with the permutations the two
/// generators induce on it.
pub struct OrbitData<T> {
    pub members: Vec<T>,
    /// σ0: action of ω1² on member indices
    pub sigma0: Vec<usize>,
    /// σ1: action of ω2²
    pub sigma1: Vec<usize>,
}

pub fn orbit_generic<T, K, F1, F2, C>(
    seed: T,
    step1: F1,
    step2: F2,
    canon: C,
    cap: usize,
) -> Result<OrbitData<T>, OrbitError>
where
    T: Clone,
    K: Eq + Hash,
    F1: Fn(&T) -> T,
    F2: Fn(&T) -> T,
    C: Fn(&T) -> K,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut members = vec![seed.clone()];
    index.insert(canon(&seed), 0);
    let mut sigma0: Vec<usize> = vec![];
    let mut sigma1: Vec<usize> = vec![];
    let mut head = 0;
    while head < members.len() {
        let cur = members[head].clone();
        for (which, next) in [(0, step1(&cur)), (1, step2(&cur))] {
            let k = canon(&next);
            let idx = match index.get(&k) {
                Some(&i) => i,
                None => {
                    if members.len() >= cap {
                        return Err(OrbitError::OrbitCapExceeded(cap));
                    }
                    members.push(next.clone());
                    index.insert(k, members.len() - 1);
                    members.len() - 1
                }
            };
            if which == 0 {
                sigma0.push(idx);
            } else {
                sigma1.push(idx);
            }
        }
        head += 1;
    }
    Ok(OrbitData {
        members,
        sigma0,
        sigma1,
    })
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    count
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = vec![];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = vec![];
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = perm[i];
        }
        cycles.push(cyc);
    }
    cycles
}

/// 2 − 2g = (c0 + c1 + c∞) − d for a degree-d cover of P¹ branched over
/// three points with cycle counts c_p (Riemann–Hurwitz).
pub fn genus_from_perms(sigma0: &[usize], sigma1: &[usize]) -> i64 {
    let d = sigma0.len() as i64;
    let sigma_inf = invert_perm(&compose(sigma1, sigma0));
    let c = (cycle_count(sigma0) + cycle_count(sigma1) + cycle_count(&sigma_inf)) as i64;
    let two_minus_2g = c - d;
    let g2 = 2 - two_minus_2g;
    assert!(g2 >= 0 && g2 % 2 == 0, "Riemann-Hurwitz genus must be a nonnegative integer");
    g2 / 2
}

/// composition: apply `first`, then `second`.
fn compose(second: &[usize], first: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

#[derive(Serialize, Clone)]
pub struct OrbitReport {
    pub degree: usize,
    pub genus: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_string: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Theta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walls: Option<u32>,
    pub sigma0_cycles: Vec<Vec<usize>>,
    pub sigma1_cycles: Vec<Vec<usize>>,
    pub sigma_inf_cycles: Vec<Vec<usize>>,
}

fn report_from<T>(orbit: &OrbitData<T>) -> OrbitReport {
    let sigma_inf = invert_perm(&compose(&orbit.sigma1, &orbit.sigma0));
    OrbitReport {
        degree: orbit.members.len(),
        genus: genus_from_perms(&orbit.sigma0, &orbit.sigma1),
        type_string: None,
        theta: None,
        walls: None,
        sigma0_cycles: cycles_of(&orbit.sigma0),
        sigma1_cycles: cycles_of(&orbit.sigma1),
        sigma_inf_cycles: cycles_of(&sigma_inf),
    }
}

// ---------------------------------------------------------------------------
// seven traces
// ---------------------------------------------------------------------------

/// (tr M1, tr M2, tr M3, tr M2M1, tr M3M2, tr M3M1, tr M3M2M1): the seven
/// generators of the invariant ring on SL2 triples; a complete conjugation
/// fingerprint for irreducible triples.
pub fn seven_traces_mat(t: &[Matrix<ExactScalar>; 3]) -> [ExactScalar; 7] {
    let m21 = t[1].clone() * t[0].clone();
    let m32 = t[2].clone() * t[1].clone();
    let m31 = t[2].clone() * t[0].clone();
    let m321 = t[2].clone() * m21.clone();
    [
        t[0].trace(),
        t[1].trace(),
        t[2].trace(),
        m21.trace(),
        m32.trace(),
        m31.trace(),
        m321.trace(),
    ]
}

/// Quaternion version; traces are exact pairs (a, b) meaning (a + b√m)/2.
pub fn seven_traces_quat(t: &[Quat; 3]) -> [(i64, i64); 7] {
    let m21 = t[1].mul(&t[0]);
    let m32 = t[2].mul(&t[1]);
    let m31 = t[2].mul(&t[0]);
    let m321 = t[2].mul(&m21);
    [
        t[0].trace_pair(),
        t[1].trace_pair(),
        t[2].trace_pair(),
        m21.trace_pair(),
        m32.trace_pair(),
        m31.trace_pair(),
        m321.trace_pair(),
    ]
}

/// Fingerprints equal up to the ±1 lift ambiguity of each entry: sign
/// patterns (ε1, ε2, ε3) act on the seven traces as
/// (ε1t1, ε2t2, ε3t3, ε1ε2t4, ε2ε3t5, ε1ε3t6, ε1ε2ε3t7).
pub fn traces_equal_up_to_signs(a: &[ExactScalar; 7], b: &[ExactScalar; 7]) -> bool {
    for mask in 0..8u32 {
        let e = |i: u32| -> ExactScalar {
            if mask & (1 << i) != 0 {
                ExactScalar::from_int(-1)
            } else {
                ExactScalar::from_int(1)
            }
        };
        let signs = [
            e(0),
            e(1),
            e(2),
            e(0) * e(1),
            e(1) * e(2),
            e(0) * e(2),
            e(0) * e(1) * e(2),
        ];
        if (0..7).all(|i| a[i].clone() * signs[i].clone() == b[i]) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// orbits of quaternion triples
// ---------------------------------------------------------------------------

pub fn orbit_quat(
    group: &QuatGroup,
    seed: &[Quat; 3],
    cap: usize,
) -> Result<(OrbitData<[Quat; 3]>, OrbitReport), OrbitError> {
    let orbit = orbit_generic(
        *seed,
        |t| braid::omega1_sq(t),
        |t| braid::omega2_sq(t),
        |t| group.canonical_triple(t),
        cap,
    )?;
    let mut report = report_from(&orbit);
    report.type_string = Some(type_string(seed));
    if let Some(theta) = theta_of_quat_triple(seed) {
        report.walls = Some(weylf4::walls(&theta));
        report.theta = Some(theta);
    }
    Ok((orbit, report))
}

/// θ_i ∈ [0, 1] with trace M_i = 2cos(πθ_i), for the traces arising in the
/// binary polyhedral groups (m ∈ {1,2,3,5}).
pub fn theta_of_trace_pair(m: i64, pair: (i64, i64)) -> Option<BigRational> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    // trace = (a + b√m)/2 for pair (a, b)
    let v = match (m, pair) {
        (_, (4, 0)) => r(0, 1),
        (_, (-4, 0)) => r(1, 1),
        (_, (0, 0)) => r(1, 2),
        (_, (2, 0)) => r(1, 3),
        (_, (-2, 0)) => r(2, 3),
        (5, (1, 1)) => r(1, 5),
        (5, (-1, -1)) => r(4, 5),
        (5, (-1, 1)) => r(2, 5),
        (5, (1, -1)) => r(3, 5),
        (2, (0, 2)) => r(1, 4),
        (2, (0, -2)) => r(3, 4),
        (3, (0, 2)) => r(1, 6),
        (3, (0, -2)) => r(5, 6),
        _ => return None,
    };
    Some(v)
}

pub fn theta_of_quat_triple(t: &[Quat; 3]) -> Option<Theta> {
    let m4 = braid::m4(t);
    let th = [
        theta_of_trace_pair(t[0].m, t[0].trace_pair())?,
        theta_of_trace_pair(t[1].m, t[1].trace_pair())?,
        theta_of_trace_pair(t[2].m, t[2].trace_pair())?,
        theta_of_trace_pair(m4.m, m4.trace_pair())?,
    ];
    Some(Theta(th))
}

// ---------------------------------------------------------------------------
// orbits of SL2 matrix triples (possibly infinite image)
// ---------------------------------------------------------------------------

/// Orbit keyed by the seven-trace fingerprint; valid for irreducible
/// triples, where the fingerprint is a complete conjugation invariant.
pub fn orbit_sl2(
    seed: &[Matrix<ExactScalar>; 3],
    cap: usize,
) -> Result<(OrbitData<[Matrix<ExactScalar>; 3]>, OrbitReport), OrbitError> {
    let orbit = orbit_generic(
        seed.clone(),
        |t| braid::omega1_sq(t),
        |t| braid::omega2_sq(t),
        |t| seven_traces_mat(t),
        cap,
    )?;
    let report = report_from(&orbit);
    Ok((orbit, report))
}

// ---------------------------------------------------------------------------
// the Δ237 dessin triple
// ---------------------------------------------------------------------------

/// Lifts a, c of the standard generators of the (2,3,7) triangle group
/// (with cba = 1) built from trace data: tr a = 0, tr c = 2cos(π/7),
/// tr(ca) = 1; the triple (M1, M2, M3) = (caca⁻¹c⁻¹, c, c⁻¹a⁻¹cac).
pub struct Dessin237 {
    pub a: Matrix<ExactScalar>,
    pub c: Matrix<ExactScalar>,
    pub triple: [Matrix<ExactScalar>; 3],
}

pub fn dessin_237() -> Dessin237 {
    // tower: Q(ζ7) with √-3 adjoined (for η with η + 1/η = 1)
    let base = Tower::cyclotomic(7);
    let zeta = ExactScalar::zeta_in(&base);
    let tr_c = -(crate::scalar::pow_scalar(&zeta, 3) + crate::scalar::pow_scalar(&zeta, 4));
    let tower = Tower::with_sqrt(&base, &ExactScalar::from_int(-3));
    let tr_c = tr_c.try_embed(&tower).unwrap();
    let w = ExactScalar::sqrt_gen(&tower); // √-3
    let half = ExactScalar::ratio(1, 2);
    let eta = (ExactScalar::from_int(1) + w) * half; // η = (1+√-3)/2, η+1/η = 1
    let z = || ExactScalar::from_int(0);
    let one = || ExactScalar::from_int(1);
    let a = Matrix::from_rows(vec![
        vec![z(), -one()],
        vec![one(), z()],
    ]);
    let c = Matrix::from_rows(vec![
        vec![z(), eta.clone()],
        vec![-eta.checked_inv().unwrap(), tr_c],
    ]);
    // verify the projective orders: a² = −1, c⁷ = −1, (ca)³ = −1
    let minus_one = -Matrix::<ExactScalar>::identity(2);
    assert_eq!(a.clone() * a.clone(), minus_one);
    assert_eq!(c.pow(7), minus_one);
    assert_eq!((c.clone() * a.clone()).pow(3), minus_one);
    let ai = a.ginv();
    let ci = c.ginv();
    let m1 = c.clone() * a.clone() * c.clone() * ai.clone() * ci.clone();
    let m2 = c.clone();
    let m3 = ci.clone() * ai.clone() * c.clone() * a.clone() * c.clone();
    Dessin237 {
        a,
        c,
        triple: [m1, m2, m3],
    }
}

// ---------------------------------------------------------------------------
// the icosahedral table: equivalence classing of generating triples
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone)]
pub struct TableRow {
    /// 1-based row index after sorting (degenerate rows first)
    pub index: usize,
    pub degree: usize,
    pub genus: i64,
    pub walls: u32,
    /// sorted label multiset, e.g. "abcd"
    pub type_string: String,
    pub theta: Theta,
    /// number of triple classes collapsing into this row
    pub class_count: usize,
    /// true when a local projective monodromy is the identity (y = t rows)
    pub degenerate: bool,
}

pub struct TableResult {
    pub rows: Vec<TableRow>,
    pub generating_classes: usize,
}

/// Sign flip of one entry (the induced flip of M4 keeps the pattern even).
fn flip<T: GroupElt + NegElt>(t: &[T; 3], i: usize) -> [T; 3] {
    let mut out = t.clone();
    out[i] = out[i].gneg();
    out
}

pub trait NegElt {
    fn gneg(&self) -> Self;
}

impl NegElt for Quat {
    fn gneg(&self) -> Self {
        self.neg()
    }
}

impl NegElt for Matrix<ExactScalar> {
    fn gneg(&self) -> Self {
        -self.clone()
    }
}

/// Group the generating triple classes of a quaternion group under the
/// geometric equivalence moves: the full Hurwitz moves ω1, ω2, the braid
/// move bringing M4 into play, and even sign flips of the four matrices.
pub fn table_for_group(group: &QuatGroup, cap: usize) -> Result<TableResult, OrbitError> {
    let (gen_classes, _) = group.triple_classes();
    let class_set: HashSet<[Quat; 3]> = gen_classes.iter().copied().collect();
    let mut visited: HashSet<[Quat; 3]> = HashSet::new();
    let mut rows: Vec<TableRow> = vec![];

    for seed in &gen_classes {
        if visited.contains(seed) {
            continue;
        }
        // closure under the full move set
        let mut members = vec![*seed];
        visited.insert(*seed);
        let mut head = 0;
        while head < members.len() {
            let cur = members[head];
            head += 1;
            let mut nexts: Vec<[Quat; 3]> = vec![
                braid::omega1(&cur),
                braid::omega2(&cur),
                braid::sigma3(&cur),
            ];
            for i in 0..3 {
                nexts.push(flip(&cur, i));
            }
            for n in nexts {
                let c = group.canonical_triple(&n);
                debug_assert!(
                    class_set.contains(&c),
                    "moves must preserve the generating-class set"
                );
                if visited.insert(c) {
                    members.push(c);
                }
            }
        }
        // per-row data from the seed
        let (_, report) = orbit_quat(group, seed, cap)?;
        let ts = type_string(seed);
        let theta = theta_of_quat_triple(seed).expect("catalog traces have θ values");
        let walls = weylf4::walls(&theta);
        let degenerate = ts.contains('1');
        rows.push(TableRow {
            index: 0,
            degree: report.degree,
            genus: report.genus,
            walls,
            type_string: ts,
            theta,
            class_count: members.len(),
            degenerate,
        });
    }

    // paper layout: degenerate rows first, then by (degree, genus, walls, type)
    rows.sort_by(|a, b| {
        (
            !a.degenerate,
            a.degree,
            a.genus,
            a.walls,
            a.type_string.clone(),
        )
            .cmp(&(
                !b.degenerate,
                b.degree,
                b.genus,
                b.walls,
                b.type_string.clone(),
            ))
    });
    for (i, r) in rows.iter_mut().enumerate() {
        r.index = i + 1;
    }
    Ok(TableResult {
        rows,
        generating_classes: gen_classes.len(),
    })
}

/// Search for a generating triple with the given multiset of labels on
/// (M1, M2, M3) and label of M4, in deterministic element order.
pub fn find_triple_with_labels(
    group: &QuatGroup,
    first_three: [ClassLabel; 3],
    fourth: ClassLabel,
) -> Option<[Quat; 3]> {
    let pick = |l: ClassLabel| -> Vec<Quat> {
        group
            .elements
            .iter()
            .copied()
            .filter(|q| label_quat(q) == l)
            .collect()
    };
    let c1 = pick(first_three[0]);
    let c2 = pick(first_three[1]);
    let c3 = pick(first_three[2]);
    for a in &c1 {
        for b in &c2 {
            for c in &c3 {
                let t = [*a, *b, *c];
                if label_quat(&braid::m4(&t)) != fourth {
                    continue;
                }
                if group.generates(&t) {
                    return Some(t);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn omega_moves_integer_example() {
        // ω1 of ([[1,1],[0,1]], [[1,0],[1,1]], I) via the direct product oracle
        let e = |v: i64| ExactScalar::from_int(v);
        let m1 = Matrix::from_rows(vec![vec![e(1), e(1)], vec![e(0), e(1)]]);
        let m2 = Matrix::from_rows(vec![vec![e(1), e(0)], vec![e(1), e(1)]]);
        let id = Matrix::<ExactScalar>::identity(2);
        let t = [m1.clone(), m2.clone(), id.clone()];
        let moved = braid::omega1(&t);
        assert_eq!(moved[0], m2);
        let expected = m2.clone() * m1.clone() * m2.inverse().unwrap();
        assert_eq!(moved[1], expected);
        assert_eq!(moved[2], id);
    }

    #[test]
    fn seven_traces_examples() {
        let one = Quat::one(1);
        let t = [one, one, one];
        let traces = seven_traces_quat(&t);
        assert!(traces.iter().all(|&p| p == (4, 0))); // trace 2 each
        let t = [Quat::minus_one(1), one, one];
        let traces = seven_traces_quat(&t);
        assert_eq!(
            traces,
            [
                (-4, 0),
                (4, 0),
                (4, 0),
                (-4, 0),
                (4, 0),
                (-4, 0),
                (-4, 0)
            ]
        );
    }

    #[test]
    fn seven_traces_conjugation_invariant_in_2i() {
        let g = groups::binary_icosahedral().unwrap();
        let t = [g.elements[5], g.elements[17], g.elements[33]];
        let f = seven_traces_quat(&t);
        for c in &g.elements {
            let ci = c.inv();
            let tc = [
                c.mul(&t[0]).mul(&ci),
                c.mul(&t[1]).mul(&ci),
                c.mul(&t[2]).mul(&ci),
            ];
            assert_eq!(seven_traces_quat(&tc), f);
        }
    }

    #[test]
    fn dihedral_20_all_a_triple_has_degree_12_genus_1() {
        let g = groups::binary_dihedral(20).unwrap();
        let t = find_triple_with_labels(
            &g,
            [ClassLabel::A, ClassLabel::A, ClassLabel::A],
            ClassLabel::A,
        )
        .expect("a generating a⁴ triple exists");
        let (_, report) = orbit_quat(&g, &t, 100000).unwrap();
        assert_eq!(report.degree, 12);
        assert_eq!(report.genus, 1);
    }

    #[test]
    fn dessin_237_orbit_is_degree_18_genus_1() {
        let d = dessin_237();
        let (_, report) = orbit_sl2(&d.triple, 100000).unwrap();
        assert_eq!(report.degree, 18);
        assert_eq!(report.genus, 1);
    }
}

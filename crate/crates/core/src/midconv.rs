//! Betti-side middle convolution: the Killing–Coxeter factorization of a
//! product of complex reflections, the scalar shift that fixes u± and
//! scales h, and the reduction of a shifted (reducible) 3×3 reflection
//! triple to an SL2 triple.  The inverse direction — convolving an SL2
//! triple up to a rank-3 reflection triple — is used to construct the
//! Valentiner group from an icosahedral triple.

use crate::braid::{self, Move};
use crate::groups::{self, GroupError, GroupResult, MatGroup};
use crate::hurwitz;
use crate::matrix::{nullspace_rows, Matrix};
use crate::scalar::{ExactScalar, Tower};
use std::collections::HashSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McError {
    #[error("big cell violation: a diagonal entry of h vanishes")]
    BigCellViolation,
    #[error("Killing-Coxeter verification failed (basis mismatch?)")]
    VerificationFailure,
    #[error("input is not a normalized rank-one reflection triple")]
    BadReflectionTriple,
    #[error("the shifted triple has no invariant line or plane")]
    NoInvariantSubspace,
    #[error("no irreducible 2-dimensional constituent")]
    IrreducibleConstituentMissing,
    #[error("shift value must be nonzero")]
    ZeroShift,
    #[error("cannot enumerate eigenvalues: {0}")]
    EigenvalueEnumeration(String),
    #[error("scalar arithmetic failed: {0}")]
    Scalar(String),
}

pub type McResult<T> = Result<T, McError>;

type Mat = Matrix<ExactScalar>;

// ---------------------------------------------------------------------------
// reflection triples in the e-basis normal form
// ---------------------------------------------------------------------------

/// Triple of complex reflections r_i = 1 + e_i ⊗ α_i: each r_i equals the
/// identity except in its i-th row.
#[derive(Clone, PartialEq, Eq)]
pub struct ReflectionTriple {
    pub r: [Mat; 3],
}

impl ReflectionTriple {
    /// Validate the e-basis shape.
    pub fn new(r: [Mat; 3]) -> McResult<Self> {
        for (i, m) in r.iter().enumerate() {
            if m.n != 3 {
                return Err(McError::BadReflectionTriple);
            }
            for row in 0..3 {
                if row == i {
                    continue;
                }
                for col in 0..3 {
                    let expect = if row == col {
                        ExactScalar::from_int(1)
                    } else {
                        ExactScalar::from_int(0)
                    };
                    if *m.at(row, col) != expect {
                        return Err(McError::BadReflectionTriple);
                    }
                }
            }
        }
        Ok(ReflectionTriple { r })
    }

    /// Build from the matrix C = (α_i(e_j)): r_i = 1 + e_i ⊗ (row i of C).
    pub fn from_cartan(c: &Mat) -> Self {
        let mut rs = vec![];
        for i in 0..3 {
            let alpha = [c.at(i, 0).clone(), c.at(i, 1).clone(), c.at(i, 2).clone()];
            rs.push(groups::reflection_from_row(i, &alpha));
        }
        ReflectionTriple {
            r: [rs[0].clone(), rs[1].clone(), rs[2].clone()],
        }
    }

    /// Conjugate an arbitrary triple of rank-one reflections into the
    /// e-basis normal form (requires independent image vectors).
    pub fn normalize(raw: &[Mat; 3]) -> McResult<Self> {
        let mut cols: Vec<Vec<ExactScalar>> = vec![];
        for m in raw {
            let d = m.clone() - Matrix::identity(3);
            // find a pivot entry
            let mut pivot = None;
            'scan: for p in 0..3 {
                for q in 0..3 {
                    if !d.at(p, q).is_zero() {
                        pivot = Some((p, q));
                        break 'scan;
                    }
                }
            }
            let (p, q) = pivot.ok_or(McError::BadReflectionTriple)?;
            let inv = d.at(p, q).clone().inv();
            let v: Vec<ExactScalar> = (0..3).map(|a| d.at(a, q).clone() * inv.clone()).collect();
            cols.push(v);
        }
        let mut pm = Matrix::<ExactScalar>::zero(3);
        for (j, v) in cols.iter().enumerate() {
            for i in 0..3 {
                pm.set(i, j, v[i].clone());
            }
        }
        let pinv = pm.inverse().ok_or(McError::BadReflectionTriple)?;
        let conj = |m: &Mat| pinv.clone() * m.clone() * pm.clone();
        ReflectionTriple::new([conj(&raw[0]), conj(&raw[1]), conj(&raw[2])])
    }

    /// C matrix with entries α_i(e_j).
    pub fn cartan(&self) -> Mat {
        let mut c = Matrix::<ExactScalar>::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut v = self.r[i].at(i, j).clone();
                if i == j {
                    v = v - ExactScalar::from_int(1);
                }
                c.set(i, j, v);
            }
        }
        c
    }

    pub fn product(&self) -> Mat {
        self.r[2].clone() * self.r[1].clone() * self.r[0].clone()
    }
}

// ---------------------------------------------------------------------------
// Killing–Coxeter factorization and the scalar shift
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct KCData {
    pub u_minus: Mat,
    pub h: Mat,
    pub u_plus: Mat,
}

impl KCData {
    pub fn reassemble(&self) -> Mat {
        self.u_minus.inverse().expect("unit triangular") * self.h.clone() * self.u_plus.clone()
    }
}

/// r3·r2·r1 = u−⁻¹·h·u+ with h·u+ − u− = (α_i(e_j)).
pub fn kc_factorize(t: &ReflectionTriple) -> McResult<KCData> {
    let c = t.cartan();
    let one = ExactScalar::from_int(1);
    let mut h = Matrix::<ExactScalar>::identity(3);
    for i in 0..3 {
        let hii = one.clone() + c.at(i, i).clone();
        if hii.is_zero_scalar() {
            return Err(McError::BigCellViolation);
        }
        h.set(i, i, hii);
    }
    let mut u_plus = Matrix::<ExactScalar>::identity(3);
    for i in 0..3 {
        let hinv = h.at(i, i).clone().inv();
        for j in i + 1..3 {
            u_plus.set(i, j, c.at(i, j).clone() * hinv.clone());
        }
    }
    let mut u_minus = Matrix::<ExactScalar>::identity(3);
    for i in 0..3 {
        for j in 0..i {
            u_minus.set(i, j, -c.at(i, j).clone());
        }
    }
    let kc = KCData {
        u_minus,
        h,
        u_plus,
    };
    if kc.reassemble() != t.product() {
        return Err(McError::VerificationFailure);
    }
    Ok(kc)
}

/// Scale h by s, fix u±: the new reflection triple has Cartan matrix
/// s·h·u+ − u−, and its product is u−⁻¹·(s·h)·u+ = s·(old product).
pub fn scalar_shift(kc: &KCData, s: &ExactScalar) -> McResult<ReflectionTriple> {
    if s.is_zero_scalar() {
        return Err(McError::ZeroShift);
    }
    let sh = kc.h.scale(s);
    let m = sh * kc.u_plus.clone() - kc.u_minus.clone();
    Ok(ReflectionTriple::from_cartan(&m))
}

use crate::field::FieldScalar;

// ---------------------------------------------------------------------------
// eigenvalue candidates and shift enumeration
// ---------------------------------------------------------------------------

/// A primitive m-th root of unity inside the tower, when available.  The
/// odd part must divide the cyclotomic conductor; −1 covers one factor of
/// 2, and i is taken from ζ_n (4 | n) or from a quadratic layer adjoining
/// √(−c²).
pub fn zeta_of_order(tower: &Arc<Tower>, m: u32) -> Option<ExactScalar> {
    if m == 1 {
        return Some(ExactScalar::from_int(1));
    }
    let mut a = 0u32;
    let mut modd = m;
    while modd % 2 == 0 {
        modd /= 2;
        a += 1;
    }
    let z_odd = if modd == 1 {
        ExactScalar::from_int(1)
    } else {
        let n = tower.cyc?;
        if n % modd != 0 {
            return None;
        }
        let z = ExactScalar::zeta_in(tower);
        crate::scalar::pow_scalar(&z, n / modd)
    };
    let z_two = match a {
        0 => ExactScalar::from_int(1),
        1 => ExactScalar::from_int(-1),
        2 => imaginary_unit(tower)?,
        _ => {
            // ζ_8 and beyond: only through the cyclotomic layer
            let n = tower.cyc?;
            let pow2 = 1u32 << a;
            if n % pow2 != 0 {
                return None;
            }
            let z = ExactScalar::zeta_in(tower);
            crate::scalar::pow_scalar(&z, n / pow2)
        }
    };
    Some(z_odd * z_two)
}

/// i = √−1 in the tower, from ζ_n when 4 | n, or as √d/c when the
/// quadratic layer adjoins d = −c² for rational c.
pub fn imaginary_unit(tower: &Arc<Tower>) -> Option<ExactScalar> {
    if let Some(n) = tower.cyc {
        if n % 4 == 0 {
            let z = ExactScalar::zeta_in(tower);
            return Some(crate::scalar::pow_scalar(&z, n / 4));
        }
    }
    if let Some(dv) = &tower.quad {
        let mut d = dv.clone();
        crate::scalar::ptrim_public(&mut d);
        if d.len() == 1 {
            let neg = -d[0].clone();
            if let Some(c) = crate::scalar::rational_sqrt(&neg) {
                let w = ExactScalar::sqrt_gen(tower);
                let cinv = ExactScalar::from_rational(c).checked_inv().ok()?;
                return Some(w * cinv);
            }
        }
    }
    None
}

pub fn matrix_order(m: &Mat, cap: u32) -> Option<u32> {
    let id = Matrix::<ExactScalar>::identity(m.n);
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc == id {
            return Some(k);
        }
        acc = acc * m.clone();
    }
    None
}

/// Exact eigenvalues of a finite-order matrix, found by testing the m-th
/// roots of unity against det(cI − M) = 0; eigenvalues are verified, never
/// solved for.  The ambient tower must be supplied (entries may happen to
/// be rational even when the eigenvalues are not).
pub fn eigenvalues_of_finite_order(
    m: &Mat,
    tower: &Arc<Tower>,
    cap: u32,
) -> McResult<Vec<ExactScalar>> {
    let ord = matrix_order(m, cap)
        .ok_or_else(|| McError::EigenvalueEnumeration(format!("order exceeds {}", cap)))?;
    let zeta = zeta_of_order(tower, ord).ok_or_else(|| {
        McError::EigenvalueEnumeration(format!("ζ_{} not available in this tower", ord))
    })?;
    let mut out = vec![];
    let mut c = ExactScalar::from_int(1);
    for _ in 0..ord {
        let test = (Matrix::identity(m.n).scale(&c)) - m.clone();
        if test.det().is_zero_scalar() {
            out.push(c.clone());
        }
        c = c * zeta.clone();
    }
    if out.is_empty() {
        return Err(McError::EigenvalueEnumeration(
            "no root-of-unity eigenvalue found".into(),
        ));
    }
    Ok(out)
}

/// Shift values s = 1/eig for each eigenvalue of the product; the shifted
/// product s·(r3r2r1) then has eigenvalue 1.
pub fn shift_candidates(
    t: &ReflectionTriple,
    tower: &Arc<Tower>,
    cap: u32,
) -> McResult<Vec<ExactScalar>> {
    let p = t.product();
    let eigs = eigenvalues_of_finite_order(&p, tower, cap)?;
    Ok(eigs.into_iter().map(|e| e.inv()).collect())
}

// ---------------------------------------------------------------------------
// reduction to SL2
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Constituent {
    /// restriction to an invariant plane
    Sub,
    /// action on the quotient by an invariant line
    Quotient,
}

#[derive(Clone)]
pub struct Sl2Reduction {
    pub n: [Mat; 3],
    /// true when each factor was rescaled to determinant one
    pub normalized: bool,
    pub dets_before: [ExactScalar; 3],
    pub constituent: Constituent,
}

fn stack_kernels(mats: &[Mat], shifts: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
    let mut rows: Vec<Vec<ExactScalar>> = vec![];
    for (m, c) in mats.iter().zip(shifts) {
        for i in 0..3 {
            let mut row = vec![];
            for j in 0..3 {
                let mut v = m.at(i, j).clone();
                if i == j {
                    v = v - c.clone();
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    nullspace_rows(&rows, 3)
}

fn restrict_to_plane(m: &Mat, w1: &[ExactScalar], w2: &[ExactScalar]) -> Option<Mat> {
    // solve [w1 w2]·x = m·w_j using two independent coordinate rows
    let b = [w1, w2];
    // find two rows (r1, r2) making the 2×2 coordinate matrix invertible
    for r1 in 0..3 {
        for r2 in r1 + 1..3 {
            let coef = Matrix::from_rows(vec![
                vec![b[0][r1].clone(), b[1][r1].clone()],
                vec![b[0][r2].clone(), b[1][r2].clone()],
            ]);
            let inv = match coef.inverse() {
                Some(i) => i,
                None => continue,
            };
            let mut out = Matrix::<ExactScalar>::zero(2);
            for (j, w) in b.iter().enumerate() {
                let img = m.apply(w);
                let x = inv.apply(&[img[r1].clone(), img[r2].clone()]);
                // consistency on the remaining row
                let r3 = 3 - r1 - r2;
                let recon = b[0][r3].clone() * x[0].clone() + b[1][r3].clone() * x[1].clone();
                if recon != img[r3] {
                    return None;
                }
                out.set(0, j, x[0].clone());
                out.set(1, j, x[1].clone());
            }
            return Some(out);
        }
    }
    None
}

fn quotient_by_line(m: &Mat, v: &[ExactScalar]) -> Option<Mat> {
    // basis (v, e_a, e_b) with P invertible; quotient block is rows/cols 2,3
    for a in 0..3 {
        for bidx in 0..3 {
            if bidx == a {
                continue;
            }
            let mut p = Matrix::<ExactScalar>::zero(3);
            for i in 0..3 {
                p.set(i, 0, v[i].clone());
            }
            p.set(a, 1, ExactScalar::from_int(1));
            p.set(bidx, 2, ExactScalar::from_int(1));
            let pinv = match p.inverse() {
                Some(i) => i,
                None => continue,
            };
            let c = pinv * m.clone() * p;
            // invariance of the line: entries (1,0) and (2,0) must vanish
            if !c.at(1, 0).is_zero() || !c.at(2, 0).is_zero() {
                return None;
            }
            return Some(Matrix::from_rows(vec![
                vec![c.at(1, 1).clone(), c.at(1, 2).clone()],
                vec![c.at(2, 1).clone(), c.at(2, 2).clone()],
            ]));
        }
    }
    None
}

fn is_irreducible_pairwise(n: &[Mat; 3], spectra: &[[ExactScalar; 2]; 3]) -> bool {
    // reducible iff a common eigenvector exists; eigenvalues lie in the
    // known spectra
    for mask in 0..8u32 {
        let shifts: Vec<ExactScalar> = (0..3)
            .map(|i| spectra[i][((mask >> i) & 1) as usize].clone())
            .collect();
        let mut rows: Vec<Vec<ExactScalar>> = vec![];
        for (m, c) in n.iter().zip(&shifts) {
            for i in 0..2 {
                let mut row = vec![];
                for j in 0..2 {
                    let mut v = m.at(i, j).clone();
                    if i == j {
                        v = v - c.clone();
                    }
                    row.push(v);
                }
                rows.push(row);
            }
        }
        if !nullspace_rows(&rows, 2).is_empty() {
            return false;
        }
    }
    true
}

/// Reduce a shifted reflection triple (its product must have eigenvalue 1)
/// to the irreducible 2-dimensional sub- or quotient triple, rescaled into
/// SL2 when the needed square roots exist in (a cyclotomic extension of)
/// the tower.
pub fn reduce_to_sl2(t: &ReflectionTriple) -> McResult<Sl2Reduction> {
    let one = ExactScalar::from_int(1);
    let h: Vec<ExactScalar> = (0..3).map(|i| t.r[i].at(i, i).clone()).collect();
    let mut candidates: Vec<([Mat; 3], Constituent)> = vec![];

    // invariant planes: common eigenvectors of the transposes
    let tr: Vec<Mat> = t.r.iter().map(|m| m.transpose()).collect();
    for mask in 0..8u32 {
        let shifts: Vec<ExactScalar> = (0..3)
            .map(|i| {
                if (mask >> i) & 1 == 1 {
                    h[i].clone()
                } else {
                    one.clone()
                }
            })
            .collect();
        for psi in stack_kernels(&tr, &shifts) {
            // plane W = ker ψ
            let w = nullspace_rows(&[psi.clone()], 3);
            if w.len() != 2 {
                continue;
            }
            let restricted: Option<Vec<Mat>> = t
                .r
                .iter()
                .map(|m| restrict_to_plane(m, &w[0], &w[1]))
                .collect();
            if let Some(r) = restricted {
                candidates.push(([r[0].clone(), r[1].clone(), r[2].clone()], Constituent::Sub));
            }
        }
    }
    // invariant lines: common eigenvectors
    for mask in 0..8u32 {
        let shifts: Vec<ExactScalar> = (0..3)
            .map(|i| {
                if (mask >> i) & 1 == 1 {
                    h[i].clone()
                } else {
                    one.clone()
                }
            })
            .collect();
        for v in stack_kernels(&t.r.to_vec(), &shifts) {
            let quotiented: Option<Vec<Mat>> =
                t.r.iter().map(|m| quotient_by_line(m, &v)).collect();
            if let Some(q) = quotiented {
                candidates.push((
                    [q[0].clone(), q[1].clone(), q[2].clone()],
                    Constituent::Quotient,
                ));
            }
        }
    }

    if candidates.is_empty() {
        return Err(McError::NoInvariantSubspace);
    }

    let spectra: [[ExactScalar; 2]; 3] = [
        [one.clone(), h[0].clone()],
        [one.clone(), h[1].clone()],
        [one.clone(), h[2].clone()],
    ];
    let chosen = candidates
        .into_iter()
        .find(|(n, _)| is_irreducible_pairwise(n, &spectra))
        .ok_or(McError::IrreducibleConstituentMissing)?;
    let (n, constituent) = chosen;
    let dets = [n[0].det(), n[1].det(), n[2].det()];

    // rescale to determinant 1; retry in a doubled cyclotomic tower when a
    // square root is missing and the tower has no quadratic layer
    if let Some(scaled) = try_normalize(&n, &dets) {
        return Ok(Sl2Reduction {
            n: scaled,
            normalized: true,
            dets_before: dets,
            constituent,
        });
    }
    let tower = n
        .iter()
        .flat_map(|m| m.e.iter())
        .find(|s| !s.is_rational())
        .map(|s| s.tower_ref().clone())
        .unwrap_or_else(Tower::rational);
    if tower.quad.is_none() {
        if let Some(ncyc) = tower.cyc {
            for mult in [2u32, 4] {
                let big = Tower::cyclotomic(ncyc * mult);
                let embedded: Option<Vec<Mat>> = n
                    .iter()
                    .map(|m| embed_matrix(m, &big))
                    .collect();
                if let Some(e) = embedded {
                    let em = [e[0].clone(), e[1].clone(), e[2].clone()];
                    let edets = [em[0].det(), em[1].det(), em[2].det()];
                    if let Some(scaled) = try_normalize(&em, &edets) {
                        return Ok(Sl2Reduction {
                            n: scaled,
                            normalized: true,
                            dets_before: dets,
                            constituent,
                        });
                    }
                }
            }
        }
    }
    Ok(Sl2Reduction {
        n,
        normalized: false,
        dets_before: dets,
        constituent,
    })
}

fn try_normalize(n: &[Mat; 3], dets: &[ExactScalar; 3]) -> Option<[Mat; 3]> {
    let mut out = vec![];
    for (m, d) in n.iter().zip(dets) {
        let s = d.sqrt_in_tower()?;
        out.push(m.scale(&s.inv()));
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

pub fn embed_matrix(m: &Mat, tower: &Arc<Tower>) -> Option<Mat> {
    let e: Option<Vec<ExactScalar>> = m.e.iter().map(|s| s.try_embed(tower)).collect();
    Some(Matrix {
        n: m.n,
        e: e?,
    })
}

/// Order of the group generated by a matrix tuple, with a cap; `None`
/// means the closure exceeded the cap (infinite or too large).
pub fn image_order(mats: &[Mat], cap: usize) -> Option<usize> {
    let n = mats.first()?.n;
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut queue = vec![Matrix::<ExactScalar>::identity(n)];
    seen.insert(queue[0].clone());
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        for g in mats {
            let p = cur.clone() * g.clone();
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push(p);
            }
        }
    }
    Some(seen.len())
}

// ---------------------------------------------------------------------------
// shifted reduction pipeline and equivariance
// ---------------------------------------------------------------------------

/// All (shift, reduction) pairs over the eigenvalue choices of the product.
pub fn shifted_reductions(
    t: &ReflectionTriple,
    tower: &Arc<Tower>,
    cap: u32,
) -> McResult<Vec<(ExactScalar, Sl2Reduction)>> {
    let shifts = shift_candidates(t, tower, cap)?;
    let kc = kc_factorize(t)?;
    let mut out = vec![];
    for s in shifts {
        let shifted = scalar_shift(&kc, &s)?;
        if let Ok(red) = reduce_to_sl2(&shifted) {
            out.push((s, red));
        }
    }
    if out.is_empty() {
        return Err(McError::NoInvariantSubspace);
    }
    Ok(out)
}

/// Deterministic default reduction: the first eigenvalue choice that
/// yields an irreducible constituent.
pub fn reduce_default(
    t: &ReflectionTriple,
    tower: &Arc<Tower>,
    cap: u32,
) -> McResult<(ExactScalar, Sl2Reduction)> {
    Ok(shifted_reductions(t, tower, cap)?.remove(0))
}

/// F2-equivariance: reduce(word·T) conjugate to word·reduce(T), compared
/// through seven-trace fingerprints up to the ±1 lift ambiguity.
pub fn equivariance_check(
    t: &ReflectionTriple,
    tower: &Arc<Tower>,
    word: &[Move],
    cap: u32,
) -> McResult<bool> {
    let (_, red) = reduce_default(t, tower, cap)?;
    let rhs = braid::apply_word(word, &red.n);

    let moved_raw = braid::apply_word(word, &t.r);
    let moved = ReflectionTriple::normalize(&moved_raw)?;
    let (_, red_moved) = reduce_default(&moved, tower, cap)?;
    let lhs = red_moved.n;

    let fa = hurwitz::seven_traces_mat(&lhs);
    let fb = hurwitz::seven_traces_mat(&rhs);
    Ok(hurwitz::traces_equal_up_to_signs(&fa, &fb))
}

// ---------------------------------------------------------------------------
// the convolution lift (SL2 triple → rank-3 reflection triple)
// ---------------------------------------------------------------------------

/// Middle convolution of a twisted SL2 triple: block construction on K⁶,
/// then the quotient by the sum of ker(Ñ_k − 1) and the common fixed
/// space.  With the right twist and λ the output is a triple of complex
/// reflections.
pub fn mc_lift(
    n: &[Mat; 3],
    eigs: &[ExactScalar; 3],
    lambda: &ExactScalar,
    lambda_left: bool,
) -> Option<[Mat; 3]> {
    let one = ExactScalar::from_int(1);
    let twisted: Vec<Mat> = n
        .iter()
        .zip(eigs)
        .map(|(m, e)| m.scale(&e.inv()))
        .collect();
    for t in &twisted {
        let mut d = t.clone();
        for i in 0..2 {
            let v = d.at(i, i).clone() - one.clone();
            d.set(i, i, v);
        }
        if d.rank() != 1 {
            return None;
        }
    }
    // B_k: identity except block row k
    let block = |k: usize, j: usize| -> Mat {
        let tj = &twisted[j];
        if j == k {
            tj.scale(lambda)
        } else {
            let tm1 = tj.clone() - Matrix::identity(2);
            let pre = j < k;
            if (pre && lambda_left) || (!pre && !lambda_left) {
                tm1.scale(lambda)
            } else {
                tm1
            }
        }
    };
    let mut bs: Vec<Matrix<ExactScalar>> = vec![];
    for k in 0..3 {
        let mut b = Matrix::<ExactScalar>::identity(6);
        for j in 0..3 {
            let blk = block(k, j);
            for a in 0..2 {
                for c in 0..2 {
                    b.set(2 * k + a, 2 * j + c, blk.at(a, c).clone());
                }
            }
        }
        bs.push(b);
    }
    // K = ⊕ ker(Ñ_k − 1) embedded block-diagonally
    let mut u_vecs: Vec<Vec<ExactScalar>> = vec![];
    for (k, t) in twisted.iter().enumerate() {
        let mut d = t.clone();
        for i in 0..2 {
            let v = d.at(i, i).clone() - one.clone();
            d.set(i, i, v);
        }
        for kv in d.kernel() {
            let mut big = vec![ExactScalar::from_int(0); 6];
            big[2 * k] = kv[0].clone();
            big[2 * k + 1] = kv[1].clone();
            u_vecs.push(big);
        }
    }
    // L = ∩ ker(B_k − 1)
    let mut rows: Vec<Vec<ExactScalar>> = vec![];
    for b in &bs {
        for i in 0..6 {
            let mut row = vec![];
            for j in 0..6 {
                let mut v = b.at(i, j).clone();
                if i == j {
                    v = v - one.clone();
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    u_vecs.extend(nullspace_rows(&rows, 6));

    // basis of U by row reduction on the collected vectors
    let ubasis = independent_subset(&u_vecs, 6);
    if ubasis.len() != 3 {
        return None;
    }
    // verify invariance of U under every B_k
    for b in &bs {
        for u in &ubasis {
            let img = b.apply(u);
            let mut test = ubasis.clone();
            test.push(img);
            if independent_subset(&test, 6).len() != 3 {
                return None;
            }
        }
    }
    // extend to a basis of K⁶ with standard vectors
    let mut full = ubasis.clone();
    for i in 0..6 {
        let mut e = vec![ExactScalar::from_int(0); 6];
        e[i] = one.clone();
        let mut test = full.clone();
        test.push(e.clone());
        if independent_subset(&test, 6).len() > full.len() {
            full.push(e);
        }
        if full.len() == 6 {
            break;
        }
    }
    if full.len() != 6 {
        return None;
    }
    let mut p = Matrix::<ExactScalar>::zero(6);
    for (j, v) in full.iter().enumerate() {
        for i in 0..6 {
            p.set(i, j, v[i].clone());
        }
    }
    let pinv = p.inverse()?;
    let mut out = vec![];
    for b in &bs {
        let c = pinv.clone() * b.clone() * p.clone();
        // invariance of U ⇒ the bottom-left 3×3 block vanishes
        for i in 3..6 {
            for j in 0..3 {
                if !c.at(i, j).is_zero() {
                    return None;
                }
            }
        }
        let mut q = Matrix::<ExactScalar>::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                q.set(i, j, c.at(i + 3, j + 3).clone());
            }
        }
        out.push(q);
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn independent_subset(vecs: &[Vec<ExactScalar>], ncols: usize) -> Vec<Vec<ExactScalar>> {
    let mut rows: Vec<Vec<ExactScalar>> = vec![];
    let mut keep: Vec<Vec<ExactScalar>> = vec![];
    for v in vecs {
        rows.push(v.clone());
        // rank via forward elimination each time (small sizes)
        let r = rank_of_rows(&rows, ncols);
        if r == rows.len() {
            keep.push(v.clone());
        } else {
            rows.pop();
        }
    }
    keep
}

fn rank_of_rows(rows: &[Vec<ExactScalar>], ncols: usize) -> usize {
    let mut m: Vec<Vec<ExactScalar>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let mut piv = None;
        for r in row..nrows {
            if !m[r][col].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        m.swap(row, piv);
        let pinv = m[row][col].clone().inv();
        for r in row + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() * pinv.clone();
            for c in 0..ncols {
                let delta = factor.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// SL2 triples from prescribed traces
// ---------------------------------------------------------------------------

/// Build (M1, M2, M3) with the prescribed seven traces, in the Fricke
/// normal form M1 = [[x,−1],[1,0]], M2 = [[0,η],[−1/η,y]] with
/// η + 1/η = tr(M2M1); M3 is solved linearly from its four trace
/// conditions.  Requires √(tr(M2M1)² − 4) in the tower.
pub fn sl2_from_traces(traces: &[ExactScalar; 7]) -> Option<[Mat; 3]> {
    let x = traces[0].clone();
    let y = traces[1].clone();
    let z = traces[3].clone();
    let four = ExactScalar::from_int(4);
    let disc = z.clone() * z.clone() - four;
    let root = disc.sqrt_in_tower()?;
    let half = ExactScalar::ratio(1, 2);
    let eta = (z.clone() + root) * half;
    if eta.is_zero_scalar() {
        return None;
    }
    let zero = ExactScalar::from_int(0);
    let m1 = Matrix::from_rows(vec![
        vec![x.clone(), ExactScalar::from_int(-1)],
        vec![ExactScalar::from_int(1), zero.clone()],
    ]);
    let m2 = Matrix::from_rows(vec![
        vec![zero.clone(), eta.clone()],
        vec![-eta.clone().inv(), y.clone()],
    ]);
    let m21 = m2.clone() * m1.clone();
    if m21.trace() != z {
        return None;
    }
    // tr(M3·X) is linear in the entries of M3 with coefficient X_{ji} on (M3)_{ij}
    let id = Matrix::<ExactScalar>::identity(2);
    let systems = [
        (id.clone(), traces[2].clone()),
        (m2.clone(), traces[4].clone()),  // tr M3M2
        (m1.clone(), traces[5].clone()),  // tr M3M1
        (m21.clone(), traces[6].clone()), // tr M3M2M1
    ];
    let mut rows = vec![];
    let mut rhs = vec![];
    for (xm, val) in &systems {
        rows.push(vec![
            xm.at(0, 0).clone(),
            xm.at(1, 0).clone(),
            xm.at(0, 1).clone(),
            xm.at(1, 1).clone(),
        ]);
        rhs.push(val.clone());
    }
    let a = Matrix::from_rows(rows);
    let sol = crate::matrix::solve_square(&a, &rhs)?;
    let m3 = Matrix::from_rows(vec![
        vec![sol[0].clone(), sol[1].clone()],
        vec![sol[2].clone(), sol[3].clone()],
    ]);
    if m3.det() != ExactScalar::from_int(1) {
        return None;
    }
    let t = [m1, m2, m3];
    if &hurwitz::seven_traces_mat(&t) != traces {
        return None;
    }
    Some(t)
}

// ---------------------------------------------------------------------------
// the Valentiner group via the convolution lift
// ---------------------------------------------------------------------------

/// Construct the Valentiner reflection group (order 2160) by convolving an
/// icosahedral SL2 triple of local type (b, b, b; a) up to rank 3.
pub fn build_valentiner() -> GroupResult<MatGroup> {
    use crate::groups::ClassLabel;
    let g2i = groups::binary_icosahedral()?;
    let quat_triple = hurwitz::find_triple_with_labels(
        &g2i,
        [ClassLabel::B, ClassLabel::B, ClassLabel::B],
        ClassLabel::A,
    )
    .ok_or_else(|| GroupError::Construction("no (b,b,b;a) triple in 2I".into()))?;

    // realize the triple over Q(ζ15)(+√disc) from its seven traces
    let base = Tower::cyclotomic(15);
    let sqrt5 = crate::scalar::sqrt_in_cyclotomic(
        &num_rational::BigRational::from_integer(5.into()),
        15,
    )
    .expect("√5 in Q(ζ15)");
    let pair_to_scalar = |p: (i64, i64)| -> ExactScalar {
        (ExactScalar::from_int(p.0) + ExactScalar::from_int(p.1) * sqrt5.clone())
            * ExactScalar::ratio(1, 2)
    };
    let traces7 = hurwitz::seven_traces_quat(&quat_triple).map(pair_to_scalar);
    // tower: adjoin √(z²−4) when needed
    let z = traces7[3].clone();
    let disc = z.clone() * z.clone() - ExactScalar::from_int(4);
    let tower = if disc.sqrt_in_tower().is_some() {
        base.clone()
    } else {
        Tower::with_sqrt(&base, &disc)
    };
    let traces: [ExactScalar; 7] = traces7.map(|t| {
        t.try_embed(&tower)
            .expect("trace embeds into the lift tower")
    });
    let triple = sl2_from_traces(&traces)
        .ok_or_else(|| GroupError::Construction("trace normal form failed".into()))?;
    if image_order(&triple, 150) != Some(120) {
        return Err(GroupError::Construction(
            "realized triple does not generate a group of order 120".into(),
        ));
    }

    // eigenvalue choices per factor and λ over the 30th roots of unity
    let eig_choices: Vec<Vec<ExactScalar>> = triple
        .iter()
        .map(|m| {
            eigenvalues_of_finite_order(m, &tower, 60)
                .map_err(|e| GroupError::Construction(format!("eigenvalues: {}", e)))
        })
        .collect::<GroupResult<_>>()?;
    let zeta30 = zeta_of_order(&tower, 30)
        .ok_or_else(|| GroupError::Construction("ζ30 missing from tower".into()))?;

    for e1 in &eig_choices[0] {
        for e2 in &eig_choices[1] {
            for e3 in &eig_choices[2] {
                let eigs = [e1.clone(), e2.clone(), e3.clone()];
                let mut lam = zeta30.clone();
                for _ in 1..30 {
                    for left in [true, false] {
                        if let Some(q) = mc_lift(&triple, &eigs, &lam, left) {
                            if q.iter().all(groups::is_reflection) {
                                if let Ok(v) =
                                    MatGroup::build("valentiner", &tower, q.to_vec(), 2160)
                                {
                                    return Ok(v);
                                }
                            }
                        }
                    }
                    lam = lam * zeta30.clone();
                }
            }
        }
    }
    Err(GroupError::Construction(
        "no convolution lift produced the order-2160 reflection group".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldScalar;

    fn rational_reflection_triple(c: [[i64; 3]; 3]) -> ReflectionTriple {
        let m = Matrix::from_rows(
            c.iter()
                .map(|row| row.iter().map(|&v| ExactScalar::from_int(v)).collect())
                .collect(),
        );
        ReflectionTriple::from_cartan(&m)
    }

    #[test]
    fn kc_identity_triple() {
        let t = rational_reflection_triple([[0, 0, 0], [0, 0, 0], [0, 0, 0]]);
        let kc = kc_factorize(&t).unwrap();
        assert!(kc.u_minus.is_identity());
        assert!(kc.u_plus.is_identity());
        assert!(kc.h.is_identity());
    }

    #[test]
    fn kc_diagonal_reflections() {
        let t = rational_reflection_triple([[2, 0, 0], [0, 3, 0], [0, 0, 4]]);
        let kc = kc_factorize(&t).unwrap();
        assert!(kc.u_minus.is_identity());
        assert!(kc.u_plus.is_identity());
        assert_eq!(kc.h.at(0, 0), &ExactScalar::from_int(3));
        assert_eq!(kc.h.at(1, 1), &ExactScalar::from_int(4));
        assert_eq!(kc.h.at(2, 2), &ExactScalar::from_int(5));
    }

    #[test]
    fn kc_round_trip_and_charpoly_identity_random() {
        // a couple of fixed pseudo-random rational examples here; the bulk
        // randomized suite lives in the integration tests
        let cases = [
            [[1, 2, -1], [3, -4, 1], [0, 2, 5]],
            [[2, -3, 1], [1, 1, -2], [4, 0, -5]],
        ];
        for c in cases {
            let t = rational_reflection_triple(c);
            let kc = kc_factorize(&t).unwrap();
            assert_eq!(kc.reassemble(), t.product());
            // det(u−⁻¹·s·h·u+ − 1) = det(s·h·u+ − u−) at several shifts
            for s in [2i64, 3, 5, 7] {
                let sv = ExactScalar::from_int(s);
                let lhs = (kc.u_minus.inverse().unwrap()
                    * kc.h.scale(&sv)
                    * kc.u_plus.clone()
                    - Matrix::identity(3))
                .det();
                let rhs = (kc.h.scale(&sv) * kc.u_plus.clone() - kc.u_minus.clone()).det();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn scalar_shift_s_equals_one_is_identity() {
        let t = rational_reflection_triple([[1, 2, -1], [3, -4, 1], [0, 2, 5]]);
        let kc = kc_factorize(&t).unwrap();
        let shifted = scalar_shift(&kc, &ExactScalar::from_int(1)).unwrap();
        assert_eq!(shifted.r, t.r);
        // s then 1/s returns the original
        let s = ExactScalar::ratio(3, 7);
        let once = scalar_shift(&kc, &s).unwrap();
        let kc2 = kc_factorize(&once).unwrap();
        let back = scalar_shift(&kc2, &s.inv()).unwrap();
        assert_eq!(back.r, t.r);
    }

    #[test]
    fn trivial_plane_constituent_is_rejected() {
        // α_i ∝ e3*: every r'_i fixes the plane x3 = 0 pointwise
        let t = rational_reflection_triple([[0, 0, 1], [0, 0, 2], [0, 0, 3]]);
        match reduce_to_sl2(&t) {
            Err(McError::IrreducibleConstituentMissing) => {}
            other => panic!("expected IrreducibleConstituentMissing, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn sl2_from_traces_realizes_an_icosahedral_triple() {
        use crate::groups::{self, ClassLabel};
        let g = groups::binary_icosahedral().unwrap();
        let qt = crate::hurwitz::find_triple_with_labels(
            &g,
            [ClassLabel::B, ClassLabel::B, ClassLabel::B],
            ClassLabel::A,
        )
        .unwrap();
        let base = Tower::cyclotomic(15);
        let sqrt5 = crate::scalar::sqrt_in_cyclotomic(
            &num_rational::BigRational::from_integer(5.into()),
            15,
        )
        .unwrap();
        let pair = |p: (i64, i64)| {
            (ExactScalar::from_int(p.0) + ExactScalar::from_int(p.1) * sqrt5.clone())
                * ExactScalar::ratio(1, 2)
        };
        let tr7 = crate::hurwitz::seven_traces_quat(&qt).map(pair);
        let z = tr7[3].clone();
        let disc = z.clone() * z - ExactScalar::from_int(4);
        let tower = if disc.sqrt_in_tower().is_some() {
            base
        } else {
            Tower::with_sqrt(&base, &disc)
        };
        let traces: [ExactScalar; 7] = tr7.map(|t| t.try_embed(&tower).unwrap());
        let rebuilt = sl2_from_traces(&traces).expect("normal form");
        assert_eq!(crate::hurwitz::seven_traces_mat(&rebuilt), traces);
        // same abstract group: order 120
        assert_eq!(image_order(&rebuilt, 150), Some(120));
    }
}

//! The PVI equation as an exact residual, the catalog of explicit
//! algebraic solutions with their parameters, identity-level verification
//! in the function field of the solution curve, Belyi and degree checks,
//! Puiseux extension of a leading term at t = 0, and bad primes of the
//! elliptic solution curves.

use crate::curve::{CurveData, CurveFn};
use crate::field::{rat, FieldScalar};
use crate::poly::{discriminant, Poly};
use crate::ratfn::RatFn;
use crate::scalar::ExactScalar;
use crate::series::Puiseux;
use crate::weylf4::{theta_to_constants, PviConstants, Theta};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
#[allow(unused_imports)]
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("the equation has a pole at this point (y ∈ {{0,1,t}} or t ∈ {{0,1}})")]
    PoleOfEquation,
    #[error("dt/ds vanishes identically; the parametrization is degenerate")]
    DegenerateParametrization,
    #[error("nonzero PVI residual")]
    NonzeroResidual,
    #[error("t is not a Belyi map: a critical value lies outside {{0,1,∞}}")]
    NotBelyi,
    #[error("degree computation for this curve requires the pole-counting flag")]
    UnsupportedCurve,
    #[error("curve polynomial is not squarefree")]
    NonSquarefree,
    #[error("resonant Puiseux coefficient at order {0} (linear solve degenerate)")]
    ResonantCoefficient(i64),
    #[error("the leading term does not satisfy the equation at lowest order")]
    InconsistentLeadingTerm,
    #[error("unknown solution name: {0}")]
    UnknownSolution(String),
}

pub type VerifyResult<T> = Result<T, VerifyError>;

// ---------------------------------------------------------------------------
// the PVI residual, once, generically
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct Consts<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub delta: S,
}

impl<S: FieldScalar> Consts<S> {
    pub fn from_constants(c: &PviConstants) -> Self {
        Consts {
            alpha: S::from_rat(&c.alpha),
            beta: S::from_rat(&c.beta),
            gamma: S::from_rat(&c.gamma),
            delta: S::from_rat(&c.delta),
        }
    }
}

/// Left side minus right side of the PVI equation:
///   y'' = ½(1/y + 1/(y−1) + 1/(y−t))·y'²  −  (1/t + 1/(t−1) + 1/(y−t))·y'
///       + y(y−1)(y−t)/(t²(t−1)²) · (α + β·t/y² + γ(t−1)/(y−1)² + δ·t(t−1)/(y−t)²)
pub fn pvi_residual_generic<S: FieldScalar>(
    y: &S,
    yp: &S,
    ypp: &S,
    t: &S,
    c: &Consts<S>,
) -> S {
    let one = S::one();
    let half = S::from_ratio(1, 2);
    let ym1 = y.clone() - one.clone();
    let ymt = y.clone() - t.clone();
    let tm1 = t.clone() - one.clone();
    let quad = half
        * (y.inv() + ym1.inv() + ymt.inv())
        * yp.clone()
        * yp.clone();
    let lin = (t.inv() + tm1.inv() + ymt.inv()) * yp.clone();
    let front = y.clone() * ym1.clone() * ymt.clone()
        * (t.clone() * t.clone() * tm1.clone() * tm1.clone()).inv();
    let tail = c.alpha.clone()
        + c.beta.clone() * t.clone() * (y.clone() * y.clone()).inv()
        + c.gamma.clone() * tm1.clone() * (ym1.clone() * ym1.clone()).inv()
        + c.delta.clone() * t.clone() * tm1.clone() * (ymt.clone() * ymt.clone()).inv();
    ypp.clone() - (quad - lin + front * tail)
}

/// Point evaluation with the pole guard of the displayed equation.
pub fn pvi_residual(
    y: &ExactScalar,
    yp: &ExactScalar,
    ypp: &ExactScalar,
    t: &ExactScalar,
    constants: &PviConstants,
) -> VerifyResult<ExactScalar> {
    let one = ExactScalar::from_int(1);
    if y.is_zero() || *y == one || y == t || t.is_zero() || *t == one {
        return Err(VerifyError::PoleOfEquation);
    }
    let c = Consts::<ExactScalar>::from_constants(constants);
    Ok(pvi_residual_generic(y, yp, ypp, t, &c))
}

// ---------------------------------------------------------------------------
// algebraic solutions
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub enum CurveKind {
    /// rational line with parameter s
    Line,
    /// hyperelliptic u² = f(s)
    Hyperelliptic(Poly<BigRational>),
}

#[derive(Clone)]
pub struct AlgebraicSolution {
    pub name: &'static str,
    pub curve: CurveKind,
    pub y: CurveFn<BigRational>,
    pub t: CurveFn<BigRational>,
    pub theta: Theta,
    pub expected_degree: usize,
    pub expected_genus: i64,
}

fn poly(v: &[i64]) -> Poly<BigRational> {
    Poly::from_ints(v)
}

fn on_line(num: Poly<BigRational>, den: Poly<BigRational>, curve: &Arc<CurveData<BigRational>>) -> CurveFn<BigRational> {
    CurveFn::from_ratfn(curve, RatFn::new(num, den))
}

/// The seven explicit solutions, coefficients transcribed exactly.
pub fn catalog() -> Vec<AlgebraicSolution> {
    let mut out = vec![];
    let line = CurveFn::<BigRational>::line_curve;

    // tetrahedral, degree 3:
    //   y = (s−1)(s+2) / (s(s+1)),   t = (s−1)²(s+2) / ((s+1)²(s−2))
    {
        let c = line();
        let y = on_line(poly(&[-1, 1]) * poly(&[2, 1]), poly(&[0, 1]) * poly(&[1, 1]), &c);
        let t = on_line(
            poly(&[-1, 1]).pow(2) * poly(&[2, 1]),
            poly(&[1, 1]).pow(2) * poly(&[-2, 1]),
            &c,
        );
        out.push(AlgebraicSolution {
            name: "tetrahedral",
            curve: CurveKind::Line,
            y,
            t,
            theta: Theta::from_ratios([(2, 3), (1, 3), (1, 3), (2, 3)]),
            expected_degree: 3,
            expected_genus: 0,
        });
    }

    // octahedral, degree 4:
    //   y = (s−1)² / (s(s−2)),   t = (s+1)(s−1)³ / (s³(s−2))
    {
        let c = line();
        let y = on_line(poly(&[-1, 1]).pow(2), poly(&[0, 1]) * poly(&[-2, 1]), &c);
        let t = on_line(
            poly(&[1, 1]) * poly(&[-1, 1]).pow(3),
            poly(&[0, 0, 0, 1]) * poly(&[-2, 1]),
            &c,
        );
        out.push(AlgebraicSolution {
            name: "octahedral",
            curve: CurveKind::Line,
            y,
            t,
            theta: Theta::from_ratios([(1, 4), (1, 4), (1, 4), (1, 4)]),
            expected_degree: 4,
            expected_genus: 0,
        });
    }

    // elliptic dihedral, degree 12, on u² = s(s²+s−1):
    //   y = (3s−1)(s²−4s−1)(s²+u)(s(s+2)−u) / ((3s³+7s²+s+1)(s²−u)(s(s−2)+u))
    //   t = (s²+u)²(s(s+2)−u)(s(s−2)−u) / ((s²−u)²(s(s+2)+u)(s(s−2)+u))
    {
        let f = poly(&[0, -1, 1, 1]);
        let cd = CurveFn::curve_from(f.clone());
        let u = CurveFn::u(&cd);
        let p = |v: &[i64]| CurveFn::from_ratfn(&cd, RatFn::from_poly(poly(v)));
        let s2 = p(&[0, 0, 1]);
        let s_sp2 = p(&[0, 2, 1]); // s(s+2)
        let s_sm2 = p(&[0, -2, 1]); // s(s−2)
        let ynum = p(&[-1, 3]) * p(&[-1, -4, 1]) * (s2.clone() + u.clone())
            * (s_sp2.clone() - u.clone());
        let yden = p(&[1, 1, 7, 3]) * (s2.clone() - u.clone()) * (s_sm2.clone() + u.clone());
        let tnum = (s2.clone() + u.clone()) * (s2.clone() + u.clone())
            * (s_sp2.clone() - u.clone())
            * (s_sm2.clone() - u.clone());
        let tden = (s2.clone() - u.clone()) * (s2.clone() - u.clone())
            * (s_sp2.clone() + u.clone())
            * (s_sm2.clone() + u.clone());
        let y = ynum * yden.inv();
        let t = tnum * tden.inv();
        out.push(AlgebraicSolution {
            name: "dihedral-elliptic",
            curve: CurveKind::Hyperelliptic(f),
            y,
            t,
            theta: Theta::from_ratios([(1, 2), (1, 2), (1, 2), (1, 2)]),
            expected_degree: 12,
            expected_genus: 1,
        });
    }

    // Klein, degree 7:
    //   y = −(5s²−8s+5)(7s²−7s+4) / (s(s−2)(s+1)(2s−1)(4s²−7s+7))
    //   t = (7s²−7s+4)² / (s³(4s²−7s+7)²)
    {
        let c = line();
        let y = on_line(
            -(poly(&[5, -8, 5]) * poly(&[4, -7, 7])),
            poly(&[0, 1]) * poly(&[-2, 1]) * poly(&[1, 1]) * poly(&[-1, 2]) * poly(&[7, -7, 4]),
            &c,
        );
        let t = on_line(
            poly(&[4, -7, 7]).pow(2),
            poly(&[0, 0, 0, 1]) * poly(&[7, -7, 4]).pow(2),
            &c,
        );
        out.push(AlgebraicSolution {
            name: "klein",
            curve: CurveKind::Line,
            y,
            t,
            theta: Theta::from_ratios([(2, 7), (2, 7), (2, 7), (4, 7)]),
            expected_degree: 7,
            expected_genus: 0,
        });
    }

    // generic abcd row, degree 12:
    //   y = −9s(s²+1)(3s−4)(15s⁴−5s³+3s²−3s+2) / ((2s−1)²(9s²+4)(9s²+3s+10))
    //   t = 27 s⁵ (s²+1)² (3s−4)³ / (4(2s−1)³(9s²+4)²)
    {
        let c = line();
        let y = on_line(
            -(poly(&[0, 9]) * poly(&[1, 0, 1]) * poly(&[-4, 3]) * poly(&[2, -3, 3, -5, 15])),
            poly(&[-1, 2]).pow(2) * poly(&[4, 0, 9]) * poly(&[10, 3, 9]),
            &c,
        );
        let t = on_line(
            poly(&[0, 0, 0, 0, 0, 27]) * poly(&[1, 0, 1]).pow(2) * poly(&[-4, 3]).pow(3),
            poly(&[4]) * poly(&[-1, 2]).pow(3) * poly(&[4, 0, 9]).pow(2),
            &c,
        );
        out.push(AlgebraicSolution {
            name: "generic-abcd",
            curve: CurveKind::Line,
            y,
            t,
            theta: Theta::from_ratios([(2, 5), (1, 2), (1, 3), (4, 5)]),
            expected_degree: 12,
            expected_genus: 0,
        });
    }

    // triangle-237 elliptic, degree 18, on u² = s(s²+s+7):
    //   y = ½ − (3s⁸−2s⁷−4s⁶−204s⁵−536s⁴−1738s³−5064s²−4808s−3199)·u /
    //           (4(s⁶+196s³+189s²+756s+154)(s²+s+7)(s+1))
    //   t = ½ − (s⁹−84s⁶−378s⁵−1512s⁴−5208s³−7236s²−8127s−784)·u /
    //           (432·s(s+1)²(s²+s+7)²)
    {
        let f = poly(&[0, 7, 1, 1]);
        let cd = CurveFn::curve_from(f.clone());
        let u = CurveFn::u(&cd);
        let half = CurveFn::from_ratfn(&cd, RatFn::constant(rat(1, 2)));
        let ynum = poly(&[-3199, -4808, -5064, -1738, -536, -204, -4, -2, 3]);
        let yden = poly(&[154, 756, 189, 196, 0, 0, 1]) * poly(&[7, 1, 1]) * poly(&[1, 1])
            * poly(&[4]);
        let y = half.clone()
            - CurveFn::from_ratfn(&cd, RatFn::new(ynum, yden)) * u.clone();
        let tnum = poly(&[-784, -8127, -7236, -5208, -1512, -378, -84, 0, 0, 1]);
        let tden = poly(&[0, 432]) * poly(&[1, 1]).pow(2) * poly(&[7, 1, 1]).pow(2);
        let t = half - CurveFn::from_ratfn(&cd, RatFn::new(tnum, tden)) * u;
        out.push(AlgebraicSolution {
            name: "elliptic-237",
            curve: CurveKind::Hyperelliptic(f),
            y,
            t,
            theta: Theta::from_ratios([(2, 7), (2, 7), (2, 7), (1, 3)]),
            expected_degree: 18,
            expected_genus: 1,
        });
    }

    // icosahedral elliptic (the b⁴ row), degree 18, on u² = s(8s²−11s+8):
    //   y = ½ − (8s⁷−28s⁶+75s⁵+31s⁴−269s³+318s²−166s+56) /
    //           (18u(s−1)(3s³−4s²+4s+2))
    //   t = ½ + (s+1)(32(s⁸+1)−320(s⁷+s)+1112(s⁶+s²)−2420(s⁵+s³)+3167s⁴) /
    //           (54u³·s(s−1))
    {
        let f = poly(&[0, 8, -11, 8]);
        let cd = CurveFn::curve_from(f.clone());
        let u = CurveFn::u(&cd);
        let half = CurveFn::from_ratfn(&cd, RatFn::constant(rat(1, 2)));
        // 1/u = u/f, 1/u³ = u/f²
        let u_inv = u.clone() * CurveFn::from_ratfn(&cd, RatFn::new(Poly::one(), f.clone()));
        let u_inv3 = u.clone()
            * CurveFn::from_ratfn(&cd, RatFn::new(Poly::one(), f.clone() * f.clone()));
        let ynum = poly(&[56, -166, 318, -269, 31, 75, -28, 8]);
        let yfrac = RatFn::new(ynum, poly(&[18]) * poly(&[-1, 1]) * poly(&[2, 4, -4, 3]));
        let y = half.clone() - CurveFn::from_ratfn(&cd, yfrac) * u_inv;
        let tnum = poly(&[1, 1])
            * poly(&[32, -320, 1112, -2420, 3167, -2420, 1112, -320, 32]);
        let tfrac = RatFn::new(tnum, poly(&[0, 54]) * poly(&[-1, 1]));
        let t = half + CurveFn::from_ratfn(&cd, tfrac) * u_inv3;
        out.push(AlgebraicSolution {
            name: "icosahedral-elliptic",
            curve: CurveKind::Hyperelliptic(f),
            y,
            t,
            theta: Theta::from_ratios([(1, 3), (1, 3), (1, 3), (1, 3)]),
            expected_degree: 18,
            expected_genus: 1,
        });
    }

    out
}

pub fn solution_by_name(name: &str) -> VerifyResult<AlgebraicSolution> {
    catalog()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| VerifyError::UnknownSolution(name.to_string()))
}

pub fn solution_names() -> Vec<&'static str> {
    catalog().iter().map(|s| s.name).collect()
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub name: String,
    pub residual_zero: bool,
    pub degree: Option<usize>,
    pub belyi: Option<bool>,
    pub bad_primes: Option<Vec<u64>>,
}

/// y' and y'' as functions on the curve: y' = ẏ/ṫ, y'' = (y')˙/ṫ.
pub fn derivatives_on_curve(
    sol: &AlgebraicSolution,
) -> VerifyResult<(CurveFn<BigRational>, CurveFn<BigRational>)> {
    let tdot = sol.t.derivative();
    if tdot.is_zero() {
        return Err(VerifyError::DegenerateParametrization);
    }
    let tdot_inv = tdot.inv();
    let yp = sol.y.derivative() * tdot_inv.clone();
    let ypp = yp.derivative() * tdot_inv;
    Ok((yp, ypp))
}

/// The residual as an element of the function field; the solution passes
/// iff this is identically zero.
pub fn residual_on_curve(sol: &AlgebraicSolution) -> VerifyResult<CurveFn<BigRational>> {
    let (yp, ypp) = derivatives_on_curve(sol)?;
    let constants = theta_to_constants(&sol.theta);
    let c = Consts::<CurveFn<BigRational>>::from_constants(&constants);
    Ok(pvi_residual_generic(&sol.y, &yp, &ypp, &sol.t, &c))
}

pub fn verify_solution(sol: &AlgebraicSolution) -> VerifyResult<()> {
    let r = residual_on_curve(sol)?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(VerifyError::NonzeroResidual)
    }
}

// ---------------------------------------------------------------------------
// degree and Belyi checks
// ---------------------------------------------------------------------------

pub fn map_degree(sol: &AlgebraicSolution) -> VerifyResult<usize> {
    match &sol.curve {
        CurveKind::Line => Ok(sol.t.a.map_degree()),
        CurveKind::Hyperelliptic(_) => elliptic_degree(sol),
    }
}

/// Degree of t: Π → P¹ for a hyperelliptic curve, by counting the generic
/// fiber: solutions of (c − a(s))² = b(s)²f(s) with u then determined.
/// The count is the s-degree of the cleared polynomial for generic c,
/// read off as the largest s-degree whose c-coefficient polynomial is
/// nonzero.
fn elliptic_degree(sol: &AlgebraicSolution) -> VerifyResult<usize> {
    let f = match &sol.curve {
        CurveKind::Hyperelliptic(f) => f.clone(),
        CurveKind::Line => unreachable!(),
    };
    let a = &sol.t.a;
    let b = &sol.t.b;
    if b.is_zero_fn() {
        return Err(VerifyError::UnsupportedCurve);
    }
    // N(s, c) = (c·D − A)²·E² − B²·D²·f  with a = A/D, b = B/E
    let (an, ad) = (a.num.clone(), a.den.clone());
    let (bn, bd) = (b.num.clone(), b.den.clone());
    let e2 = bd.clone() * bd.clone();
    let c2 = ad.clone() * ad.clone() * e2.clone();
    let c1 = (an.clone() * ad.clone() * e2.clone())
        .scale(&BigRational::from_integer((-2).into()));
    let c0 = an.clone() * an.clone() * e2 - bn.clone() * bn.clone() * ad.clone() * ad.clone() * f;
    let deg = c2
        .degree()
        .into_iter()
        .chain(c1.degree())
        .chain(c0.degree())
        .max()
        .unwrap_or(0);
    Ok(deg)
}

/// Branch locus of t ⊆ {0, 1, ∞} for a rational-line solution: every root
/// of the squarefree part of N'D − ND' must be a root of N, N − D or D,
/// and a ramified point at s = ∞ must sit over {0, 1, ∞}.
pub fn belyi_check(sol: &AlgebraicSolution) -> VerifyResult<bool> {
    let t = match &sol.curve {
        CurveKind::Line => &sol.t.a,
        CurveKind::Hyperelliptic(_) => return Err(VerifyError::UnsupportedCurve),
    };
    let n = &t.num;
    let d = &t.den;
    let w = n.derivative() * d.clone() - n.clone() * d.derivative();
    if w.is_zero() {
        return Ok(false); // constant map is not a covering
    }
    let wsf = w.squarefree_part();
    let target = n.clone() * (n.clone() - d.clone()) * d.clone();
    let (_, rem) = target.divrem(&wsf);
    if !rem.is_zero() {
        return Ok(false);
    }
    // the point at infinity
    let dn = n.deg_or_zero();
    let dd = d.deg_or_zero();
    if dn == dd {
        let c = n.lc() / d.lc();
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        if c != zero && c != one {
            // t(∞) = c ∉ {0,1,∞}: must be unramified there, i.e.
            // deg(N − cD) = deg − 1 exactly
            let diff = n.clone() - d.scale(&c);
            if diff.deg_or_zero() + 1 != dn || diff.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// bad primes
// ---------------------------------------------------------------------------

/// Primes at which the model u² = f(s) degenerates: the odd primes
/// dividing disc(f), together with 2 (this affine model is always
/// singular in characteristic 2).
pub fn bad_primes(f: &Poly<BigRational>) -> VerifyResult<BTreeSet<u64>> {
    if f.is_zero() || !f.is_squarefree() {
        return Err(VerifyError::NonSquarefree);
    }
    let disc = discriminant(f);
    let mut n: BigInt = (disc.numer() * disc.denom()).abs();
    let mut primes = BTreeSet::new();
    primes.insert(2);
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            primes.insert(p.to_string().parse().unwrap());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        primes.insert(n.to_string().parse().unwrap());
    }
    Ok(primes)
}

// ---------------------------------------------------------------------------
// Puiseux extension from a leading term
// ---------------------------------------------------------------------------

type PS = Puiseux<ExactScalar>;

/// Extend y ~ c·t^σ to N further coefficients in the lattice σ + (1/q)Z by
/// matching Puiseux coefficients in the PVI equation term by term.  The
/// construction probes the linearized equation by evaluation; the final
/// series is certified by recomputing the full residual and demanding
/// vanishing through the working order.
pub fn puiseux_extend(
    theta: &Theta,
    sigma: &BigRational,
    leading: &ExactScalar,
    n_terms: usize,
) -> VerifyResult<Vec<(BigRational, ExactScalar)>> {
    assert!(sigma.is_positive(), "leading exponent must be positive");
    let q = {
        use num_traits::ToPrimitive;
        sigma.denom().to_i64().expect("small denominator")
    };
    let a0 = {
        use num_traits::ToPrimitive;
        sigma.numer().to_i64().expect("small numerator")
    };
    let constants = theta_to_constants(theta);
    let consts = Consts::<PS>::from_constants(&constants);
    let prec = a0 + n_terms as i64 + 3 * q + 4;

    let t = PS::t(q).truncate(prec + 2 * q);
    let mut y = PS::monomial(q, leading.clone(), a0).truncate(prec);

    let residual = |y: &PS, t: &PS| -> PS {
        let yp = y.d_dt();
        let ypp = yp.d_dt();
        pvi_residual_generic(y, &yp, &ypp, t, &consts)
    };

    // consistency of the leading term: the residual must not have support
    // below what the first free coefficient can cancel
    let base = residual(&y, &t);
    let probe_m = a0 + 1;
    let probe = residual(
        &(y.clone() + PS::monomial(q, ExactScalar::from_int(1), probe_m).truncate(prec)),
        &t,
    );
    let delta = probe.clone() - base.clone();
    let lead_delta = delta.leading();
    if let (Some((rord, _)), Some((dord, _))) = (base.leading(), lead_delta.clone()) {
        if rord < dord {
            return Err(VerifyError::InconsistentLeadingTerm);
        }
    }

    for k in 1..=n_terms as i64 {
        let m = a0 + k;
        let r = residual(&y, &t);
        let pert = PS::monomial(q, ExactScalar::from_int(1), m).truncate(prec);
        let probed = residual(&(y.clone() + pert.clone()), &t);
        let delta = probed - r.clone();
        let (dord, dlead) = match delta.leading() {
            Some(x) => x,
            None => return Err(VerifyError::ResonantCoefficient(m)),
        };
        if dlead.is_zero() {
            return Err(VerifyError::ResonantCoefficient(m));
        }
        let target = r.coeff_at(dord);
        let coeff = -(target * dlead.inv());
        y = y + PS::monomial(q, coeff, m).truncate(prec);
    }

    // certify: residual vanishes through the order the constructed terms
    // are expected to control
    let r = residual(&y, &t);
    if let Some((ord, _)) = r.leading() {
        // the first unconstructed coefficient sits at exponent a0+n+1; the
        // residual may be nonzero only at orders that coefficient controls
        let pert = PS::monomial(q, ExactScalar::from_int(1), a0 + n_terms as i64 + 1)
            .truncate(prec);
        let delta = residual(&(y.clone() + pert), &t) - r.clone();
        match delta.leading() {
            Some((dord, _)) if ord >= dord => {}
            _ => return Err(VerifyError::NonzeroResidual),
        }
    }

    let mut out = vec![];
    for (i, c) in y.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let expo = BigRational::new((y.ord + i as i64).into(), q.into());
        out.push((expo, c.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};

    #[test]
    fn catalog_has_seven_entries() {
        assert_eq!(catalog().len(), 7);
    }

    #[test]
    fn residual_point_examples() {
        // constants (0,0,0,1/2) at (t,y) = (2,3): solve for y'' and get 0
        let theta = Theta::from_ratios([(0, 1), (0, 1), (0, 1), (1, 1)]);
        let constants = theta_to_constants(&theta);
        let y = ExactScalar::from_int(3);
        let t = ExactScalar::from_int(2);
        let yp = ExactScalar::from_int(5);
        // ypp := RHS so that the residual vanishes by construction
        let zero = pvi_residual(&y, &yp, &ExactScalar::from_int(0), &t, &constants).unwrap();
        let ypp = -zero;
        let r = pvi_residual(&y, &yp, &ypp, &t, &constants).unwrap();
        assert!(r.is_zero());
        // pole guard
        assert!(matches!(
            pvi_residual(&t, &yp, &ypp, &t, &constants),
            Err(VerifyError::PoleOfEquation)
        ));
    }

    #[test]
    fn tetrahedral_passes_and_perturbed_fails() {
        let sol = solution_by_name("tetrahedral").unwrap();
        assert!(verify_solution(&sol).is_ok());
        let mut bad = sol.clone();
        bad.y = bad.y.clone() + CurveFn::from_i64(1);
        assert!(matches!(
            verify_solution(&bad),
            Err(VerifyError::NonzeroResidual)
        ));
    }

    #[test]
    fn degrees_and_belyi_for_rational_solutions() {
        for (name, deg) in [
            ("tetrahedral", 3usize),
            ("octahedral", 4),
            ("klein", 7),
            ("generic-abcd", 12),
        ] {
            let sol = solution_by_name(name).unwrap();
            assert_eq!(map_degree(&sol).unwrap(), deg, "{}", name);
            assert_eq!(belyi_check(&sol).unwrap(), true, "{}", name);
        }
    }

    #[test]
    fn bad_primes_examples() {
        let f = poly(&[0, 8, -11, 8]);
        let p = bad_primes(&f).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
        let f = poly(&[0, 7, 1, 1]);
        let p = bad_primes(&f).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![2, 3, 7]);
        let f = poly(&[0, -1, 0, 1]);
        let p = bad_primes(&f).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![2]);
        assert!(matches!(
            bad_primes(&(poly(&[1, 1]) * poly(&[1, 1]))),
            Err(VerifyError::NonSquarefree)
        ));
    }

    #[test]
    fn sampling_precheck_tetrahedral_at_s_3() {
        // exact chain-rule evaluation at s = 3 must satisfy the equation
        let sol = solution_by_name("tetrahedral").unwrap();
        let (yp, ypp) = derivatives_on_curve(&sol).unwrap();
        let s3 = rat_int(3);
        let ev = |c: &CurveFn<BigRational>| c.a.eval(&s3).unwrap();
        let constants = theta_to_constants(&sol.theta);
        let r = pvi_residual(
            &ExactScalar::from_rational(ev(&sol.y)),
            &ExactScalar::from_rational(ev(&yp)),
            &ExactScalar::from_rational(ev(&ypp)),
            &ExactScalar::from_rational(ev(&sol.t)),
            &constants,
        )
        .unwrap();
        assert!(r.is_zero());
        // perturbing y at the same point gives a nonzero residual
        let r = pvi_residual(
            &ExactScalar::from_rational(ev(&sol.y) + rat(1, 1)),
            &ExactScalar::from_rational(ev(&yp)),
            &ExactScalar::from_rational(ev(&ypp)),
            &ExactScalar::from_rational(ev(&sol.t)),
            &constants,
        )
        .unwrap();
        assert!(!r.is_zero());
    }
}

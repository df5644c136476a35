//! PVI parameter space: the θ ↔ (α,β,γ,δ) dictionary, the (λ,μ) → θ map
//! for the 3×3 families, and wall counts for the affine F4 symmetry group
//! acting on θ ∈ Q⁴.
//!
//! Wall convention (calibrated once against the icosahedral table and then
//! frozen): the F4 roots are realized as ±e_i, ±e_i±e_j and ½(±e1±e2±e3±e4),
//! and θ lies on a wall of the affine arrangement for each root α with
//! ⟨α,θ⟩ ∈ Z.  The reported count is the rank of the set of such roots,
//! which equals the number of closed-alcove facets containing the reduced
//! representative.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("trace mismatch: sum of lambda must equal sum of mu")]
    TraceMismatch,
    #[error("alcove reduction did not terminate")]
    AlcoveDivergence,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Theta(pub [BigRational; 4]);

impl Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(ser)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PviConstants {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub delta: BigRational,
}

impl Serialize for PviConstants {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = ser.serialize_map(Some(4))?;
        m.serialize_entry("alpha", &self.alpha.to_string())?;
        m.serialize_entry("beta", &self.beta.to_string())?;
        m.serialize_entry("gamma", &self.gamma.to_string())?;
        m.serialize_entry("delta", &self.delta.to_string())?;
        m.end()
    }
}

impl Theta {
    pub fn new(v: [BigRational; 4]) -> Self {
        Theta(v)
    }

    pub fn from_ratios(v: [(i64, i64); 4]) -> Self {
        Theta(v.map(|(n, d)| BigRational::new(n.into(), d.into())))
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

/// α = (θ4−1)²/2, β = −θ1²/2, γ = θ3²/2, δ = (1−θ2²)/2.
pub fn theta_to_constants(theta: &Theta) -> PviConstants {
    let half = BigRational::new(1.into(), 2.into());
    let one = BigRational::one();
    let t = &theta.0;
    PviConstants {
        alpha: (&t[3] - &one) * (&t[3] - &one) * &half,
        beta: -(&t[0] * &t[0]) * &half,
        gamma: (&t[2] * &t[2]) * &half,
        delta: (&one - &t[1] * &t[1]) * &half,
    }
}

/// θ1 = λ1−μ1, θ2 = λ2−μ1, θ3 = λ3−μ1, θ4 = μ3−μ2; requires Σλ = Σμ.
pub fn theta_from_lambda_mu(
    lambda: &[BigRational; 3],
    mu: &[BigRational; 3],
) -> Result<Theta, ThetaError> {
    let sl: BigRational = lambda.iter().sum();
    let sm: BigRational = mu.iter().sum();
    if sl != sm {
        return Err(ThetaError::TraceMismatch);
    }
    Ok(Theta([
        &lambda[0] - &mu[0],
        &lambda[1] - &mu[0],
        &lambda[2] - &mu[0],
        &mu[2] - &mu[1],
    ]))
}

/// The 24 positive roots of F4 in this realization.
fn positive_roots() -> Vec<[BigRational; 4]> {
    let z = BigRational::zero;
    let one = BigRational::one;
    let half = || BigRational::new(1.into(), 2.into());
    let mut roots = vec![];
    // e_i
    for i in 0..4 {
        let mut r = [z(), z(), z(), z()];
        r[i] = one();
        roots.push(r);
    }
    // e_i ± e_j, i < j
    for i in 0..4 {
        for j in i + 1..4 {
            for sign in [1i64, -1] {
                let mut r = [z(), z(), z(), z()];
                r[i] = one();
                r[j] = BigRational::from_integer(sign.into());
                roots.push(r);
            }
        }
    }
    // (e1 ± e2 ± e3 ± e4)/2
    for s2 in [1i64, -1] {
        for s3 in [1i64, -1] {
            for s4 in [1i64, -1] {
                roots.push([
                    half(),
                    half() * BigRational::from_integer(s2.into()),
                    half() * BigRational::from_integer(s3.into()),
                    half() * BigRational::from_integer(s4.into()),
                ]);
            }
        }
    }
    roots
}

fn pairing(a: &[BigRational; 4], b: &[BigRational; 4]) -> BigRational {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Number of alcove walls containing θ: the rank of the set of roots with
/// integral pairing against θ.
pub fn walls(theta: &Theta) -> u32 {
    let mut integral: Vec<[BigRational; 4]> = vec![];
    for r in positive_roots() {
        if pairing(&r, &theta.0).is_integer() {
            integral.push(r);
        }
    }
    rank4(&integral)
}

fn rank4(rows: &[[BigRational; 4]]) -> u32 {
    let mut m: Vec<[BigRational; 4]> = rows.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..4 {
        let mut piv = None;
        for r in row..m.len() {
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
        let inv = BigRational::one() / &m[row][col];
        for r in row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..4 {
                let delta = &factor * &m[row][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        row += 1;
        if row == m.len() {
            break;
        }
    }
    rank
}

/// Simple roots α1 = e2−e3, α2 = e3−e4, α3 = e4, α4 = (e1−e2−e3−e4)/2 and
/// the highest root e1+e2 bound the fundamental alcove
/// { ⟨θ,αi⟩ ≥ 0, θ1+θ2 ≤ 1 }.
fn simple_roots() -> [[BigRational; 4]; 4] {
    let z = BigRational::zero;
    let one = BigRational::one;
    let half = || BigRational::new(1.into(), 2.into());
    [
        [z(), one(), -one(), z()],
        [z(), z(), one(), -one()],
        [z(), z(), z(), one()],
        [half(), -half(), -half(), -half()],
    ]
}

fn norm_sq(r: &[BigRational; 4]) -> BigRational {
    pairing(r, r)
}

/// Reduce θ into the closed fundamental alcove by reflecting across
/// violated walls.  Returns the representative and the number of facets
/// of the alcove containing it.
pub fn alcove_reduce(theta: &Theta) -> Result<(Theta, u32), ThetaError> {
    let simples = simple_roots();
    let highest: [BigRational; 4] = [
        BigRational::one(),
        BigRational::one(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    let mut cur = theta.0.clone();
    let cap = 200000;
    for _ in 0..cap {
        let mut moved = false;
        for a in &simples {
            let p = pairing(a, &cur);
            if p.is_negative() {
                // reflect: θ ← θ − 2⟨θ,α⟩/⟨α,α⟩ · α
                let coef = &p * BigRational::from_integer(2.into()) / norm_sq(a);
                for i in 0..4 {
                    let d = &coef * &a[i];
                    cur[i] -= d;
                }
                moved = true;
            }
        }
        let ph = pairing(&highest, &cur);
        if ph > BigRational::one() {
            // affine reflection across ⟨θ, e1+e2⟩ = 1 (long root: α∨ = α)
            let coef = &ph - BigRational::one();
            for i in 0..4 {
                let d = &coef * &highest[i];
                cur[i] -= d;
            }
            moved = true;
        }
        if !moved {
            let mut facets = 0;
            for a in &simples {
                if pairing(a, &cur).is_zero() {
                    facets += 1;
                }
            }
            if pairing(&highest, &cur) == BigRational::one() {
                facets += 1;
            }
            return Ok((Theta(cur), facets));
        }
    }
    Err(ThetaError::AlcoveDivergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn constants_examples() {
        let t = Theta::from_ratios([(0, 1), (0, 1), (0, 1), (1, 1)]);
        let c = theta_to_constants(&t);
        assert_eq!(c.alpha, rat(0, 1));
        assert_eq!(c.beta, rat(0, 1));
        assert_eq!(c.gamma, rat(0, 1));
        assert_eq!(c.delta, rat(1, 2));

        let t = Theta::from_ratios([(1, 2), (1, 2), (1, 2), (1, 2)]);
        let c = theta_to_constants(&t);
        assert_eq!(c.alpha, rat(1, 8));
        assert_eq!(c.beta, rat(-1, 8));
        assert_eq!(c.gamma, rat(1, 8));
        assert_eq!(c.delta, rat(3, 8));

        let t = Theta::from_ratios([(2, 7), (2, 7), (2, 7), (4, 7)]);
        let c = theta_to_constants(&t);
        assert_eq!(c.alpha, rat(9, 98));
        assert_eq!(c.beta, rat(-2, 49));
        assert_eq!(c.gamma, rat(2, 49));
        assert_eq!(c.delta, rat(45, 98));
    }

    #[test]
    fn lambda_mu_examples() {
        let l = [rat(1, 2), rat(1, 2), rat(1, 2)];
        let m = [rat(3, 14), rat(5, 14), rat(13, 14)];
        let t = theta_from_lambda_mu(&l, &m).unwrap();
        assert_eq!(t, Theta::from_ratios([(2, 7), (2, 7), (2, 7), (4, 7)]));

        let m = [rat(1, 6), rat(3, 6), rat(5, 6)];
        let t = theta_from_lambda_mu(&l, &m).unwrap();
        assert_eq!(t, Theta::from_ratios([(1, 3), (1, 3), (1, 3), (1, 3)]));

        let z = [rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(
            theta_from_lambda_mu(&z, &z).unwrap(),
            Theta::from_ratios([(0, 1), (0, 1), (0, 1), (0, 1)])
        );

        let bad = [rat(1, 2), rat(0, 1), rat(0, 1)];
        assert!(matches!(
            theta_from_lambda_mu(&bad, &z),
            Err(ThetaError::TraceMismatch)
        ));
    }

    #[test]
    fn walls_examples() {
        assert_eq!(
            walls(&Theta::from_ratios([(2, 5), (1, 2), (1, 3), (4, 5)])),
            0
        );
        assert_eq!(
            walls(&Theta::from_ratios([(1, 3), (1, 3), (1, 3), (1, 3)])),
            3
        );
        assert_eq!(
            walls(&Theta::from_ratios([(1, 7), (1, 11), (1, 13), (1, 17)])),
            0
        );
    }

    #[test]
    fn alcove_reduction_agrees_with_rank_count() {
        let cases = [
            [(2, 5), (1, 2), (1, 3), (4, 5)],
            [(1, 3), (1, 3), (1, 3), (1, 3)],
            [(1, 5), (1, 5), (1, 5), (2, 5)],
            [(1, 2), (1, 2), (1, 5), (2, 5)],
            [(7, 3), (-1, 2), (5, 7), (9, 5)],
        ];
        for c in cases {
            let t = Theta::from_ratios(c);
            let (rep, facets) = alcove_reduce(&t).unwrap();
            assert_eq!(facets, walls(&t), "case {:?} rep {:?}", c, rep);
            // the reduction is by the group, so the wall count is unchanged
            assert_eq!(walls(&rep), walls(&t));
        }
    }

    #[test]
    fn walls_invariant_under_affine_action() {
        // apply a few reflections s_{α,k} with integral k and permutations
        let t = Theta::from_ratios([(1, 5), (1, 3), (2, 5), (1, 2)]);
        let base = walls(&t);
        // translation by (1,1,0,0) (in the D4 lattice)
        let shifted = Theta::new([
            &t.0[0] + BigRational::one(),
            &t.0[1] + BigRational::one(),
            t.0[2].clone(),
            t.0[3].clone(),
        ]);
        assert_eq!(walls(&shifted), base);
        // sign flip of one coordinate (reflection in e_i)
        let flipped = Theta::new([-t.0[0].clone(), t.0[1].clone(), t.0[2].clone(), t.0[3].clone()]);
        assert_eq!(walls(&flipped), base);
        // coordinate permutation
        let perm = Theta::new([t.0[2].clone(), t.0[0].clone(), t.0[3].clone(), t.0[1].clone()]);
        assert_eq!(walls(&perm), base);
    }
}

//! Small dense matrices over a field scalar.  Group catalogs use 2×2 and
//! 3×3 matrices over number-field towers; the convolution lift briefly
//! works on 6×6 blocks; isomonodromy checks use 3×3 matrices whose entries
//! are function-field elements.

use crate::field::FieldScalar;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    pub n: usize,
    pub e: Vec<S>,
}

impl<S: FieldScalar + Hash> Hash for Matrix<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        for x in &self.e {
            x.hash(state);
        }
    }
}

impl<S: FieldScalar> Matrix<S> {
    pub fn new(n: usize, e: Vec<S>) -> Self {
        assert_eq!(e.len(), n * n);
        Matrix { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut e = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            e.extend(r);
        }
        Matrix { n, e }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![S::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = S::one();
        }
        Matrix { n, e }
    }

    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            e: vec![S::zero(); n * n],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.e[i * self.n + j] = v;
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.n {
            t = t + self.at(i, i).clone();
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            n: self.n,
            e: self.e.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn det(&self) -> S {
        match self.n {
            1 => self.at(0, 0).clone(),
            2 => {
                self.at(0, 0).clone() * self.at(1, 1).clone()
                    - self.at(0, 1).clone() * self.at(1, 0).clone()
            }
            3 => {
                let m = |i: usize, j: usize| self.at(i, j).clone();
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => self.det_gauss(),
        }
    }

    fn det_gauss(&self) -> S {
        let n = self.n;
        let mut m = self.e.clone();
        let mut det = S::one();
        for col in 0..n {
            let mut piv = None;
            for row in col..n {
                if !m[row * n + col].is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            let piv = match piv {
                None => return S::zero(),
                Some(p) => p,
            };
            if piv != col {
                for j in 0..n {
                    m.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let inv = m[col * n + col].clone().inv();
            det = det * m[col * n + col].clone();
            for row in col + 1..n {
                let factor = m[row * n + col].clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let delta = factor.clone() * m[col * n + j].clone();
                    m[row * n + j] = m[row * n + j].clone() - delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut m = self.e.clone();
        let mut inv = Matrix::<S>::identity(n).e;
        for col in 0..n {
            let mut piv = None;
            for row in col..n {
                if !m[row * n + col].is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            let piv = piv?;
            if piv != col {
                for j in 0..n {
                    m.swap(col * n + j, piv * n + j);
                    inv.swap(col * n + j, piv * n + j);
                }
            }
            let pinv = m[col * n + col].clone().try_inv()?;
            for j in 0..n {
                m[col * n + j] = m[col * n + j].clone() * pinv.clone();
                inv[col * n + j] = inv[col * n + j].clone() * pinv.clone();
            }
            for row in 0..n {
                if row == col || m[row * n + col].is_zero() {
                    continue;
                }
                let factor = m[row * n + col].clone();
                for j in 0..n {
                    let d1 = factor.clone() * m[col * n + j].clone();
                    m[row * n + j] = m[row * n + j].clone() - d1;
                    let d2 = factor.clone() * inv[col * n + j].clone();
                    inv[row * n + j] = inv[row * n + j].clone() - d2;
                }
            }
        }
        Some(Matrix { n, e: inv })
    }

    pub fn conj_by(&self, g: &Self) -> Self {
        let gi = g.inverse().expect("conjugator must be invertible");
        g.clone() * self.clone() * gi
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Matrix::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base.clone();
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    pub fn is_scalar(&self) -> Option<S> {
        let c = self.at(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    if *self.at(i, j) != c {
                        return None;
                    }
                } else if !self.at(i, j).is_zero() {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m = self.e.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let mut piv = None;
            for r in row..n {
                if !m[r * n + col].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            if piv != row {
                for j in 0..n {
                    m.swap(row * n + j, piv * n + j);
                }
            }
            let inv = m[row * n + col].clone().inv();
            for r in row + 1..n {
                let factor = m[r * n + col].clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let delta = factor.clone() * m[row * n + j].clone();
                    m[r * n + j] = m[r * n + j].clone() - delta;
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    /// Basis of the kernel (right null space).
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let n = self.n;
        let mut m = self.e.clone();
        // reduced row echelon
        let mut pivots: Vec<(usize, usize)> = vec![];
        let mut row = 0;
        for col in 0..n {
            let mut piv = None;
            for r in row..n {
                if !m[r * n + col].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            if piv != row {
                for j in 0..n {
                    m.swap(row * n + j, piv * n + j);
                }
            }
            let pinv = m[row * n + col].clone().inv();
            for j in 0..n {
                m[row * n + j] = m[row * n + j].clone() * pinv.clone();
            }
            for r in 0..n {
                if r == row || m[r * n + col].is_zero() {
                    continue;
                }
                let factor = m[r * n + col].clone();
                for j in 0..n {
                    let delta = factor.clone() * m[row * n + j].clone();
                    m[r * n + j] = m[r * n + j].clone() - delta;
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == n {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = vec![];
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); n];
            v[free] = S::one();
            for &(r, c) in &pivots {
                v[c] = -m[r * n + free].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        let n = self.n;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            for j in 0..n {
                out[i] = out[i].clone() + self.at(i, j).clone() * v[j].clone();
            }
        }
        out
    }

    /// True iff det(xI − M) = Π (x − root_i), compared through elementary
    /// symmetric functions (no root extraction anywhere).
    pub fn charpoly_is(&self, roots: &[S]) -> bool {
        assert_eq!(roots.len(), self.n);
        let e1: S = roots
            .iter()
            .fold(S::zero(), |acc, r| acc + r.clone());
        match self.n {
            2 => {
                let e2 = roots[0].clone() * roots[1].clone();
                self.trace() == e1 && self.det() == e2
            }
            3 => {
                let e2 = roots[0].clone() * roots[1].clone()
                    + roots[0].clone() * roots[2].clone()
                    + roots[1].clone() * roots[2].clone();
                let e3 = roots[0].clone() * roots[1].clone() * roots[2].clone();
                let m = |i: usize, j: usize| self.at(i, j).clone();
                let minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0))
                    + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0))
                    + (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
                self.trace() == e1 && minors == e2 && self.det() == e3
            }
            _ => unimplemented!("charpoly_is for n > 3"),
        }
    }
}

impl<S: FieldScalar> Add for Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            e: self
                .e
                .into_iter()
                .zip(rhs.e)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: FieldScalar> Sub for Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: FieldScalar> Neg for Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Self {
        Matrix {
            n: self.n,
            e: self.e.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<S: FieldScalar> Mul for Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::<S>::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl<S: FieldScalar + fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<S: FieldScalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{})", self.n, self.n)
    }
}

/// Commutator [A, B] = AB − BA.
pub fn commutator<S: FieldScalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.clone() * b.clone() - b.clone() * a.clone()
}

/// Right null space of a rectangular system given as rows.
pub fn nullspace_rows<S: FieldScalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let nrows = m.len();
    let mut pivots: Vec<(usize, usize)> = vec![];
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
        for c in 0..ncols {
            m[row][c] = m[row][c].clone() * pinv.clone();
        }
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..ncols {
                let delta = factor.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = vec![];
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A·x = b for square invertible A given as a Matrix.
pub fn solve_square<S: FieldScalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let inv = a.inverse()?;
    Some(inv.apply(b))
}

/// Solve a possibly overdetermined linear system given as rows; returns a
/// particular solution when consistent, `None` otherwise.
pub fn solve_consistent<S: FieldScalar>(
    rows: &[Vec<S>],
    rhs: &[S],
    ncols: usize,
) -> Option<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let nrows = m.len();
    let mut pivots: Vec<(usize, usize)> = vec![];
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
        for c in 0..=ncols {
            m[row][c] = m[row][c].clone() * pinv.clone();
        }
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..=ncols {
                let delta = factor.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }
    // consistency: no row of the form (0 … 0 | nonzero)
    for r in row..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![S::zero(); ncols];
    for &(r, c) in &pivots {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use num_rational::BigRational;

    #[test]
    fn charpoly_is_examples() {
        // diag(1,2,3) vs (1,2,3) and (1,1,3)
        let r = |v: i64| BigRational::from_integer(v.into());
        let d = Matrix::from_rows(vec![
            vec![r(1), r(0), r(0)],
            vec![r(0), r(2), r(0)],
            vec![r(0), r(0), r(3)],
        ]);
        assert!(d.charpoly_is(&[r(1), r(2), r(3)]));
        assert!(!d.charpoly_is(&[r(1), r(1), r(3)]));
    }

    #[test]
    fn charpoly_rotation_with_i() {
        // [[0,-1],[1,0]] has eigenvalues ±i in Q(ζ4)
        let i = ExactScalar::zeta(4);
        let m = Matrix::from_rows(vec![
            vec![ExactScalar::from_int(0), ExactScalar::from_int(-1)],
            vec![ExactScalar::from_int(1), ExactScalar::from_int(0)],
        ]);
        assert!(m.charpoly_is(&[i.clone(), -i.clone()]));
        // conjugation invariance
        let g = Matrix::from_rows(vec![
            vec![ExactScalar::from_int(1), ExactScalar::from_int(2)],
            vec![ExactScalar::from_int(0), ExactScalar::from_int(1)],
        ]);
        let mc = m.conj_by(&g);
        assert!(mc.charpoly_is(&[i.clone(), -i]));
    }

    #[test]
    fn inverse_and_kernel() {
        let r = |v: i64| BigRational::from_integer(v.into());
        let m = Matrix::from_rows(vec![
            vec![r(1), r(2), r(3)],
            vec![r(0), r(1), r(4)],
            vec![r(5), r(6), r(0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((m.clone() * inv).is_identity());
        let sing = Matrix::from_rows(vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(0), r(1)],
        ]);
        assert_eq!(sing.rank(), 2);
        let ker = sing.kernel();
        assert_eq!(ker.len(), 1);
        let img = sing.apply(&ker[0]);
        assert!(img.iter().all(|x| x.is_zero()));
    }
}

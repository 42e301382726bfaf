//! Linear algebra used by the solvers.
//!
//! Exact Gauss–Jordan elimination over any [`ExactField`], and a small
//! dense complex toolkit (Cholesky, inverse, cyclic Jacobi for Hermitian
//! matrices) for the spectral side.

use std::ops::{Index, IndexMut};

use crate::scalars::{Cx, ExactField, Scalar};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<K: ExactField>(m: &mut [Vec<K>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if !m[r][j].is_zero() {
                    let t = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: ExactField>(m: &[Vec<K>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution<K> {
    Unique(Vec<K>),
    /// A particular solution and the dimension of the solution space.
    Underdetermined(Vec<K>, usize),
    Inconsistent,
}

/// Solves `a x = b` exactly.
pub fn solve<K: ExactField>(a: &[Vec<K>], b: &[K]) -> Solution<K> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<K>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![K::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x, cols - pivots.len())
    }
}

/// Basis of `{x : a x = 0}`, one vector per free column with a 1 in that column.
pub fn nullspace<K: ExactField>(a: &[Vec<K>], cols: usize) -> Vec<Vec<K>> {
    let mut w = a.to_vec();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

/// Exact inverse of a square matrix, `None` if singular.
pub fn inverse<K: ExactField>(a: &[Vec<K>]) -> Option<Vec<Vec<K>>> {
    let n = a.len();
    let mut aug: Vec<Vec<K>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<K: Scalar>(a: &[Vec<K>], x: &[K]) -> Vec<K> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(r, v)| !r.is_zero() && !v.is_zero())
                .fold(K::zero(), |acc, (r, v)| acc + r.clone() * v.clone())
        })
        .collect()
}

pub fn mat_mul<K: Scalar>(a: &[Vec<K>], b: &[Vec<K>]) -> Vec<Vec<K>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][j].is_zero())
                        .fold(K::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

/// Exact positive-definiteness test for a Hermitian matrix over an ordered
/// field, via an LDL* factorisation: all pivots must be strictly positive.
/// `is_positive` decides the sign of a (necessarily real) pivot.
pub fn exact_positive_definite<K: ExactField>(
    a: &[Vec<K>],
    is_positive: impl Fn(&K) -> bool,
) -> bool {
    let n = a.len();
    let mut w = a.to_vec();
    for k in 0..n {
        let p = w[k][k].clone();
        if !is_positive(&p) {
            return false;
        }
        let pinv = p.inv().expect("positive pivot");
        for i in k + 1..n {
            if w[i][k].is_zero() {
                continue;
            }
            let f = w[i][k].clone() * pinv.clone();
            for j in k + 1..n {
                let t = w[i][j].clone() - f.clone() * w[k][j].clone();
                w[i][j] = t;
            }
        }
    }
    true
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Cx>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Cx;
    fn index(&self, (i, j): (usize, usize)) -> &Cx {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx {
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Cx::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Cx>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_exact<K: Scalar>(rows: &[Vec<K>]) -> Self {
        let cx: Vec<Vec<Cx>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_cx()).collect())
            .collect();
        Self::from_rows(&cx)
    }

    pub fn diagonal(values: &[Cx]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Cx> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..o.cols {
                    m[(i, j)] += a * o[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Cx]) -> Vec<Cx> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&o.data) {
            *a -= *b;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Gauss–Jordan with partial pivoting.
    pub fn inverse(&self) -> Option<CMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| a[(x, c)].norm().total_cmp(&a[(y, c)].norm()))?;
            if a[(p, c)].norm() <= 1e-14 * scale {
                return None;
            }
            for j in 0..n {
                a.data.swap(c * n + j, p * n + j);
                inv.data.swap(c * n + j, p * n + j);
            }
            let d = a[(c, c)].inv();
            for j in 0..n {
                a[(c, j)] *= d;
                inv[(c, j)] *= d;
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a[(i, c)];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(c, j)], inv[(c, j)]);
                    a[(i, j)] -= f * ac;
                    inv[(i, j)] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    /// Lower-triangular `L` with `self = L L*`; `None` unless positive definite.
    pub fn cholesky(&self) -> Option<CMatrix> {
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = Cx::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }
}

/// Eigen-decomposition `H = V diag(values) V*` of a Hermitian matrix by
/// cyclic complex Jacobi rotations. Values are sorted ascending; `vectors`
/// holds the orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn hermitian_eigen(h: &CMatrix) -> HermitianEigen {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut a = h.clone();
    // symmetrise away rounding noise
    for i in 0..n {
        a[(i, i)] = Cx::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                // phase to make the (p,q) entry real, then a real rotation
                let e = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U acts on columns p, q: U = D R with D = diag(1, conj(e)),
                // R = [[c, s], [-s, c]].
                let upp = Cx::new(c, 0.0);
                let upq = Cx::new(s, 0.0);
                let uqp = -e.conj() * s;
                let uqq = e.conj() * c;
                // A <- A U
                for i in 0..n {
                    let (aip, aiq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = aip * upp + aiq * uqp;
                    a[(i, q)] = aip * upq + aiq * uqq;
                }
                // A <- U* A
                for j in 0..n {
                    let (apj, aqj) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = upp.conj() * apj + uqp.conj() * aqj;
                    a[(q, j)] = upq.conj() * apj + uqq.conj() * aqj;
                }
                a[(p, q)] = Cx::new(0.0, 0.0);
                a[(q, p)] = Cx::new(0.0, 0.0);
                a[(p, p)] = Cx::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Cx::new(a[(q, q)].re, 0.0);
                for i in 0..n {
                    let (vip, viq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = vip * upp + viq * uqp;
                    v[(i, q)] = vip * upq + viq * uqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new)] = v[(i, old)];
        }
    }
    HermitianEigen { values, vectors }
}

/// Smallest eigenvalue of a Hermitian matrix (`+∞` for the empty matrix).
pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    hermitian_eigen(h)
        .values
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Rational, QI};

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn rank_and_solve_exact() {
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert_eq!(rank(&a), 1);
        assert_eq!(solve(&a, &[r(1), r(3)]), Solution::Inconsistent);
        match solve(&a, &[r(1), r(2)]) {
            Solution::Underdetermined(x, 1) => assert_eq!(x, vec![r(1), r(0)]),
            other => panic!("{other:?}"),
        }
        let b = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        assert_eq!(solve(&b, &[r(3), r(4)]), Solution::Unique(vec![r(1), r(1)]));
    }

    #[test]
    fn nullspace_basis() {
        let a = vec![vec![r(1), r(1), r(0)], vec![r(0), r(0), r(1)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns, vec![vec![r(-1), r(1), r(0)]]);
    }

    #[test]
    fn exact_inverse() {
        let a = vec![
            vec![QI::int(1), QI::new(rat(0, 1), rat(1, 1))],
            vec![QI::int(0), QI::int(2)],
        ];
        let inv = inverse(&a).unwrap();
        let id = mat_mul(&a, &inv);
        assert_eq!(id[0][0], QI::int(1));
        assert_eq!(id[0][1], QI::int(0));
        assert!(inverse(&[vec![r(1), r(1)], vec![r(1), r(1)]]).is_none());
    }

    #[test]
    fn exact_pd() {
        let pos = |x: &Rational| *x > r(0);
        assert!(exact_positive_definite(
            &[vec![r(2), r(1)], vec![r(1), r(2)]],
            pos
        ));
        assert!(!exact_positive_definite(
            &[vec![r(1), r(2)], vec![r(2), r(1)]],
            pos
        ));
    }

    #[test]
    fn jacobi_hermitian() {
        let h = CMatrix::from_rows(&[
            vec![Cx::new(2.0, 0.0), Cx::new(0.0, 1.0), Cx::new(0.5, 0.5)],
            vec![Cx::new(0.0, -1.0), Cx::new(3.0, 0.0), Cx::new(0.0, 0.0)],
            vec![Cx::new(0.5, -0.5), Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)],
        ]);
        let e = hermitian_eigen(&h);
        let d = CMatrix::diagonal(
            &e.values
                .iter()
                .map(|&x| Cx::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        let back = e.vectors.mul(&d).mul(&e.vectors.adjoint());
        assert!(back.sub(&h).max_abs() < 1e-12);
        let vv = e.vectors.adjoint().mul(&e.vectors);
        assert!(vv.sub(&CMatrix::identity(3)).max_abs() < 1e-12);
        // trace check
        let tr: f64 = e.values.iter().sum();
        assert!((tr - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_and_inverse() {
        let h = CMatrix::from_rows(&[
            vec![Cx::new(4.0, 0.0), Cx::new(1.0, 1.0)],
            vec![Cx::new(1.0, -1.0), Cx::new(3.0, 0.0)],
        ]);
        let l = h.cholesky().unwrap();
        assert!(l.mul(&l.adjoint()).sub(&h).max_abs() < 1e-12);
        let inv = h.inverse().unwrap();
        assert!(inv.mul(&h).sub(&CMatrix::identity(2)).max_abs() < 1e-12);
        let indefinite = CMatrix::from_rows(&[
            vec![Cx::new(1.0, 0.0), Cx::new(2.0, 0.0)],
            vec![Cx::new(2.0, 0.0), Cx::new(1.0, 0.0)],
        ]);
        assert!(indefinite.cholesky().is_none());
        assert!((min_eigenvalue(&indefinite) + 1.0).abs() < 1e-12);
    }
}

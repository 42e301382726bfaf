//! Analytic one-parameter groups and analytic unitary representations.
//!
//! A group is stored by an eigenbasis with strictly positive eigenvalues
//! `v_k`; it acts as `α_z = ⊕ v_k^{iz}`, so `α_{-i}` multiplies each
//! eigenvector by its eigenvalue. The generator handed to the constructors is
//! therefore always the value at `-i` (`ρ`, `S²`, ...).

use thiserror::Error;

use crate::linalg::{hermitian_eigen, CMatrix};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{positive_power, scaled_residual, Cx, ToleranceCfg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OneParamError {
    #[error("generator is not self-adjoint for the Gram inner product (defect {0:e})")]
    NotSelfAdjoint(f64),
    #[error("operator is not positive: {0}")]
    NotPositive(String),
    #[error("Gram matrix is not positive definite")]
    GramNotPositive,
    #[error("eigenbasis is singular")]
    Singular,
    #[error("not relatively invariant: {0}")]
    NotRelativelyInvariant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, OneParamError>;

const ZERO: Cx = Cx::new(0.0, 0.0);
const I: Cx = Cx::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Identity,
    Diagonal,
    General,
}

#[derive(Clone, Debug)]
pub struct SpectralGroup {
    /// `(basis of the eigenspace, eigenvalue)`, eigenvalues strictly positive.
    pub eigenspaces: Vec<(Vec<Vec<Cx>>, f64)>,
    pub ambient_dim: usize,
    /// `λ` with `φα_t = λ^t φ`; 1 until set from [`compute_lambda`].
    pub scale_lambda: f64,
    shape: Shape,
    values: Vec<f64>,
    vectors: CMatrix,
    inverse: CMatrix,
}

fn group_eigenspaces(vectors: &CMatrix, values: &[f64]) -> Vec<(Vec<Vec<Cx>>, f64)> {
    let mut out: Vec<(Vec<Vec<Cx>>, f64)> = Vec::new();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for k in order {
        let v = values[k];
        match out.last_mut() {
            Some((basis, w)) if (v - *w).abs() <= 1e-12 * w.abs().max(1.0) => {
                basis.push(vectors.column(k))
            }
            _ => out.push((vec![vectors.column(k)], v)),
        }
    }
    out
}

impl SpectralGroup {
    pub fn identity(n: usize) -> Self {
        Self::build(
            Shape::Identity,
            vec![1.0; n],
            CMatrix::identity(n),
            CMatrix::identity(n),
        )
    }

    /// A group diagonal in the coordinate basis.
    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(OneParamError::NotPositive(format!("eigenvalue {v}")));
        }
        let n = values.len();
        Ok(Self::build(
            Shape::Diagonal,
            values,
            CMatrix::identity(n),
            CMatrix::identity(n),
        ))
    }

    /// A group from explicit eigenvectors (columns of `vectors`) and eigenvalues.
    pub fn from_eigenpairs(vectors: CMatrix, values: Vec<f64>) -> Result<Self> {
        if vectors.rows != vectors.cols || vectors.cols != values.len() {
            return Err(OneParamError::Dimension {
                expected: vectors.rows,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(OneParamError::NotPositive(format!("eigenvalue {v}")));
        }
        let inverse = vectors.inverse().ok_or(OneParamError::Singular)?;
        Ok(Self::build(Shape::General, values, vectors, inverse))
    }

    /// The group with `α_{-i} = m`, for `m` self-adjoint and positive with
    /// respect to `⟨x, y⟩ = y* K x`.
    pub fn from_generator(m: &CMatrix, gram: &CMatrix, cfg: &ToleranceCfg) -> Result<Self> {
        let n = m.rows;
        if m.cols != n || gram.rows != n || gram.cols != n {
            return Err(OneParamError::Dimension {
                expected: n,
                got: gram.rows,
            });
        }
        let l = gram.cholesky().ok_or(OneParamError::GramNotPositive)?;
        let lh = l.adjoint();
        let lh_inv = lh.inverse().ok_or(OneParamError::GramNotPositive)?;
        let h = lh.mul(m).mul(&lh_inv);
        let defect = h.hermitian_defect();
        if defect > cfg.abs_tol * h.max_abs().max(1.0) {
            return Err(OneParamError::NotSelfAdjoint(defect));
        }
        let eig = hermitian_eigen(&h);
        if let Some(v) = eig.values.iter().find(|v| !(**v > 0.0)) {
            return Err(OneParamError::NotPositive(format!("eigenvalue {v:e}")));
        }
        let vectors = lh_inv.mul(&eig.vectors);
        let inverse = eig.vectors.adjoint().mul(&lh);
        Ok(Self::build(Shape::General, eig.values, vectors, inverse))
    }

    /// Rebuilds a group from its value at `i` (which is `α_{-i}^{-1}`).
    pub fn from_value_at_i(m_i: &CMatrix, gram: &CMatrix, cfg: &ToleranceCfg) -> Result<Self> {
        let g = Self::from_generator(m_i, gram, cfg)?;
        let values = g.values.iter().map(|v| 1.0 / v).collect();
        Ok(Self::build(Shape::General, values, g.vectors, g.inverse))
    }

    fn build(shape: Shape, values: Vec<f64>, vectors: CMatrix, inverse: CMatrix) -> Self {
        SpectralGroup {
            eigenspaces: group_eigenspaces(&vectors, &values),
            ambient_dim: values.len(),
            scale_lambda: 1.0,
            shape,
            values,
            vectors,
            inverse,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.scale_lambda = lambda;
        self
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// `α_z` applied to a coordinate vector.
    pub fn apply(&self, z: Cx, x: &[Cx]) -> Vec<Cx> {
        match self.shape {
            Shape::Identity => x.to_vec(),
            Shape::Diagonal => x
                .iter()
                .zip(&self.values)
                .map(|(c, v)| {
                    if *c == ZERO {
                        ZERO
                    } else {
                        c * positive_power(*v, I * z)
                    }
                })
                .collect(),
            Shape::General => {
                let mut y = self.inverse.mul_vec(x);
                for (c, v) in y.iter_mut().zip(&self.values) {
                    *c *= positive_power(*v, I * z);
                }
                self.vectors.mul_vec(&y)
            }
        }
    }

    /// `α_z` as a matrix.
    pub fn matrix(&self, z: Cx) -> CMatrix {
        let n = self.ambient_dim;
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = Cx::new(1.0, 0.0);
            for (i, v) in self.apply(z, &e).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// `α_z(a)`.
pub fn evaluate_group(g: &SpectralGroup, z: Cx, a: &[Cx]) -> Vec<Cx> {
    g.apply(z, a)
}

/// A *-algebra in coordinates, possibly a truncation where some products
/// leave the coordinate space.
pub trait CoordAlgebra: Sync {
    fn dim(&self) -> usize;
    fn label(&self, i: usize) -> String;
    fn star(&self, x: &[Cx]) -> Vec<Cx>;
    /// `e_i e_j`, or `None` if it is not inside the coordinate space.
    fn mul_basis(&self, i: usize, j: usize) -> Option<Vec<Cx>>;

    fn mul(&self, x: &[Cx], y: &[Cx]) -> Option<Vec<Cx>> {
        let mut out = vec![ZERO; self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| **v != ZERO) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| **v != ZERO) {
                let p = self.mul_basis(i, j)?;
                for (o, v) in out.iter_mut().zip(p) {
                    *o += xi * yj * v;
                }
            }
        }
        Some(out)
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Vec<Cx> {
    let mut e = vec![ZERO; n];
    e[i] = Cx::new(1.0, 0.0);
    e
}

fn fmt_z(z: Cx) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Group law, inverse, star compatibility and multiplicativity on a grid.
pub fn check_group_laws(
    g: &SpectralGroup,
    inst: &dyn CoordAlgebra,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Report {
    let n = inst.dim();
    let mut r = Report::new("group_laws");
    let e = |i| unit_vector(n, i);

    let mut w = Worst::new();
    for i in 0..n {
        w.record(scaled_residual(&g.apply(ZERO, &e(i)), &e(i)), || {
            inst.label(i)
        });
    }
    r.push(w.within("alpha_zero", "α_0 = ι", cfg.abs_tol));

    let mut w = Worst::new();
    for &y in z_grid {
        for &z in z_grid {
            for i in 0..n {
                let lhs = g.apply(y + z, &e(i));
                let rhs = g.apply(y, &g.apply(z, &e(i)));
                w.record(scaled_residual(&lhs, &rhs), || {
                    format!("y={}, z={}, a={}", fmt_z(y), fmt_z(z), inst.label(i))
                });
            }
        }
    }
    r.push(w.within("group_law", "α_{y+z} = α_y α_z", cfg.abs_tol));

    let mut w = Worst::new();
    for &z in z_grid {
        for i in 0..n {
            let back = g.apply(z, &g.apply(-z, &e(i)));
            w.record(scaled_residual(&back, &e(i)), || {
                format!("z={}, a={}", fmt_z(z), inst.label(i))
            });
        }
    }
    r.push(w.within("inverse", "α_z α_{-z} = ι", cfg.abs_tol));

    let mut w = Worst::new();
    for &z in z_grid {
        for i in 0..n {
            let lhs = inst.star(&g.apply(z, &e(i)));
            let rhs = g.apply(z.conj(), &inst.star(&e(i)));
            w.record(scaled_residual(&lhs, &rhs), || {
                format!("z={}, a={}", fmt_z(z), inst.label(i))
            });
        }
    }
    r.push(w.within("star_law", "α_z(a)* = α_{z̄}(a*)", cfg.abs_tol));

    let mut w = Worst::new();
    let mut pairs = 0usize;
    for i in 0..n {
        for j in 0..n {
            let Some(prod) = inst.mul_basis(i, j) else {
                continue;
            };
            for &z in z_grid {
                let Some(rhs) = inst.mul(&g.apply(z, &e(i)), &g.apply(z, &e(j))) else {
                    continue;
                };
                pairs += 1;
                let lhs = g.apply(z, &prod);
                w.record(scaled_residual(&lhs, &rhs), || {
                    format!(
                        "z={}, (a, b)=({}, {})",
                        fmt_z(z),
                        inst.label(i),
                        inst.label(j)
                    )
                });
            }
        }
    }
    r.push(w.within("multiplicative", "α_z(ab) = α_z(a)α_z(b)", cfg.abs_tol));
    r.note("multiplicative_samples", pairs.to_string());
    r
}

#[derive(Clone, Debug)]
pub struct LambdaOutcome {
    pub lambda: f64,
    pub report: Report,
}

/// `λ` from `φ(α_1(a)) = λ φ(a)`, asserted constant over the basis, then
/// `φα_z = λ^z φ` checked on the grid. `phi` is a covector.
pub fn compute_lambda(
    g: &SpectralGroup,
    phi: &[Cx],
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Result<LambdaOutcome> {
    let n = g.ambient_dim;
    if phi.len() != n {
        return Err(OneParamError::Dimension {
            expected: n,
            got: phi.len(),
        });
    }
    let eval = |x: &[Cx]| -> Cx { phi.iter().zip(x).map(|(a, b)| a * b).sum() };
    let one = Cx::new(1.0, 0.0);
    let mut ratios = Vec::new();
    for i in 0..n {
        let e = unit_vector(n, i);
        let base = eval(&e);
        if base.norm() > cfg.abs_tol {
            ratios.push((i, eval(&g.apply(one, &e)) / base));
        }
    }
    let Some(&(_, first)) = ratios.first() else {
        return Err(OneParamError::NotRelativelyInvariant(
            "φ vanishes on the basis".into(),
        ));
    };
    if first.im.abs() > cfg.abs_tol * first.norm().max(1.0) || !(first.re > 0.0) {
        return Err(OneParamError::NotRelativelyInvariant(format!(
            "φ(α_1(a))/φ(a) = {first} is not a positive real"
        )));
    }
    if let Some((i, r)) = ratios
        .iter()
        .find(|(_, r)| (r - first).norm() > cfg.abs_tol * first.norm().max(1.0))
    {
        return Err(OneParamError::NotRelativelyInvariant(format!(
            "ratio {r} on basis vector {i} differs from {first}"
        )));
    }
    let lambda = first.re;
    let mut report = Report::new("relative_invariance");
    let mut w = Worst::new();
    for &z in z_grid {
        let lz = positive_power(lambda, z);
        for i in 0..n {
            let e = unit_vector(n, i);
            let lhs = eval(&g.apply(z, &e));
            let rhs = lz * eval(&e);
            w.record(scaled_residual(&[lhs], &[rhs]), || {
                format!("z={}, basis {i}", fmt_z(z))
            });
        }
    }
    report.push(w.within("relative_invariance", "φ(α_z(a)) = λ^z φ(a)", cfg.abs_tol));
    report.note("lambda", format!("{lambda:.16e}"));
    Ok(LambdaOutcome { lambda, report })
}

fn g_norm(gram: &CMatrix, x: &[Cx]) -> f64 {
    let kx = gram.mul_vec(x);
    x.iter()
        .zip(&kx)
        .map(|(a, b)| a.conj() * b)
        .sum::<Cx>()
        .re
        .max(0.0)
        .sqrt()
}

/// The operator `P` with `P^{iz}Λ(a) = λ^{-z/2}Λ(α_z(a))`, built as a
/// `G`-positive operator from `λ^{i/2} α_{-i}` and diagonalised independently
/// of `g`'s stored eigenbasis.
pub fn p_operator_check(
    g: &SpectralGroup,
    lambda: f64,
    gram: &CMatrix,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Result<Report> {
    let n = g.ambient_dim;
    let pre = positive_power(lambda, I * 0.5);
    let mut p = g.matrix(-I);
    for i in 0..n {
        for j in 0..n {
            p[(i, j)] *= pre;
        }
    }
    let pg = SpectralGroup::from_generator(&p, gram, cfg).map_err(|e| match e {
        OneParamError::NotSelfAdjoint(d) => {
            OneParamError::NotPositive(format!("P is not G-self-adjoint (defect {d:e})"))
        }
        other => other,
    })?;
    let mut r = Report::new("p_operator");
    let mut w = Worst::new();
    for &z in z_grid {
        let lz = positive_power(lambda, -z * 0.5);
        for a in 0..n {
            let e = unit_vector(n, a);
            let lhs = pg.apply(z, &e);
            let rhs: Vec<Cx> = g.apply(z, &e).into_iter().map(|v| v * lz).collect();
            let diff: Vec<Cx> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
            let scale = g_norm(gram, &lhs).max(g_norm(gram, &rhs)).max(1.0);
            w.record(g_norm(gram, &diff) / scale, || {
                format!("z={}, basis {a}", fmt_z(z))
            });
        }
    }
    r.push(w.within(
        "p_operator_law",
        "P^{iz}Λ(a) = λ^{-z/2}Λ(α_z(a))",
        cfg.abs_tol,
    ));

    let mut w = Worst::new();
    for &z in z_grid.iter().filter(|z| z.im == 0.0) {
        let u = pg.matrix(z);
        let lhs = u.adjoint().mul(gram).mul(&u);
        let res = lhs.sub(gram).max_abs() / gram.max_abs().max(1.0);
        w.record(res, || format!("t={}", z.re));
    }
    r.push(w.within("p_unitary", "P^{it} is unitary for ⟨·,·⟩_G", cfg.abs_tol));
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct UniquenessOutcome {
    pub agree_at_i: bool,
    /// Basis index where `α_i` and `β_i` differ most, if they differ.
    pub witness: Option<usize>,
    pub report: Report,
}

/// If `α_i = β_i` then `α = β`: compares at `i`, and if they agree there,
/// on the whole grid.
pub fn uniqueness_check(
    g1: &SpectralGroup,
    g2: &SpectralGroup,
    labels: &dyn Fn(usize) -> String,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> UniquenessOutcome {
    let n = g1.ambient_dim;
    let mut report = Report::new("uniqueness");
    let mut at_i = Worst::new();
    let mut worst_idx = None;
    for k in 0..n {
        let e = unit_vector(n, k);
        let res = scaled_residual(&g1.apply(I, &e), &g2.apply(I, &e));
        if res > at_i.residual {
            worst_idx = Some(k);
        }
        at_i.record(res, || labels(k));
    }
    let agree = at_i.residual <= cfg.abs_tol;
    if agree {
        report.push(at_i.within("value_at_i", "α_i = β_i", cfg.abs_tol));
        let mut w = Worst::new();
        for &z in z_grid {
            for k in 0..n {
                let e = unit_vector(n, k);
                w.record(scaled_residual(&g1.apply(z, &e), &g2.apply(z, &e)), || {
                    format!("z={}, a={}", fmt_z(z), labels(k))
                });
            }
        }
        report.push(w.within("agree_on_grid", "α_z = β_z", cfg.abs_tol));
        worst_idx = None;
    } else {
        let mut e = Entry::info(
            "value_at_i_differs",
            "α_i ≠ β_i (premise fails)",
            at_i.residual,
        );
        e.witness = at_i.witness;
        report.push(e);
    }
    UniquenessOutcome {
        agree_at_i: agree,
        witness: worst_idx,
        report,
    }
}

/// An analytic unitary representation `z ↦ u_z` with values in some *-algebra.
pub trait UnitaryRep: Sync {
    type Value: Clone;
    fn at(&self, z: Cx) -> Self::Value;
    fn mul(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn star(&self, x: &Self::Value) -> Self::Value;
    fn unit(&self) -> Self::Value;
    fn distance(&self, x: &Self::Value, y: &Self::Value) -> f64;
}

/// `u_0 = 1`, `u_z* = u_{-z̄}`, `u_{y+z} = u_y u_z`, `u_z u_{-z} = 1`, `u_t` unitary.
pub fn unitary_rep_check<U: UnitaryRep + ?Sized>(
    u: &U,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Report {
    let mut r = Report::new("unitary_rep");
    let one = u.unit();
    r.push(Entry::within(
        "u_zero",
        "u_0 = 1",
        u.distance(&u.at(ZERO), &one),
        cfg.abs_tol,
    ));

    let mut w = Worst::new();
    for &z in z_grid {
        w.record(u.distance(&u.star(&u.at(z)), &u.at(-z.conj())), || fmt_z(z));
    }
    r.push(w.within("u_star", "u_z* = u_{-z̄}", cfg.abs_tol));

    let mut w = Worst::new();
    for &y in z_grid {
        for &z in z_grid {
            w.record(u.distance(&u.at(y + z), &u.mul(&u.at(y), &u.at(z))), || {
                format!("y={}, z={}", fmt_z(y), fmt_z(z))
            });
        }
    }
    r.push(w.within("u_group_law", "u_{y+z} = u_y u_z", cfg.abs_tol));

    let mut w = Worst::new();
    for &z in z_grid {
        w.record(u.distance(&u.mul(&u.at(z), &u.at(-z)), &one), || fmt_z(z));
    }
    r.push(w.within("u_inverse", "u_z u_{-z} = 1", cfg.abs_tol));

    let mut w = Worst::new();
    for &t in z_grid.iter().filter(|z| z.im == 0.0) {
        let ut = u.at(t);
        let a = u.distance(&u.mul(&u.star(&ut), &ut), &one);
        let b = u.distance(&u.mul(&ut, &u.star(&ut)), &one);
        w.record(a.max(b), || format!("t={}", t.re));
    }
    r.push(w.within(
        "u_unitary",
        "u_t* u_t = u_t u_t* = 1 for real t",
        cfg.abs_tol,
    ));
    r
}

/// The default grid `{0, 1, -1, i, -i, -i/2, 1/2 + i/3, 2i}`.
pub fn default_z_grid() -> Vec<Cx> {
    vec![
        Cx::new(0.0, 0.0),
        Cx::new(1.0, 0.0),
        Cx::new(-1.0, 0.0),
        Cx::new(0.0, 1.0),
        Cx::new(0.0, -1.0),
        Cx::new(0.0, -0.5),
        Cx::new(0.5, 1.0 / 3.0),
        Cx::new(0.0, 2.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    /// Commutative 2-dim algebra C², coordinatewise product, conjugation star.
    struct Diag2;
    impl CoordAlgebra for Diag2 {
        fn dim(&self) -> usize {
            2
        }
        fn label(&self, i: usize) -> String {
            format!("p{i}")
        }
        fn star(&self, x: &[Cx]) -> Vec<Cx> {
            x.iter().map(|v| v.conj()).collect()
        }
        fn mul_basis(&self, i: usize, j: usize) -> Option<Vec<Cx>> {
            Some(if i == j {
                unit_vector(2, i)
            } else {
                vec![ZERO; 2]
            })
        }
    }

    #[test]
    fn zero_is_identity() {
        let g = SpectralGroup::diagonal(vec![3.0, 0.25]).unwrap();
        let x = vec![cx(1.0, 2.0), cx(-0.5, 0.0)];
        assert_eq!(evaluate_group(&g, ZERO, &x), x);
    }

    #[test]
    fn value_at_minus_i_is_eigenvalue() {
        let g = SpectralGroup::diagonal(vec![4.0]).unwrap();
        let v = evaluate_group(&g, -I, &[cx(1.0, 0.0)]);
        assert!((v[0] - cx(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_eigenvalues() {
        assert!(SpectralGroup::diagonal(vec![1.0, 0.0]).is_err());
        assert!(SpectralGroup::diagonal(vec![-2.0]).is_err());
    }

    #[test]
    fn generator_round_trip_non_diagonal() {
        // M = [[2,1],[1,2]] is self-adjoint for K = I with eigenvalues 1, 3.
        let m = CMatrix::from_rows(&[
            vec![cx(2.0, 0.0), cx(1.0, 0.0)],
            vec![cx(1.0, 0.0), cx(2.0, 0.0)],
        ]);
        let k = CMatrix::identity(2);
        let cfg = ToleranceCfg::default();
        let g = SpectralGroup::from_generator(&m, &k, &cfg).unwrap();
        assert!(g.matrix(-I).sub(&m).max_abs() < 1e-12);
        let m2 = m.mul(&m);
        assert!(g.matrix(-2.0 * I).sub(&m2).max_abs() < 1e-12);
        assert_eq!(g.eigenspaces.len(), 2);
        let mi = g.matrix(I);
        let h = SpectralGroup::from_value_at_i(&mi, &k, &cfg).unwrap();
        for z in default_z_grid() {
            assert!(h.matrix(z).sub(&g.matrix(z)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn generator_must_be_self_adjoint() {
        let m = CMatrix::from_rows(&[
            vec![cx(1.0, 0.0), cx(1.0, 0.0)],
            vec![cx(0.0, 0.0), cx(1.0, 0.0)],
        ]);
        let r = SpectralGroup::from_generator(&m, &CMatrix::identity(2), &ToleranceCfg::default());
        assert!(matches!(r, Err(OneParamError::NotSelfAdjoint(_))));
    }

    #[test]
    fn identity_group_laws_are_exact() {
        let g = SpectralGroup::identity(2);
        let r = check_group_laws(&g, &Diag2, &default_z_grid(), &ToleranceCfg::default());
        assert!(r.pass());
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn diagonal_group_on_commutative_algebra() {
        let g = SpectralGroup::diagonal(vec![2.0, 0.5]).unwrap();
        let r = check_group_laws(&g, &Diag2, &default_z_grid(), &ToleranceCfg::default());
        // Scaling idempotents by distinct factors is a group of linear maps,
        // but p² = p forces v^{iz} = v^{2iz}, so it is not multiplicative.
        assert!(r.get("group_law").unwrap().pass);
        assert!(r.get("inverse").unwrap().pass);
        assert!(!r.get("multiplicative").unwrap().pass);
        assert!(!r.get("star_law").unwrap().pass);
    }

    #[test]
    fn lambda_is_one_on_unit_eigenline() {
        let g = SpectralGroup::diagonal(vec![1.0, 4.0]).unwrap();
        let phi = vec![cx(1.0, 0.0), ZERO];
        let out = compute_lambda(&g, &phi, &default_z_grid(), &ToleranceCfg::default()).unwrap();
        assert_eq!(out.lambda, 1.0);
        assert!(out.report.pass());
    }

    #[test]
    fn lambda_rejects_eigenvalue_two_line() {
        // φ(α_1(v)) / φ(v) = 2^i, not a positive real.
        let g = SpectralGroup::diagonal(vec![2.0, 1.0]).unwrap();
        let phi = vec![cx(1.0, 0.0), ZERO];
        let err = compute_lambda(&g, &phi, &default_z_grid(), &ToleranceCfg::default());
        assert!(matches!(err, Err(OneParamError::NotRelativelyInvariant(_))));
    }

    #[test]
    fn lambda_rejects_non_constant_ratio() {
        let g = SpectralGroup::diagonal(vec![1.0, 2.0]).unwrap();
        let phi = vec![cx(1.0, 0.0), cx(1.0, 0.0)];
        assert!(compute_lambda(&g, &phi, &default_z_grid(), &ToleranceCfg::default()).is_err());
    }

    #[test]
    fn p_operator_identity() {
        let g = SpectralGroup::identity(3);
        let r = p_operator_check(
            &g,
            1.0,
            &CMatrix::identity(3),
            &default_z_grid(),
            &ToleranceCfg::default(),
        )
        .unwrap();
        assert!(r.pass());
        assert!(r.max_residual() < 1e-15);
    }

    #[test]
    fn p_operator_eigenvalue_four() {
        let g = SpectralGroup::diagonal(vec![4.0, 1.0]).unwrap();
        let k = CMatrix::diagonal(&[cx(2.0, 0.0), cx(0.5, 0.0)]);
        let r = p_operator_check(&g, 1.0, &k, &default_z_grid(), &ToleranceCfg::default()).unwrap();
        assert!(r.pass(), "{r}");
        // P^1 Λ(v) at z = -i equals α_{-i}(v) = 4v
        let v = evaluate_group(&g, -I, &unit_vector(2, 0));
        assert!((v[0] - cx(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn p_operator_rejects_lambda_not_one() {
        let g = SpectralGroup::identity(2);
        assert!(p_operator_check(
            &g,
            2.0,
            &CMatrix::identity(2),
            &default_z_grid(),
            &ToleranceCfg::default()
        )
        .is_err());
    }

    #[test]
    fn uniqueness_detects_difference() {
        let g1 = SpectralGroup::diagonal(vec![1.0, 2.0]).unwrap();
        let g2 = SpectralGroup::diagonal(vec![1.0, 3.0]).unwrap();
        let label = |i: usize| format!("e{i}");
        let out = uniqueness_check(
            &g1,
            &g2,
            &label,
            &default_z_grid(),
            &ToleranceCfg::default(),
        );
        assert!(!out.agree_at_i);
        assert_eq!(out.witness, Some(1));
        let same = uniqueness_check(
            &g1,
            &g1.clone(),
            &label,
            &default_z_grid(),
            &ToleranceCfg::default(),
        );
        assert!(same.agree_at_i && same.report.pass());
    }

    struct Scalars(f64);
    impl UnitaryRep for Scalars {
        type Value = Cx;
        fn at(&self, z: Cx) -> Cx {
            positive_power(self.0, I * z)
        }
        fn mul(&self, x: &Cx, y: &Cx) -> Cx {
            x * y
        }
        fn star(&self, x: &Cx) -> Cx {
            x.conj()
        }
        fn unit(&self) -> Cx {
            cx(1.0, 0.0)
        }
        fn distance(&self, x: &Cx, y: &Cx) -> f64 {
            crate::scalars::scaled_diff(*x, *y)
        }
    }

    #[test]
    fn positive_scalar_powers_form_unitary_rep() {
        let r = unitary_rep_check(&Scalars(3.0), &default_z_grid(), &ToleranceCfg::default());
        assert!(r.pass(), "{r}");
    }

    proptest! {
        #[test]
        fn spectral_powers_compose(v in 0.05f64..20.0, yr in -2.0f64..2.0, yi in -2.0f64..2.0,
                                   zr in -2.0f64..2.0, zi in -2.0f64..2.0) {
            let g = SpectralGroup::diagonal(vec![v]).unwrap();
            let (y, z) = (cx(yr, yi), cx(zr, zi));
            let e = unit_vector(1, 0);
            let lhs = g.apply(y + z, &e);
            let rhs = g.apply(y, &g.apply(z, &e));
            prop_assert!(scaled_residual(&lhs, &rhs) < 1e-9);
        }

        #[test]
        fn relative_invariance_for_accepted_groups(v in 0.1f64..10.0, c in 0.1f64..5.0) {
            // φ supported on the unit eigenline: always accepted with λ = 1.
            let g = SpectralGroup::diagonal(vec![1.0, v]).unwrap();
            let phi = vec![cx(c, 0.0), ZERO];
            let out = compute_lambda(&g, &phi, &default_z_grid(), &ToleranceCfg::default()).unwrap();
            prop_assert!(out.report.pass());
        }
    }
}

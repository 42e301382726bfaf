//! Finite-dimensional Hopf *-algebras given by structure constants.
//!
//! Everything here runs in exact Gaussian-rational arithmetic except the
//! spectral pieces (Gram eigenvalues, complex powers of ∇), which use `Cx`.

mod bundled;
mod dual;
mod gns;
mod modular;
mod solve;
mod structure;
mod suites;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalars::{Cx, Scalar, ToleranceCfg, QI};

pub use bundled::{
    bundled, function_algebra, group_algebra, kac_paljutkin, BundledInstance, FiniteGroup,
};
pub use dual::{bidual_check, dual_report, dualize, DualSpec};
pub(crate) use dual::{convolve, dual_star_cov};
pub use gns::{gns_build, gns_report, DeltaRep, GnsData};
pub(crate) use modular::scaling_group;
pub use modular::{derive_modular_data, modular_report, ModularData};
pub use solve::{
    antipode_report, solve_antipode, solve_counit, solve_haar, strong_invariance_report, Haar,
};
pub use structure::validate_structure;
pub use suites::{identity_report, oneparam_report};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FinqgError {
    #[error("malformed structure table: {0}")]
    Malformed(String),
    #[error("not a multiplier Hopf algebra: {0}")]
    NotHopf(String),
    #[error("antipode does not exist: {0}")]
    NoAntipode(String),
    #[error("no or ambiguous Haar functional: invariant functionals form a {0}-dimensional space")]
    HaarDimension(usize),
    #[error("Haar functional not positive (min Gram eigenvalue {0:e})")]
    HaarNotPositive(f64),
    #[error("Haar functional vanishes on the unit; cannot normalise")]
    HaarUnnormalisable,
    #[error("modular data: {0}")]
    Modular(String),
    #[error("modular automorphism not positive - phi not a positive faithful functional: {0}")]
    NablaNotPositive(String),
}

pub type Result<T> = std::result::Result<T, FinqgError>;

/// Sparse element of `A`: basis index → coefficient, zeros never stored.
#[derive(Clone, PartialEq, Default)]
pub struct Element {
    coeffs: BTreeMap<usize, QI>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut e = Element::zero();
        e.coeffs.insert(i, QI::one());
        e
    }

    pub fn from_dense(v: &[QI]) -> Self {
        Element {
            coeffs: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<QI> {
        let mut v = vec![QI::zero(); n];
        for (&i, c) in &self.coeffs {
            v[i] = c.clone();
        }
        v
    }

    pub fn add_term(&mut self, i: usize, c: QI) {
        let v = self.coeffs.remove(&i).unwrap_or_default() + c;
        if !v.is_zero() {
            self.coeffs.insert(i, v);
        }
    }

    pub fn get(&self, i: usize) -> QI {
        self.coeffs.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &QI)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, c)| format!("({c})e{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A linear functional given by its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub covector: Vec<QI>,
}

impl Functional {
    pub fn eval(&self, x: &[QI]) -> QI {
        dot(&self.covector, x)
    }

    pub fn eval_element(&self, x: &Element) -> QI {
        x.iter().fold(QI::zero(), |acc, (i, c)| {
            acc + self.covector[i].clone() * c.clone()
        })
    }
}

/// Square matrix acting on coordinate columns: column `i` is the image of `e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub m: Vec<Vec<QI>>,
}

impl LinearMap {
    pub fn identity(n: usize) -> Self {
        LinearMap {
            m: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { QI::one() } else { QI::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds the map from the images of the basis vectors.
    pub fn from_images(images: &[Vec<QI>]) -> Self {
        let n = images.len();
        LinearMap {
            m: (0..n)
                .map(|r| (0..n).map(|c| images[c][r].clone()).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn apply(&self, x: &[QI]) -> Vec<QI> {
        crate::linalg::mat_vec(&self.m, x)
    }

    pub fn image(&self, i: usize) -> Vec<QI> {
        self.m.iter().map(|row| row[i].clone()).collect()
    }

    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        LinearMap {
            m: crate::linalg::mat_mul(&self.m, &inner.m),
        }
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        crate::linalg::inverse(&self.m).map(|m| LinearMap { m })
    }

    pub fn to_cmatrix(&self) -> crate::linalg::CMatrix {
        crate::linalg::CMatrix::from_exact(&self.m)
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearMap::identity(self.dim())
    }
}

/// A finite-dimensional *-algebra with comultiplication, by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// `mult[i][j] = e_i e_j`.
    pub mult: Vec<Vec<Element>>,
    /// `star[i] = e_i^*`; extended conjugate-linearly.
    pub star: Vec<Element>,
    pub unit: Element,
    /// `comult[i]` lists `(j, k, c)` with `Δ(e_i) = Σ c e_j ⊗ e_k`.
    pub comult: Vec<Vec<(usize, usize, QI)>>,
}

/// Dense element of `A ⊗ A`, index `j * n + k` for `e_j ⊗ e_k`.
pub type Tensor2 = Vec<QI>;

pub(crate) fn dot(a: &[QI], b: &[QI]) -> QI {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(QI::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub(crate) fn axpy(acc: &mut [QI], c: &QI, x: &[QI]) {
    if c.is_zero() {
        return;
    }
    for (a, v) in acc.iter_mut().zip(x) {
        if !v.is_zero() {
            *a = a.clone() + c.clone() * v.clone();
        }
    }
}

pub(crate) fn sub(a: &[QI], b: &[QI]) -> Vec<QI> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub(crate) fn scale(c: &QI, x: &[QI]) -> Vec<QI> {
    x.iter().map(|v| c.clone() * v.clone()).collect()
}

/// Max modulus of an exact difference; exactly 0.0 iff the vector is zero.
pub(crate) fn exact_residual(v: &[QI]) -> f64 {
    v.iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.modulus().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

impl AlgebraSpec {
    pub fn basis(&self, i: usize) -> Vec<QI> {
        Element::basis(i).to_dense(self.dim)
    }

    pub fn unit_vec(&self) -> Vec<QI> {
        self.unit.to_dense(self.dim)
    }

    pub fn mul(&self, x: &[QI], y: &[QI]) -> Vec<QI> {
        let n = self.dim;
        let mut out = vec![QI::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (k, m) in self.mult[i][j].iter() {
                    out[k] = out[k].clone() + c.clone() * m.clone();
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[QI]) -> Vec<QI> {
        let mut out = vec![QI::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let c = xi.conj();
            for (k, s) in self.star[i].iter() {
                out[k] = out[k].clone() + c.clone() * s.clone();
            }
        }
        out
    }

    pub fn delta(&self, x: &[QI]) -> Tensor2 {
        let n = self.dim;
        let mut out = vec![QI::zero(); n * n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, k, c) in &self.comult[i] {
                let t = &mut out[j * n + k];
                *t = t.clone() + xi.clone() * c.clone();
            }
        }
        out
    }

    pub fn tensor(&self, x: &[QI], y: &[QI]) -> Tensor2 {
        let n = self.dim;
        let mut out = vec![QI::zero(); n * n];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, yk) in y.iter().enumerate() {
                if !yk.is_zero() {
                    out[j * n + k] = xj.clone() * yk.clone();
                }
            }
        }
        out
    }

    pub fn tensor_mul(&self, s: &Tensor2, t: &Tensor2) -> Tensor2 {
        let n = self.dim;
        let mut out = vec![QI::zero(); n * n];
        let nz = |v: &Tensor2| -> Vec<(usize, usize, QI)> {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| (idx / n, idx % n, c.clone()))
                .collect()
        };
        let (sn, tn) = (nz(s), nz(t));
        for (a, b, c1) in &sn {
            for (p, r, c2) in &tn {
                let c = c1.clone() * c2.clone();
                for (x, m1) in self.mult[*a][*p].iter() {
                    let cm = c.clone() * m1.clone();
                    for (y, m2) in self.mult[*b][*r].iter() {
                        let t = &mut out[x * n + y];
                        *t = t.clone() + cm.clone() * m2.clone();
                    }
                }
            }
        }
        out
    }

    /// `(f ⊗ g)` applied to a tensor, both given as matrices (columns are images).
    pub fn tensor_map(&self, f: &LinearMap, g: &LinearMap, t: &Tensor2) -> Tensor2 {
        let n = self.dim;
        let mut out = vec![QI::zero(); n * n];
        for (idx, c) in t.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, k) = (idx / n, idx % n);
            for x in 0..n {
                if f.m[x][j].is_zero() {
                    continue;
                }
                let cf = c.clone() * f.m[x][j].clone();
                for y in 0..n {
                    if !g.m[y][k].is_zero() {
                        let o = &mut out[x * n + y];
                        *o = o.clone() + cf.clone() * g.m[y][k].clone();
                    }
                }
            }
        }
        out
    }

    pub fn flip(&self, t: &Tensor2) -> Tensor2 {
        let n = self.dim;
        let mut out = vec![QI::zero(); n * n];
        for j in 0..n {
            for k in 0..n {
                out[k * n + j] = t[j * n + k].clone();
            }
        }
        out
    }

    /// `(ω ⊗ ι)` of a tensor.
    pub fn slice_left(&self, w: &Functional, t: &Tensor2) -> Vec<QI> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                (0..n).fold(QI::zero(), |acc, j| {
                    let c = &t[j * n + k];
                    if c.is_zero() || w.covector[j].is_zero() {
                        acc
                    } else {
                        acc + w.covector[j].clone() * c.clone()
                    }
                })
            })
            .collect()
    }

    /// `(ι ⊗ ω)` of a tensor.
    pub fn slice_right(&self, w: &Functional, t: &Tensor2) -> Vec<QI> {
        let n = self.dim;
        (0..n)
            .map(|j| {
                (0..n).fold(QI::zero(), |acc, k| {
                    let c = &t[j * n + k];
                    if c.is_zero() || w.covector[k].is_zero() {
                        acc
                    } else {
                        acc + w.covector[k].clone() * c.clone()
                    }
                })
            })
            .collect()
    }

    /// Multiplication map `m: A ⊗ A → A`.
    pub fn multiply_legs(&self, t: &Tensor2) -> Vec<QI> {
        let n = self.dim;
        let mut out = vec![QI::zero(); n];
        for (idx, c) in t.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, m) in self.mult[idx / n][idx % n].iter() {
                out[k] = out[k].clone() + c.clone() * m.clone();
            }
        }
        out
    }

    /// Left multiplication by `x` as a matrix.
    pub fn left_mult_map(&self, x: &[QI]) -> LinearMap {
        let images: Vec<Vec<QI>> = (0..self.dim).map(|i| self.mul(x, &self.basis(i))).collect();
        LinearMap::from_images(&images)
    }

    /// The star operation as a complex matrix acting on conjugated coordinates:
    /// `x* = M · conj(x)`.
    pub fn star_cmatrix(&self) -> crate::linalg::CMatrix {
        let images: Vec<Vec<QI>> = (0..self.dim)
            .map(|i| self.star[i].to_dense(self.dim))
            .collect();
        LinearMap::from_images(&images).to_cmatrix()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis_labels[i]
    }

    /// Checks index ranges and table shapes.
    pub fn check_well_formed(&self) -> Result<()> {
        let n = self.dim;
        let bad = |s: String| Err(FinqgError::Malformed(s));
        if n == 0 {
            return bad("dimension must be positive".into());
        }
        if self.basis_labels.len() != n {
            return bad(format!(
                "{} basis labels for dimension {n}",
                self.basis_labels.len()
            ));
        }
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n) {
            return bad("multiplication table is not n x n".into());
        }
        for (i, row) in self.mult.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let Some((k, _)) = e.iter().find(|(k, _)| *k >= n) {
                    return bad(format!("mult entry e{i}*e{j} references basis index {k}"));
                }
            }
        }
        if self.star.len() != n {
            return bad("star table must have one row per basis element".into());
        }
        for (i, e) in self.star.iter().enumerate() {
            if let Some((k, _)) = e.iter().find(|(k, _)| *k >= n) {
                return bad(format!("star entry for e{i} references basis index {k}"));
            }
        }
        if let Some((k, _)) = self.unit.iter().find(|(k, _)| *k >= n) {
            return bad(format!("unit references basis index {k}"));
        }
        if self.comult.len() != n {
            return bad("comultiplication must be given for every basis element".into());
        }
        for (i, terms) in self.comult.iter().enumerate() {
            if let Some((j, k, _)) = terms.iter().find(|(j, k, _)| *j >= n || *k >= n) {
                return bad(format!("comult entry for e{i} references e{j} (x) e{k}"));
            }
        }
        Ok(())
    }

    pub fn to_cx(&self, x: &[QI]) -> Vec<Cx> {
        x.iter().map(|v| v.to_cx()).collect()
    }

    /// `x·y` in complex coordinates.
    pub fn mul_cx(&self, x: &[Cx], y: &[Cx]) -> Vec<Cx> {
        let n = self.dim;
        let mut out = vec![Cx::new(0.0, 0.0); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.norm() == 0.0 {
                    continue;
                }
                for (k, m) in self.mult[i][j].iter() {
                    out[k] += xi * yj * m.to_cx();
                }
            }
        }
        out
    }

    pub fn star_cx(&self, x: &[Cx]) -> Vec<Cx> {
        let mut out = vec![Cx::new(0.0, 0.0); self.dim];
        for (i, xi) in x.iter().enumerate() {
            for (k, s) in self.star[i].iter() {
                out[k] += xi.conj() * s.to_cx();
            }
        }
        out
    }

    pub fn delta_cx(&self, x: &[Cx]) -> Vec<Cx> {
        let n = self.dim;
        let mut out = vec![Cx::new(0.0, 0.0); n * n];
        for (i, xi) in x.iter().enumerate() {
            for (j, k, c) in &self.comult[i] {
                out[j * n + k] += xi * c.to_cx();
            }
        }
        out
    }
}

/// Everything the pipeline derives from a validated spec.
#[derive(Clone, Debug)]
pub struct FiniteQG {
    pub spec: AlgebraSpec,
    pub counit: Functional,
    pub antipode: LinearMap,
    pub haar: Haar,
    pub modular: ModularData,
}

impl FiniteQG {
    /// Runs counit → antipode → Haar → modular data.
    pub fn build(spec: AlgebraSpec, cfg: &ToleranceCfg) -> Result<FiniteQG> {
        spec.check_well_formed()?;
        let counit = solve_counit(&spec)?;
        let antipode = solve_antipode(&spec, &counit)?;
        let haar = solve_haar(&spec, cfg)?;
        let modular = derive_modular_data(&spec, &counit, &antipode, &haar.phi, cfg)?;
        Ok(FiniteQG {
            spec,
            counit,
            antipode,
            haar,
            modular,
        })
    }

    pub fn phi(&self) -> &Functional {
        &self.haar.phi
    }

    /// `ψ = φ ∘ S`.
    pub fn psi(&self) -> Functional {
        let n = self.spec.dim;
        Functional {
            covector: (0..n)
                .map(|i| self.haar.phi.eval(&self.antipode.image(i)))
                .collect(),
        }
    }
}

use crate::linalg::{hermitian_eigen, CMatrix};
use crate::oneparam::{CoordAlgebra, SpectralGroup, UnitaryRep};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{scaled_residual, Cx, Scalar, ToleranceCfg, QI};

use super::solve::Haar;
use super::{AlgebraSpec, FinqgError, LinearMap, ModularData, Result};

const I: Cx = Cx::new(0.0, 1.0);

/// The GNS space of φ in coordinates: `Λ` is the identity map `A → ℂⁿ`.
#[derive(Clone, Debug)]
pub struct GnsData {
    /// `gram[(r, c)] = φ(e_r* e_c)`, so `⟨x, y⟩ = y* G x`.
    pub gram: CMatrix,
    pub gram_exact: Vec<Vec<QI>>,
    /// `∇Λ(a) = Λ(ρ(a))`.
    pub nabla: LinearMap,
    /// Eigenvalues of ∇, ascending.
    pub nabla_spectrum: Vec<f64>,
    /// `σ_z = ∇^{iz}` pulled back through Λ.
    pub sigma: SpectralGroup,
    /// `J x = conj_j · conj(x)`, i.e. `JΛ(a) = Λ(σ_{i/2}(a)*)`.
    pub conj_j: CMatrix,
}

impl GnsData {
    pub fn inner(&self, x: &[Cx], y: &[Cx]) -> Cx {
        let gx = self.gram.mul_vec(x);
        y.iter().zip(&gx).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_j(&self, x: &[Cx]) -> Vec<Cx> {
        let c: Vec<Cx> = x.iter().map(|v| v.conj()).collect();
        self.conj_j.mul_vec(&c)
    }
}

fn nabla_err(s: impl std::fmt::Display) -> FinqgError {
    FinqgError::NablaNotPositive(s.to_string())
}

/// Builds `G`, certifies `∇ = ρ` as `G`-self-adjoint and positive, and
/// derives σ and J from its spectral decomposition.
pub fn gns_build(
    spec: &AlgebraSpec,
    haar: &Haar,
    md: &ModularData,
    cfg: &ToleranceCfg,
) -> Result<GnsData> {
    let n = spec.dim;
    let gram_exact = haar.gram.clone();
    let gram = haar.gram_cmatrix();
    let nabla = md.rho.clone();

    // G∇ = ∇*G, exactly.
    let gn = crate::linalg::mat_mul(&gram_exact, &nabla.m);
    let nh: Vec<Vec<QI>> = (0..n)
        .map(|i| (0..n).map(|j| nabla.m[j][i].conj()).collect())
        .collect();
    let ng = crate::linalg::mat_mul(&nh, &gram_exact);
    if gn != ng {
        return Err(nabla_err("∇ is not self-adjoint for ⟨x, y⟩ = φ(y*x)"));
    }

    let sigma = if nabla.is_identity() {
        SpectralGroup::identity(n)
    } else {
        SpectralGroup::from_generator(&nabla.to_cmatrix(), &gram, cfg).map_err(nabla_err)?
    };
    let nabla_spectrum = {
        let l = gram
            .cholesky()
            .ok_or_else(|| nabla_err("Gram matrix not positive"))?;
        let lh = l.adjoint();
        let lh_inv = lh
            .inverse()
            .ok_or_else(|| nabla_err("Gram matrix singular"))?;
        hermitian_eigen(&lh.mul(&nabla.to_cmatrix()).mul(&lh_inv)).values
    };
    if let Some(v) = nabla_spectrum.iter().find(|v| !(**v > 0.0)) {
        return Err(nabla_err(format!("∇ has eigenvalue {v:e}")));
    }

    let half = sigma.matrix(I * 0.5);
    let mut conj_half = half.clone();
    for i in 0..n {
        for j in 0..n {
            conj_half[(i, j)] = half[(i, j)].conj();
        }
    }
    let conj_j = spec.star_cmatrix().mul(&conj_half);
    Ok(GnsData {
        gram,
        gram_exact,
        nabla,
        nabla_spectrum,
        sigma,
        conj_j,
    })
}

/// GNS laws: Gram reproduction, ∇ at integer points, J involutive and anti-unitary.
pub fn gns_report(
    spec: &AlgebraSpec,
    haar: &Haar,
    gns: &GnsData,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Report {
    let n = spec.dim;
    let mut r = Report::new("gns");
    let e = |i: usize| crate::oneparam::unit_vector(n, i);

    let mut w = Worst::new();
    for a in 0..n {
        for b in 0..n {
            let direct = haar
                .phi
                .eval(&spec.mul(&spec.star(&spec.basis(b)), &spec.basis(a)))
                .to_cx();
            w.record(
                crate::scalars::scaled_diff(gns.inner(&e(a), &e(b)), direct),
                || format!("(a, b) = ({}, {})", spec.label(a), spec.label(b)),
            );
        }
    }
    r.push(w.within("gram", "⟨Λ(a), Λ(b)⟩ = φ(b*a)", cfg.abs_tol));

    // ∇^{iz} at z ∈ iℤ is an integer power of ρ: an exact oracle for σ.
    let rho = gns.nabla.to_cmatrix();
    let rho_inv = gns.nabla.inverse().map(|m| m.to_cmatrix());
    let mut w = Worst::new();
    for &z in z_grid.iter().filter(|z| z.re == 0.0 && z.im.fract() == 0.0) {
        let k = -z.im as i64;
        let oracle = match (k >= 0, &rho_inv) {
            (true, _) => (0..k).fold(CMatrix::identity(n), |m, _| m.mul(&rho)),
            (false, Some(ri)) => (0..-k).fold(CMatrix::identity(n), |m, _| m.mul(ri)),
            (false, None) => {
                w.record(f64::INFINITY, || "ρ not invertible".into());
                continue;
            }
        };
        for a in 0..n {
            let lhs = gns.sigma.apply(z, &e(a));
            w.record(scaled_residual(&lhs, &oracle.mul_vec(&e(a))), || {
                format!("z = {}i, a = {}", z.im, spec.label(a))
            });
        }
    }
    r.push(w.within(
        "sigma_nabla",
        "Λ(σ_z(a)) = ∇^{iz}Λ(a), σ_{-i} = ρ",
        cfg.abs_tol,
    ));

    let mut w = Worst::new();
    for a in 0..n {
        let jj = gns.apply_j(&gns.apply_j(&e(a)));
        w.record(scaled_residual(&jj, &e(a)), || spec.label(a).to_string());
    }
    r.push(w.within("j_involutive", "J² = ι", cfg.abs_tol));

    let mut w = Worst::new();
    for a in 0..n {
        for b in 0..n {
            let lhs = gns.inner(&gns.apply_j(&e(a)), &gns.apply_j(&e(b)));
            let rhs = gns.inner(&e(b), &e(a));
            w.record(crate::scalars::scaled_diff(lhs, rhs), || {
                format!("(ξ, η) = ({}, {})", spec.label(a), spec.label(b))
            });
        }
    }
    r.push(w.within("j_antiunitary", "⟨Jξ, Jη⟩ = ⟨η, ξ⟩", cfg.abs_tol));

    r.push(Entry::condition(
        "nabla_positive",
        "∇ is G-self-adjoint with positive spectrum",
        gns.nabla_spectrum.iter().all(|v| *v > 0.0),
    ));
    r.note(
        "nabla_spectrum",
        format!(
            "[{}]",
            gns.nabla_spectrum
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    r
}

impl CoordAlgebra for AlgebraSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self, i: usize) -> String {
        self.basis_labels[i].clone()
    }

    fn star(&self, x: &[Cx]) -> Vec<Cx> {
        self.star_cx(x)
    }

    fn mul_basis(&self, i: usize, j: usize) -> Option<Vec<Cx>> {
        Some(self.to_cx(&self.mult[i][j].to_dense(self.dim)))
    }
}

/// `z ↦ δ^{iz}` in a finite instance, via the spectral calculus of left
/// multiplication by δ.
pub struct DeltaRep<'a> {
    spec: &'a AlgebraSpec,
    group: SpectralGroup,
}

impl<'a> DeltaRep<'a> {
    pub fn new(
        spec: &'a AlgebraSpec,
        md: &ModularData,
        gram: &CMatrix,
        cfg: &ToleranceCfg,
    ) -> Result<Self> {
        let delta = md.delta.to_dense(spec.dim);
        let group = if delta == spec.unit_vec() {
            SpectralGroup::identity(spec.dim)
        } else {
            SpectralGroup::from_generator(&spec.left_mult_map(&delta).to_cmatrix(), gram, cfg)
                .map_err(|e| FinqgError::Modular(format!("δ is not positive: {e}")))?
        };
        Ok(DeltaRep { spec, group })
    }
}

impl UnitaryRep for DeltaRep<'_> {
    type Value = Vec<Cx>;

    fn at(&self, z: Cx) -> Vec<Cx> {
        self.group.apply(z, &self.spec.to_cx(&self.spec.unit_vec()))
    }

    fn mul(&self, x: &Vec<Cx>, y: &Vec<Cx>) -> Vec<Cx> {
        self.spec.mul_cx(x, y)
    }

    fn star(&self, x: &Vec<Cx>) -> Vec<Cx> {
        self.spec.star_cx(x)
    }

    fn unit(&self) -> Vec<Cx> {
        self.spec.to_cx(&self.spec.unit_vec())
    }

    fn distance(&self, x: &Vec<Cx>, y: &Vec<Cx>) -> f64 {
        scaled_residual(x, y)
    }
}

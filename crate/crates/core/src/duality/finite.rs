use crate::finqg::{
    bidual_check, convolve, dual_report, dual_star_cov, dualize, gns_build, scaling_group,
    DeltaRep, DualSpec, FiniteQG, GnsData, LinearMap,
};
use crate::oneparam::{unitary_rep_check, SpectralGroup, UnitaryRep};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{scaled_diff, scaled_residual, Cx, Scalar, ToleranceCfg, QI};

use super::{DualElement, DualExpr, DualKind, DualityError, MultiplierFunctional, Result, I};

fn fmt_z(z: Cx) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn exact_diff(a: &[QI], b: &[QI]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.clone() - y.clone();
            if d.is_zero() {
                0.0
            } else {
                d.modulus().max(f64::MIN_POSITIVE)
            }
        })
        .fold(0.0, f64::max)
}

/// The dual of a finite instance, with the derived data of both sides.
pub struct FiniteDuality<'a> {
    pub qg: &'a FiniteQG,
    pub dual: DualSpec,
    /// `(Â, Δ̂)` run through the same pipeline as `A`.
    pub dual_qg: FiniteQG,
    pub gns: GnsData,
    pub dual_gns: GnsData,
    tau: SpectralGroup,
    delta: DeltaRep<'a>,
    kac: bool,
    s_inverse_squared: LinearMap,
}

impl<'a> FiniteDuality<'a> {
    pub fn new(qg: &'a FiniteQG, cfg: &ToleranceCfg) -> Result<Self> {
        let spec = &qg.spec;
        let md = &qg.modular;
        let dual = dualize(qg)?;
        let dual_qg = FiniteQG::build(dual.spec.clone(), cfg)?;
        let gns = gns_build(spec, &qg.haar, md, cfg)?;
        let dual_gns = gns_build(&dual_qg.spec, &dual_qg.haar, &dual_qg.modular, cfg)?;
        let tau = scaling_group(spec, &md.s_squared, qg.phi(), cfg)?;
        let delta = DeltaRep::new(spec, md, &gns.gram, cfg)?;
        let kac = md.s_squared.is_identity() && md.delta.to_dense(spec.dim) == spec.unit_vec();
        let s_inverse_squared = md
            .s_squared
            .inverse()
            .ok_or_else(|| DualityError::NotKac("S² is not invertible".into()))?;
        Ok(FiniteDuality {
            qg,
            dual,
            dual_qg,
            gns,
            dual_gns,
            tau,
            delta,
            kac,
            s_inverse_squared,
        })
    }

    pub fn dim(&self) -> usize {
        self.qg.spec.dim
    }

    pub fn is_kac(&self) -> bool {
        self.kac
    }

    /// `â = aφ` as a covector.
    pub fn fourier(&self, a: &[QI]) -> DualElement {
        DualElement::FiniteCovector(self.dual.covector(&self.dual.fourier(a)))
    }

    /// The unique `c` with `ω = cφ`.
    pub fn inverse_fourier(&self, w: &[QI]) -> Vec<QI> {
        self.dual.inverse_fourier(&self.dual.from_covector(w))
    }

    /// `(ω₁ω₂, c)` with `ω₁ω₂ = cφ`.
    pub fn dual_multiply(&self, w1: &[QI], w2: &[QI]) -> (Vec<QI>, Vec<QI>) {
        let w = convolve(&self.qg.spec, w1, w2);
        let c = self.inverse_fourier(&w);
        (w, c)
    }

    pub fn dual_star(&self, w: &[QI]) -> Vec<QI> {
        dual_star_cov(&self.qg.spec, &self.qg.antipode, w)
    }

    pub fn dual_antipode(&self, w: &[QI]) -> Vec<QI> {
        self.compose(w, &self.qg.antipode)
    }

    /// `ω ∘ m` as a covector.
    fn compose(&self, w: &[QI], m: &LinearMap) -> Vec<QI> {
        (0..self.dim())
            .map(|j| {
                m.image(j)
                    .iter()
                    .zip(w)
                    .fold(QI::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// `ψ̂(ω) = ε(a)` for `ω = aφ`.
    pub fn psi_hat(&self, w: &[QI]) -> QI {
        self.dual.psi_hat.eval(&self.dual.from_covector(w))
    }

    /// `φ̂(ψa) = ε(a)`, through the coordinates of `ω` in `Â`.
    pub fn phi_hat(&self, w: &[QI]) -> QI {
        self.dual.phi_hat.eval(&self.dual.from_covector(w))
    }

    /// A dual functional as a covector, exactly. The analytic maps use the
    /// Kac collapse `τ_z = ι`, `δ = 1`, `R = S`, which every instance with a
    /// positive Haar functional satisfies and which is checked on entry.
    pub fn covector(&self, w: &DualExpr) -> Result<Vec<QI>> {
        Ok(match w {
            DualExpr::Leaf(MultiplierFunctional::Element(DualElement::FiniteCovector(c))) => {
                c.clone()
            }
            DualExpr::Leaf(_) => {
                return Err(DualityError::WrongEngine(
                    "only covectors live on a finite instance".into(),
                ))
            }
            DualExpr::Product(a, b) => {
                convolve(&self.qg.spec, &self.covector(a)?, &self.covector(b)?)
            }
            DualExpr::Star(a) => self.dual_star(&self.covector(a)?),
            DualExpr::Antipode(a) => self.dual_antipode(&self.covector(a)?),
            DualExpr::Analytic { kind, inner, .. } => {
                if !self.kac {
                    return Err(DualityError::NotKac(
                        "exact dual analytic maps need S² = ι and δ = 1".into(),
                    ));
                }
                let c = self.covector(inner)?;
                match kind {
                    DualKind::RHat => self.dual_antipode(&c),
                    _ => c,
                }
            }
        })
    }

    pub fn evaluate(&self, w: &DualExpr, x: &[QI]) -> Result<QI> {
        Ok(self
            .covector(w)?
            .iter()
            .zip(x)
            .fold(QI::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    fn basis_cx(&self, i: usize) -> Vec<Cx> {
        crate::oneparam::unit_vector(self.dim(), i)
    }

    fn sigma_prime(&self, z: Cx, x: &[Cx]) -> Vec<Cx> {
        let spec = &self.qg.spec;
        let s = self.gns.sigma.apply(z, x);
        spec.mul_cx(&spec.mul_cx(&self.delta.at(z), &s), &self.delta.at(-z))
    }

    /// `εσ_z` as a covector.
    pub fn eps_sigma(&self, z: Cx) -> Vec<Cx> {
        let eps = self.qg.spec.to_cx(&self.qg.counit.covector);
        (0..self.dim())
            .map(|i| dot(&eps, &self.gns.sigma.apply(z, &self.basis_cx(i))))
            .collect()
    }

    /// `δ̂^{iz} = εσ_{-z}`.
    pub fn delta_hat_power(&self, z: Cx) -> Vec<Cx> {
        self.eps_sigma(-z)
    }
}

fn dot(a: &[Cx], b: &[Cx]) -> Cx {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `z ↦ εσ_{-z}` as a unitary representation in `M(Â)`, elements stored
/// as covectors.
struct DeltaHatRep<'b, 'a> {
    fd: &'b FiniteDuality<'a>,
}

impl UnitaryRep for DeltaHatRep<'_, '_> {
    type Value = Vec<Cx>;

    fn at(&self, z: Cx) -> Vec<Cx> {
        self.fd.delta_hat_power(z)
    }

    fn mul(&self, x: &Vec<Cx>, y: &Vec<Cx>) -> Vec<Cx> {
        let spec = &self.fd.qg.spec;
        (0..spec.dim)
            .map(|i| {
                spec.comult[i]
                    .iter()
                    .map(|(p, r, c)| c.to_cx() * x[*p] * y[*r])
                    .sum()
            })
            .collect()
    }

    fn star(&self, x: &Vec<Cx>) -> Vec<Cx> {
        let spec = &self.fd.qg.spec;
        let s = &self.fd.qg.antipode;
        (0..spec.dim)
            .map(|j| dot(x, &spec.star_cx(&spec.to_cx(&s.image(j)))).conj())
            .collect()
    }

    fn unit(&self) -> Vec<Cx> {
        self.fd.qg.spec.to_cx(&self.fd.qg.counit.covector)
    }

    fn distance(&self, x: &Vec<Cx>, y: &Vec<Cx>) -> f64 {
        scaled_residual(x, y)
    }
}

/// The dual suite on a finite instance: the dual's Hopf structure and Haar
/// functionals, Plancherel, biduality, the dual analytic maps and `δ̂`.
pub fn finite_duality_report(qg: &FiniteQG, z_grid: &[Cx], cfg: &ToleranceCfg) -> Result<Report> {
    let fd = FiniteDuality::new(qg, cfg)?;
    let spec = &qg.spec;
    let n = spec.dim;
    let md = &qg.modular;
    let dmd = &fd.dual_qg.modular;
    let tol = cfg.abs_tol;
    let lab = |i: usize| spec.label(i).to_string();
    let dlab = |i: usize| fd.dual.spec.label(i).to_string();
    let mut r = Report::new("duality");
    r.note("instance", spec.name.clone());

    r.extend(dual_report(qg, &fd.dual)?);
    r.extend(bidual_check(qg, cfg)?);
    r.push(Entry::condition(
        "fourier_bijective",
        "a ↦ aφ is a bijection A → Â",
        crate::linalg::inverse(&fd.dual.pairing).is_some(),
    ));
    r.push(Entry::condition(
        "kac_premise",
        "S² = ι and δ = 1, so τ_z = ι and δ^{iz} = 1",
        fd.is_kac(),
    ));

    let omegas: Vec<Vec<QI>> = (0..n)
        .map(|i| fd.dual.covector(&fd.dual.spec.basis(i)))
        .collect();
    let leaf = |w: &Vec<QI>| DualExpr::element(DualElement::FiniteCovector(w.clone()));
    let s2 = &md.s_squared;
    let delta_inv = md.delta_inv.to_dense(n);

    // σ̂_{-i}(ω)(x) = ω(S²(x)δ⁻¹) against ρ̂ of the dual, derived independently.
    let mut w1 = Worst::new();
    let mut w2 = Worst::new();
    let mut w3 = Worst::new();
    for (i, om) in omegas.iter().enumerate() {
        let f = |m: &dyn Fn(usize) -> Vec<QI>| -> Vec<QI> {
            (0..n)
                .map(|j| {
                    m(j).iter()
                        .zip(om)
                        .fold(QI::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect()
        };
        let sigma = f(&|j| spec.mul(&s2.image(j), &delta_inv));
        let rho_hat = fd.dual.covector(&dmd.rho.image(i));
        w1.record(exact_diff(&sigma, &rho_hat), || dlab(i));
        let tau = f(&|j| s2.image(j));
        let s2_hat = fd.dual.covector(&fd.dual_qg.modular.s_squared.image(i));
        w2.record(exact_diff(&tau, &s2_hat), || dlab(i));
        let sigma_p = f(&|j| spec.mul(&delta_inv, &fd.s_inverse_squared.image(j)));
        let rho_p_hat = fd.dual.covector(&dmd.rho_prime.image(i));
        w3.record(exact_diff(&sigma_p, &rho_p_hat), || dlab(i));
    }
    r.push(w1.exact(
        "sigma_hat_at_minus_i",
        "σ̂_{-i}(ω)(a) = ω(S²(a)δ⁻¹) = ρ̂(ω)(a)",
    ));
    r.push(w2.exact("tau_hat_at_minus_i", "τ̂_{-i}(ω) = ωS² = Ŝ²(ω)"));
    r.push(w3.exact(
        "sigma_hat_prime_at_minus_i",
        "σ̂'_{-i}(ω)(a) = ω(δ⁻¹S⁻²(a)) = ρ̂'(ω)(a)",
    ));

    let mut w = Worst::new();
    for (i, om) in omegas.iter().enumerate() {
        let lhs = fd.covector(&leaf(om).analytic(DualKind::RHat, Cx::new(0.0, 0.0)))?;
        let rhs = fd.dual.covector(&fd.dual_qg.antipode.image(i));
        w.record(exact_diff(&lhs, &rhs), || dlab(i));
    }
    r.push(w.exact("r_hat", "R̂(ω) = ωR = Ŝ(ω) in the Kac case"));

    // The formula family against the dual's own modular group on the grid.
    let mut w = Worst::new();
    for &z in z_grid {
        for (i, om) in omegas.iter().enumerate() {
            let formula = fd.covector(&leaf(om).analytic(DualKind::SigmaHat, z))?;
            let coords = fd
                .dual_gns
                .sigma
                .apply(z, &crate::oneparam::unit_vector(n, i));
            let gns: Vec<Cx> = (0..n)
                .map(|j| dot(&spec.to_cx(&fd.dual.pairing[j]), &coords))
                .collect();
            w.record(scaled_residual(&spec.to_cx(&formula), &gns), || {
                format!("z={}, ω={}", fmt_z(z), dlab(i))
            });
        }
    }
    r.push(w.within(
        "sigma_hat_vs_dual_modular_group",
        "σ̂_z(ω)(a) = ω(τ_z(a)δ^{-iz}) agrees with the modular group of φ̂",
        tol,
    ));

    let mut group = Worst::new();
    let mut star = Worst::new();
    let mut mult = Worst::new();
    let mut prime = Worst::new();
    let mut inv = Worst::new();
    let mut trivial = Worst::new();
    for &y in z_grid {
        for &z in z_grid {
            for (i, om) in omegas.iter().enumerate() {
                let l = leaf(om);
                let nested = fd.covector(
                    &l.clone()
                        .analytic(DualKind::SigmaHat, z)
                        .analytic(DualKind::SigmaHat, y),
                )?;
                let direct = fd.covector(&l.clone().analytic(DualKind::SigmaHat, y + z))?;
                group.record(exact_diff(&nested, &direct), || {
                    format!("y={}, z={}, ω={}", fmt_z(y), fmt_z(z), dlab(i))
                });
            }
        }
        for (i, om) in omegas.iter().enumerate() {
            let l = leaf(om);
            let z = y;
            let lhs = fd.covector(&l.clone().analytic(DualKind::SigmaHat, z).star())?;
            let rhs = fd.covector(&l.clone().star().analytic(DualKind::SigmaHat, z.conj()))?;
            star.record(exact_diff(&lhs, &rhs), || {
                format!("z={}, ω={}", fmt_z(z), dlab(i))
            });
            let lhs = fd.covector(&l.clone().analytic(DualKind::SigmaHatPrime, z))?;
            let rhs = fd.covector(
                &l.clone()
                    .analytic(DualKind::RHat, z)
                    .analytic(DualKind::SigmaHat, -z)
                    .analytic(DualKind::RHat, z),
            )?;
            prime.record(exact_diff(&lhs, &rhs), || {
                format!("z={}, ω={}", fmt_z(z), dlab(i))
            });
            let sz = fd.covector(&l.clone().analytic(DualKind::SigmaHat, z))?;
            inv.record(exact_diff(&[fd.phi_hat(&sz)], &[fd.phi_hat(om)]), || {
                format!("z={}, ω={}", fmt_z(z), dlab(i))
            });
            trivial.record(exact_diff(&sz, om), || {
                format!("z={}, ω={}", fmt_z(z), dlab(i))
            });
            for (k, om2) in omegas.iter().enumerate() {
                let prod = l.clone().times(leaf(om2));
                let lhs = fd.covector(&prod.analytic(DualKind::SigmaHat, z))?;
                let rhs = fd.covector(
                    &l.clone()
                        .analytic(DualKind::SigmaHat, z)
                        .times(leaf(om2).analytic(DualKind::SigmaHat, z)),
                )?;
                mult.record(exact_diff(&lhs, &rhs), || {
                    format!("z={}, (ω, θ)=({}, {})", fmt_z(z), dlab(i), dlab(k))
                });
            }
        }
    }
    r.push(group.exact("sigma_hat_group_law", "σ̂_{y+z} = σ̂_y σ̂_z"));
    r.push(star.exact("sigma_hat_star_law", "σ̂_z(ω)* = σ̂_{z̄}(ω*)"));
    r.push(mult.exact("sigma_hat_multiplicative", "(ωθ)_z = ω_z θ_z"));
    r.push(prime.exact("sigma_hat_prime_r", "σ̂'_z = R̂σ̂_{-z}R̂"));
    r.push(inv.exact("phi_hat_sigma_hat", "φ̂(ω_z) = φ̂(ω)"));
    r.push(trivial.exact("kac_sigma_hat_trivial", "σ̂_z(ω) = ω (τ = ι, δ = 1)"));

    // δ̂^{iz} = εσ_{-z}.
    let rep = DeltaHatRep { fd: &fd };
    let eps = spec.to_cx(&qg.counit.covector);
    let mut chi = Worst::new();
    let mut kac = Worst::new();
    let mut prime = Worst::new();
    let mut right = Worst::new();
    let mut left = Worst::new();
    for &z in z_grid {
        let u = fd.delta_hat_power(z);
        kac.record(scaled_residual(&u, &eps), || fmt_z(z));
        for a in 0..n {
            for b in 0..n {
                let ab = spec.to_cx(&spec.mul(&spec.basis(a), &spec.basis(b)));
                chi.record(scaled_diff(dot(&u, &ab), u[a] * u[b]), || {
                    format!("z={}, (a, b)=({}, {})", fmt_z(z), lab(a), lab(b))
                });
            }
        }
        let es = fd.eps_sigma(z);
        let esp: Vec<Cx> = (0..n)
            .map(|i| dot(&eps, &fd.sigma_prime(z, &fd.basis_cx(i))))
            .collect();
        prime.record(scaled_residual(&es, &esp), || fmt_z(z));
        for a in 0..n {
            let d = spec.delta_cx(&fd.basis_cx(a));
            let mut rs = vec![Cx::new(0.0, 0.0); n];
            let mut ls = vec![Cx::new(0.0, 0.0); n];
            for j in 0..n {
                for k in 0..n {
                    let c = d[j * n + k];
                    rs[j] += c * u[k];
                    ls[k] += c * u[j];
                }
            }
            let want_r = fd.tau.apply(z, &fd.gns.sigma.apply(-z, &fd.basis_cx(a)));
            right.record(scaled_residual(&rs, &want_r), || {
                format!("z={}, a={}", fmt_z(z), lab(a))
            });
            let want_l = fd.tau.apply(-z, &fd.sigma_prime(-z, &fd.basis_cx(a)));
            left.record(scaled_residual(&ls, &want_l), || {
                format!("z={}, a={}", fmt_z(z), lab(a))
            });
        }
    }
    r.push(chi.within(
        "delta_hat_character",
        "δ̂^{iz} = εσ_{-z} is multiplicative",
        tol,
    ));
    r.push(right.within(
        "delta_hat_multiplier_right",
        "(ι⊙δ̂^{iz})Δ(a) = τ_z(σ_{-z}(a)) ∈ A",
        tol,
    ));
    r.push(left.within(
        "delta_hat_multiplier_left",
        "(δ̂^{iz}⊙ι)Δ(a) = τ_{-z}(σ'_{-z}(a)) ∈ A",
        tol,
    ));
    r.push(prime.within("eps_sigma_prime", "εσ_z = εσ'_z", tol));
    r.push(kac.exact("delta_hat_kac", "δ̂^{iz} = ε (σ = ι)"));
    let dhat = fd.dual.covector(&dmd.delta.to_dense(n));
    r.push(Entry::exact(
        "delta_hat_at_minus_i",
        "u_{-i} = δ̂ of the dual",
        scaled_residual(&fd.delta_hat_power(-I), &spec.to_cx(&dhat)),
    ));
    r.extend_prefixed("delta_hat", unitary_rep_check(&rep, z_grid, cfg));
    Ok(r)
}

use crate::linalg::{solve, Solution};
use crate::oneparam::{compute_lambda, default_z_grid, SpectralGroup};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{Field, Scalar, ToleranceCfg, QI};

use super::solve::gram_of;
use super::{
    exact_residual, scale, sub, AlgebraSpec, Element, FinqgError, Functional, LinearMap, Result,
};

#[derive(Clone, Debug)]
pub struct ModularData {
    /// `φ(ab) = φ(bρ(a))`.
    pub rho: LinearMap,
    /// `ρ'(a) = δρ(a)δ⁻¹`.
    pub rho_prime: LinearMap,
    pub delta: Element,
    pub delta_inv: Element,
    /// `φS² = μφ`.
    pub mu: QI,
    /// `φτ_z = ν^z φ`, with `τ_{-i} = S²`.
    pub nu: f64,
    pub s_squared: LinearMap,
}

fn modular_err(s: impl Into<String>) -> FinqgError {
    FinqgError::Modular(s.into())
}

/// Solves for ρ, δ, μ and ν, and assembles ρ'.
pub fn derive_modular_data(
    spec: &AlgebraSpec,
    _counit: &Functional,
    antipode: &LinearMap,
    phi: &Functional,
    cfg: &ToleranceCfg,
) -> Result<ModularData> {
    let n = spec.dim;
    let e = |i| spec.basis(i);
    let pair: Vec<Vec<QI>> = (0..n)
        .map(|j| (0..n).map(|k| phi.eval(&spec.mul(&e(j), &e(k)))).collect())
        .collect();

    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let b: Vec<QI> = (0..n).map(|j| pair[i][j].clone()).collect();
        match solve(&pair, &b) {
            Solution::Unique(x) => images.push(x),
            _ => return Err(modular_err("φ(ab) = φ(bρ(a)) has no unique solution for ρ")),
        }
    }
    let rho = LinearMap::from_images(&images);

    let mut rows = Vec::with_capacity(n * n * n);
    let mut rhs = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let d = spec.delta(&e(i));
        let one = spec.unit_vec();
        for j in 0..n {
            let t = spec.tensor_mul(&d, &spec.tensor(&one, &e(j)));
            let lhs = spec.slice_left(phi, &t);
            for k in 0..n {
                let row: Vec<QI> = (0..n)
                    .map(|r| phi.covector[i].clone() * spec.mult[r][j].get(k))
                    .collect();
                rows.push(row);
                rhs.push(lhs[k].clone());
            }
        }
    }
    let delta = match solve(&rows, &rhs) {
        Solution::Unique(x) => x,
        Solution::Underdetermined(..) => {
            return Err(modular_err(
                "(φ⊗ι)(Δ(a)(1⊗b)) = φ(a)δb does not determine δ",
            ))
        }
        Solution::Inconsistent => {
            return Err(modular_err("(φ⊗ι)(Δ(a)(1⊗b)) = φ(a)δb is inconsistent"))
        }
    };
    let delta_inv = spec
        .left_mult_map(&delta)
        .inverse()
        .map(|m| m.apply(&spec.unit_vec()))
        .ok_or_else(|| modular_err("δ is not invertible"))?;

    let s_squared = antipode.compose(antipode);
    let Some(i0) = (0..n).find(|&i| !phi.covector[i].is_zero()) else {
        return Err(modular_err("φ vanishes on every basis element"));
    };
    let mu = phi.eval(&s_squared.image(i0)) / phi.covector[i0].clone();
    for j in 0..n {
        if phi.eval(&s_squared.image(j)) != mu.clone() * phi.covector[j].clone() {
            return Err(modular_err(format!(
                "φ(S²(a)) / φ(a) is not constant (basis {})",
                spec.label(j)
            )));
        }
    }

    let rho_prime = LinearMap::from_images(
        &(0..n)
            .map(|i| spec.mul(&spec.mul(&delta, &rho.image(i)), &delta_inv))
            .collect::<Vec<_>>(),
    );

    let tau = scaling_group(spec, &s_squared, phi, cfg)?;
    let phi_cx: Vec<_> = phi.covector.iter().map(|c| c.to_cx()).collect();
    let nu = compute_lambda(&tau, &phi_cx, &default_z_grid(), cfg)
        .map_err(|e| modular_err(format!("scaling constant: {e}")))?
        .lambda;

    Ok(ModularData {
        rho,
        rho_prime,
        delta: Element::from_dense(&delta),
        delta_inv: Element::from_dense(&delta_inv),
        mu,
        nu,
        s_squared,
    })
}

/// The group with `τ_{-i} = S²`; exactly the identity group when `S² = ι`.
pub(crate) fn scaling_group(
    spec: &AlgebraSpec,
    s_squared: &LinearMap,
    phi: &Functional,
    cfg: &ToleranceCfg,
) -> Result<SpectralGroup> {
    if s_squared.is_identity() {
        return Ok(SpectralGroup::identity(spec.dim));
    }
    let gram = crate::linalg::CMatrix::from_exact(&gram_of(spec, phi));
    SpectralGroup::from_generator(&s_squared.to_cmatrix(), &gram, cfg)
        .map_err(|e| modular_err(format!("S² does not generate a scaling group: {e}")))
}

/// Exact residuals of every law relating φ, ψ, ρ, ρ', δ and μ, and the
/// finite-dimensional collapse `S² = ι, δ = 1, ρ = ι, μ = 1`.
pub fn modular_report(
    spec: &AlgebraSpec,
    counit: &Functional,
    s: &LinearMap,
    phi: &Functional,
    md: &ModularData,
) -> Report {
    let n = spec.dim;
    let mut r = Report::new("modular");
    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();
    let pair_lab = |i: usize, j: usize| format!("(a, b) = ({}, {})", lab(i), lab(j));
    let one = spec.unit_vec();
    let delta = md.delta.to_dense(n);
    let delta_inv = md.delta_inv.to_dense(n);
    let s2 = &md.s_squared;
    let s_inv = s.inverse();
    let psi = Functional {
        covector: (0..n).map(|i| phi.eval(&s.image(i))).collect(),
    };

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = phi.eval(&spec.mul(&e(i), &e(j)));
            let rhs = phi.eval(&spec.mul(&e(j), &md.rho.image(i)));
            w.record(exact_residual(&[lhs - rhs]), || pair_lab(i, j));
        }
    }
    r.push(w.exact("weak_kms", "φ(ab) = φ(bρ(a))"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = md.rho.apply(&spec.star(&md.rho.apply(&spec.star(&e(i)))));
        w.record(exact_residual(&sub(&lhs, &e(i))), || lab(i));
    }
    r.push(w.exact("rho_star", "ρ(ρ(a*)*) = a"));

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = psi.eval(&spec.mul(&e(i), &e(j)));
            let rhs = psi.eval(&spec.mul(&e(j), &md.rho_prime.image(i)));
            w.record(exact_residual(&[lhs - rhs]), || pair_lab(i, j));
        }
    }
    r.push(w.exact("psi_weak_kms", "ψ(ab) = ψ(bρ'(a)), ψ = φS"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.delta(&md.rho.image(i));
        let rhs = spec.tensor_map(s2, &md.rho, &spec.delta(&e(i)));
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
    }
    r.push(w.exact("delta_rho", "Δρ = (S²⊗ρ)Δ"));

    let mut w = Worst::new();
    match s2.inverse() {
        Some(s2_inv) => {
            for i in 0..n {
                let lhs = spec.delta(&md.rho_prime.image(i));
                let rhs = spec.tensor_map(&md.rho_prime, &s2_inv, &spec.delta(&e(i)));
                w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
            }
        }
        None => w.record(f64::INFINITY, || "S² not invertible".into()),
    }
    r.push(w.exact("delta_rho_prime", "Δρ' = (ρ'⊗S⁻²)Δ"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = s.apply(&md.rho_prime.image(i));
        let rhs = md.rho.apply(&s.image(i));
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
    }
    r.push(w.exact("s_rho_prime", "Sρ' = ρS"));

    let (mut wd, mut wp) = (Worst::new(), Worst::new());
    for i in 0..n {
        let d = spec.delta(&e(i));
        for j in 0..n {
            let lhs = spec.slice_left(phi, &spec.tensor_mul(&d, &spec.tensor(&one, &e(j))));
            let rhs = scale(&phi.covector[i], &spec.mul(&delta, &e(j)));
            wd.record(exact_residual(&sub(&lhs, &rhs)), || pair_lab(i, j));
            let lhs = spec.slice_right(&psi, &spec.tensor_mul(&d, &spec.tensor(&e(j), &one)));
            let rhs = scale(&psi.covector[i], &spec.mul(&delta_inv, &e(j)));
            wp.record(exact_residual(&sub(&lhs, &rhs)), || pair_lab(i, j));
        }
    }
    r.push(wd.exact("modular_element", "(φ⊗ι)(Δ(a)(1⊗b)) = φ(a)δb"));
    r.push(wp.exact("modular_element_psi", "(ι⊗ψ)(Δ(a)(b⊗1)) = ψ(a)δ⁻¹b"));

    let (mut w1, mut w2) = (Worst::new(), Worst::new());
    for i in 0..n {
        let ps = phi.eval(&s.image(i));
        let pad = phi.eval(&spec.mul(&e(i), &delta));
        let pda = md.mu.clone() * phi.eval(&spec.mul(&delta, &e(i)));
        let res = exact_residual(&[ps.clone() - pad.clone(), pad - pda]);
        w1.record(res, || lab(i));
        let lhs = phi.eval(&s2.image(i));
        let rhs = phi.eval(&spec.mul(&spec.mul(&delta_inv, &e(i)), &delta));
        w2.record(exact_residual(&[lhs - rhs]), || lab(i));
    }
    r.push(w1.exact("phi_antipode", "φ(S(a)) = φ(aδ) = μφ(δa)"));
    r.push(w2.exact("phi_s_squared", "φ(S²(a)) = φ(δ⁻¹aδ)"));

    let mut w = Worst::new();
    for i in 0..n {
        let res =
            exact_residual(&[phi.eval(&s2.image(i)) - md.mu.clone() * phi.covector[i].clone()]);
        w.record(res, || lab(i));
    }
    r.push(w.exact("mu", "φS² = μφ"));
    r.push(Entry::exact(
        "mu_modulus",
        "|μ| = 1",
        exact_residual(&[md.mu.clone() * md.mu.conj() - QI::one()]),
    ));

    r.push(Entry::exact(
        "delta_grouplike",
        "Δ(δ) = δ⊗δ",
        exact_residual(&sub(&spec.delta(&delta), &spec.tensor(&delta, &delta))),
    ));
    r.push(Entry::exact(
        "counit_delta",
        "ε(δ) = 1",
        exact_residual(&[counit.eval(&delta) - QI::one()]),
    ));
    r.push(Entry::exact(
        "antipode_delta",
        "S(δ) = δ⁻¹",
        exact_residual(&sub(&s.apply(&delta), &delta_inv)),
    ));
    let mu_inv_delta = match md.mu.inv() {
        Some(m) => scale(&m, &delta),
        None => vec![QI::zero(); n],
    };
    r.push(Entry::exact(
        "rho_delta",
        "ρ(δ) = ρ'(δ) = μ⁻¹δ",
        exact_residual(&sub(&md.rho.apply(&delta), &mu_inv_delta)).max(exact_residual(&sub(
            &md.rho_prime.apply(&delta),
            &mu_inv_delta,
        ))),
    ));
    if s_inv.is_none() {
        r.push(Entry::condition(
            "antipode_invertible",
            "S bijective",
            false,
        ));
    }

    r.push(Entry::condition(
        "kac_s_squared",
        "S² = ι",
        s2.is_identity(),
    ));
    r.push(Entry::condition("kac_delta", "δ = 1", delta == one));
    r.push(Entry::condition("kac_rho", "ρ = ι", md.rho.is_identity()));
    r.push(Entry::condition("kac_mu", "μ = 1", md.mu == QI::one()));
    r.note("mu", md.mu.to_string());
    r.note("nu", format!("{:.16e}", md.nu));
    r.note("delta", format!("{:?}", md.delta));
    r
}

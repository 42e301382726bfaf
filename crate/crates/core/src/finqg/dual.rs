use crate::linalg::{inverse, mat_vec, min_eigenvalue, nullspace, solve, CMatrix, Solution};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{Scalar, ToleranceCfg, QI};

use super::solve::gram_of;
use super::{
    exact_residual, scale, solve_antipode, solve_counit, sub, validate_structure, AlgebraSpec,
    Element, FiniteQG, FinqgError, Functional, Result,
};

/// The dual `(Â, Δ̂)` with basis `ê_i = e_iφ`, i.e. `ê_i(x) = φ(x e_i)`.
#[derive(Clone, Debug)]
pub struct DualSpec {
    pub spec: AlgebraSpec,
    /// `pairing[j][i] = ê_i(e_j) = φ(e_j e_i)`.
    pub pairing: Vec<Vec<QI>>,
    pairing_inv: Vec<Vec<QI>>,
    /// `ψ̂(â) = ε(a)`.
    pub psi_hat: Functional,
    /// `φ̂(ψa) = ε(a)`.
    pub phi_hat: Functional,
    pub phi_hat_gram_min_eigenvalue: f64,
}

impl DualSpec {
    /// Values on the basis of `A` of the dual element with coordinates `w`.
    pub fn covector(&self, w: &[QI]) -> Vec<QI> {
        mat_vec(&self.pairing, w)
    }

    /// Coordinates in `{ê_i}` of a functional given by its values on `A`'s basis.
    pub fn from_covector(&self, cov: &[QI]) -> Vec<QI> {
        mat_vec(&self.pairing_inv, cov)
    }

    /// `â = aφ`; in the basis `{ê_i}` this is the coordinate vector of `a`.
    pub fn fourier(&self, a: &[QI]) -> Vec<QI> {
        a.to_vec()
    }

    /// `a` with `aφ = ω`.
    pub fn inverse_fourier(&self, w: &[QI]) -> Vec<QI> {
        w.to_vec()
    }
}

/// `(ω₁ω₂)(x) = (ω₁⊗ω₂)Δ(x)` on covectors.
pub(crate) fn convolve(spec: &AlgebraSpec, w1: &[QI], w2: &[QI]) -> Vec<QI> {
    (0..spec.dim)
        .map(|j| {
            spec.comult[j].iter().fold(QI::zero(), |acc, (p, r, c)| {
                acc + c.clone() * w1[*p].clone() * w2[*r].clone()
            })
        })
        .collect()
}

/// `ω*(x) = conj(ω(S(x)*))` on covectors.
pub(crate) fn dual_star_cov(spec: &AlgebraSpec, s: &super::LinearMap, w: &[QI]) -> Vec<QI> {
    let f = Functional {
        covector: w.to_vec(),
    };
    (0..spec.dim)
        .map(|j| f.eval(&spec.star(&s.image(j))).conj())
        .collect()
}

/// Builds `(Â, Δ̂)` by structure constants, with `ψ̂` and `φ̂`.
pub fn dualize(qg: &FiniteQG) -> Result<DualSpec> {
    let spec = &qg.spec;
    let n = spec.dim;
    let phi = qg.phi();
    let e = |i| spec.basis(i);
    let pairing: Vec<Vec<QI>> = (0..n)
        .map(|j| (0..n).map(|i| phi.eval(&spec.mul(&e(j), &e(i)))).collect())
        .collect();
    let pairing_inv =
        inverse(&pairing).ok_or_else(|| FinqgError::Malformed("a ↦ aφ is not bijective".into()))?;
    let cov = |i: usize| -> Vec<QI> { (0..n).map(|j| pairing[j][i].clone()).collect() };
    let coords = |c: &[QI]| Element::from_dense(&mat_vec(&pairing_inv, c));

    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| coords(&convolve(spec, &cov(i), &cov(k))))
                .collect()
        })
        .collect();
    let star = (0..n)
        .map(|i| coords(&dual_star_cov(spec, &qg.antipode, &cov(i))))
        .collect();
    let unit = coords(&qg.counit.covector);

    // Δ̂(ê_i) = Σ C[p][r] ê_p⊗ê_r with Φ C Φᵀ = W, W[x][y] = ê_i(e_x e_y).
    let comult = (0..n)
        .map(|i| {
            let ci = Functional { covector: cov(i) };
            let w: Vec<Vec<QI>> = (0..n)
                .map(|x| (0..n).map(|y| ci.eval(&spec.mul(&e(x), &e(y)))).collect())
                .collect();
            let left: Vec<Vec<QI>> = crate::linalg::mat_mul(&pairing_inv, &w);
            let inv_t: Vec<Vec<QI>> = (0..n)
                .map(|r| (0..n).map(|c| pairing_inv[c][r].clone()).collect())
                .collect();
            let c = crate::linalg::mat_mul(&left, &inv_t);
            let mut terms = Vec::new();
            for (p, row) in c.iter().enumerate() {
                for (r, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        terms.push((p, r, v.clone()));
                    }
                }
            }
            terms
        })
        .collect();

    let dual = AlgebraSpec {
        name: format!("dual({})", spec.name),
        dim: n,
        basis_labels: spec.basis_labels.iter().map(|l| format!("^{l}")).collect(),
        mult,
        star,
        unit,
        comult,
    };

    let psi_hat = Functional {
        covector: qg.counit.covector.clone(),
    };
    let psi = qg.psi();
    // β_i = coordinates of ψe_i; φ̂ is fixed by φ̂(β_i) = ε(e_i).
    let betas: Vec<Vec<QI>> = (0..n)
        .map(|i| {
            let c: Vec<QI> = (0..n).map(|j| psi.eval(&spec.mul(&e(j), &e(i)))).collect();
            mat_vec(&pairing_inv, &c)
        })
        .collect();
    let phi_hat = match solve(&betas, &qg.counit.covector) {
        Solution::Unique(x) => Functional { covector: x },
        _ => {
            return Err(FinqgError::Malformed(
                "φ̂(ψa) = ε(a) has no unique solution".into(),
            ))
        }
    };
    let phi_hat_gram_min_eigenvalue =
        min_eigenvalue(&CMatrix::from_exact(&gram_of(&dual, &phi_hat)));
    Ok(DualSpec {
        spec: dual,
        pairing,
        pairing_inv,
        psi_hat,
        phi_hat,
        phi_hat_gram_min_eigenvalue,
    })
}

/// Exact checks on `(Â, Δ̂)`: Hopf axioms, `ε̂`, `Ŝ`, invariance of `ψ̂`, `φ̂`,
/// and Plancherel. `φ̂` positivity is reported, not asserted.
pub fn dual_report(qg: &FiniteQG, dual: &DualSpec) -> Result<Report> {
    let spec = &qg.spec;
    let d = &dual.spec;
    let n = spec.dim;
    let mut r = Report::new("dual");
    for mut entry in validate_structure(d)?.entries {
        entry.id = format!("dual_{}", entry.id);
        r.push(entry);
    }
    let eps_hat = solve_counit(d)?;
    let s_hat = solve_antipode(d, &eps_hat)?;
    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();

    // ε̂(ωa) = ω(a), with (ωa)(x) = ω(ax).
    let mut w = Worst::new();
    for i in 0..n {
        let om = Functional {
            covector: dual.covector(&d.basis(i)),
        };
        for a in 0..n {
            let cov: Vec<QI> = (0..n).map(|x| om.eval(&spec.mul(&e(a), &e(x)))).collect();
            let lhs = eps_hat.eval(&dual.from_covector(&cov));
            w.record(exact_residual(&[lhs - om.covector[a].clone()]), || {
                format!("(ω, a) = ({}, {})", d.label(i), lab(a))
            });
        }
    }
    r.push(w.exact("dual_counit", "ε̂(ωa) = ω(a)"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = dual.covector(&s_hat.image(i));
        let om = Functional {
            covector: dual.covector(&d.basis(i)),
        };
        let rhs: Vec<QI> = (0..n).map(|a| om.eval(&qg.antipode.image(a))).collect();
        w.record(exact_residual(&sub(&lhs, &rhs)), || d.label(i).to_string());
    }
    r.push(w.exact("dual_antipode", "Ŝ(ω)(a) = ω(S(a))"));

    let one_hat = d.unit_vec();
    let mut wl = Worst::new();
    let mut wr = Worst::new();
    for i in 0..n {
        let dl = d.delta(&d.basis(i));
        let lhs = d.slice_left(&dual.psi_hat, &dl);
        wr.record(
            exact_residual(&sub(&lhs, &scale(&dual.psi_hat.covector[i], &one_hat))),
            || d.label(i).to_string(),
        );
        let lhs = d.slice_right(&dual.phi_hat, &dl);
        wl.record(
            exact_residual(&sub(&lhs, &scale(&dual.phi_hat.covector[i], &one_hat))),
            || d.label(i).to_string(),
        );
    }
    r.push(wr.exact("psi_hat_right_invariant", "(ψ̂⊗ι)Δ̂(ω) = ψ̂(ω)1"));
    r.push(wl.exact("phi_hat_left_invariant", "(ι⊗φ̂)Δ̂(ω) = φ̂(ω)1"));

    let mut w = Worst::new();
    for i in 0..n {
        let ah = dual.fourier(&e(i));
        let lhs = dual.psi_hat.eval(&d.mul(&d.star(&ah), &ah));
        let rhs = qg.phi().eval(&spec.mul(&spec.star(&e(i)), &e(i)));
        w.record(exact_residual(&[lhs - rhs]), || lab(i));
    }
    r.push(w.exact("plancherel", "ψ̂(â*â) = φ(a*a)"));

    // ψ̂(ê_i) = ε(e_i) through the unit of Â: ε·ω = ω.
    let eps_coords = dual.from_covector(&qg.counit.covector);
    let mut w = Worst::new();
    for i in 0..n {
        let prod = d.mul(&eps_coords, &d.basis(i));
        w.record(exact_residual(&sub(&prod, &d.basis(i))), || {
            d.label(i).to_string()
        });
    }
    r.push(w.exact("counit_is_dual_unit", "εω = ω"));

    r.push(Entry::info(
        "phi_hat_gram_min_eigenvalue",
        "min eig of [φ̂(ê_r* ê_c)] (positivity of φ̂ is not asserted)",
        dual.phi_hat_gram_min_eigenvalue,
    ));
    Ok(r)
}

fn center_dim(spec: &AlgebraSpec) -> usize {
    let n = spec.dim;
    let mut rows = Vec::new();
    for j in 0..n {
        // x ↦ x e_j - e_j x, one row per output coordinate
        for t in 0..n {
            rows.push(
                (0..n)
                    .map(|i| spec.mult[i][j].get(t) - spec.mult[j][i].get(t))
                    .collect::<Vec<QI>>(),
            );
        }
    }
    nullspace(&rows, n).len()
}

fn cocommutative(spec: &AlgebraSpec) -> bool {
    (0..spec.dim).all(|i| {
        let d = spec.delta(&spec.basis(i));
        d == spec.flip(&d)
    })
}

/// Verifies that `a ↦ (ω ↦ ω(a))` is a *-isomorphism `A → Â^` intertwining
/// the comultiplications, exactly.
pub fn bidual_check(qg: &FiniteQG, cfg: &ToleranceCfg) -> Result<Report> {
    let spec = &qg.spec;
    let n = spec.dim;
    let dual = dualize(qg)?;
    let dqg = FiniteQG::build(dual.spec.clone(), cfg)?;
    let bidual = dualize(&dqg)?;
    let bb = &bidual.spec;
    let mut r = Report::new("bidual");

    // ev_a(ê_i) = ê_i(a) = pairing[a][i]
    let theta_images: Vec<Vec<QI>> = (0..n)
        .map(|a| bidual.from_covector(&dual.pairing[a]))
        .collect();
    let theta = super::LinearMap::from_images(&theta_images);
    r.push(Entry::condition(
        "bidual_bijective",
        "a ↦ ev_a is bijective",
        theta.inverse().is_some(),
    ));

    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();
    let mut w = Worst::new();
    for a in 0..n {
        for b in 0..n {
            let lhs = theta.apply(&spec.mul(&e(a), &e(b)));
            let rhs = bb.mul(&theta.image(a), &theta.image(b));
            w.record(exact_residual(&sub(&lhs, &rhs)), || {
                format!("({}, {})", lab(a), lab(b))
            });
        }
    }
    r.push(w.exact("bidual_multiplicative", "ev_{ab} = ev_a ev_b"));

    let mut w = Worst::new();
    for a in 0..n {
        let lhs = theta.apply(&spec.star(&e(a)));
        let rhs = bb.star(&theta.image(a));
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(a));
    }
    r.push(w.exact("bidual_star", "ev_{a*} = (ev_a)*"));

    let mut w = Worst::new();
    for a in 0..n {
        let lhs = bb.tensor_map(&theta, &theta, &spec.delta(&e(a)));
        let rhs = bb.delta(&theta.image(a));
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(a));
    }
    r.push(w.exact("bidual_comultiplication", "(Θ⊗Θ)Δ = Δ̂̂Θ"));

    r.push(Entry::exact(
        "bidual_unit",
        "ev_1 = 1",
        exact_residual(&sub(&theta.apply(&spec.unit_vec()), &bb.unit_vec())),
    ));

    // φ̂ from the formula is the normalised left Haar of Â up to a scalar.
    let h = &dqg.haar.phi;
    let k = dual.phi_hat.eval(&dual.spec.unit_vec());
    let res = exact_residual(&sub(&dual.phi_hat.covector, &scale(&k, &h.covector)));
    r.push(Entry::exact(
        "phi_hat_is_left_haar",
        "φ̂ = φ̂(1)·(left Haar of Â)",
        res,
    ));

    let (ca, cd) = (center_dim(spec), center_dim(&dual.spec));
    let self_dual_hint = ca == cd && cocommutative(spec) == cocommutative(&dual.spec);
    r.push(Entry::info(
        "self_duality_invariants",
        format!(
            "dim Z(A) = {ca}, dim Z(Â) = {cd}; cocommutative A: {}, Â: {}",
            cocommutative(spec),
            cocommutative(&dual.spec)
        ),
        if self_dual_hint { 0.0 } else { 1.0 },
    ));
    Ok(r)
}

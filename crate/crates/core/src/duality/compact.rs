use std::collections::HashMap;

use crate::oneparam::{unitary_rep_check, UnitaryRep};
use crate::report::{par_worst, Entry, Report, Worst};
use crate::scalars::{
    positive_power, rational_to_f64, scaled_diff, scaled_residual, Cx, Rational, Scalar,
    ToleranceCfg,
};
use crate::suq2::{monomials, poly_residual, Character, Gen, NcPoly, PbwTerm, Suq2};

use super::{
    evaluate, fourier, DualElement, DualExpr, DualKind, DualityError, HaarSide,
    MultiplierFunctional, Result, I,
};

const ZERO: Cx = Cx::new(0.0, 0.0);

fn fmt_z(z: Cx) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn mono(t: PbwTerm) -> NcPoly<Cx> {
    NcPoly::monomial(t)
}

/// `εσ_z`, with σ from the spectral calculus of ρ.
pub fn eps_sigma(e: &Suq2, z: Cx) -> Result<Character<Cx>> {
    let v = |g: Gen| -> Result<Cx> { Ok(e.counit(&e.sigma_spectral(z, &mono(g.term()))?)) };
    Ok(Character {
        value_on_a: v(Gen::A)?,
        value_on_a_star: v(Gen::AStar)?,
        value_on_c: v(Gen::C)?,
        value_on_c_star: v(Gen::CStar)?,
    })
}

/// `δ̂^{iz} = εσ_{-z}`, an element of `M(Â)`.
pub fn delta_hat_power(e: &Suq2, z: Cx) -> Result<MultiplierFunctional> {
    Ok(MultiplierFunctional::Character(eps_sigma(e, -z)?))
}

fn unimodular(e: &Suq2) -> Result<()> {
    if e.modular()?.unimodular() {
        Ok(())
    } else {
        Err(DualityError::NotRepresentable(
            "closed forms of shifted Haar states need δ = 1".into(),
        ))
    }
}

/// Rewrites `kind_z(ω)` for a shifted Haar state as another shifted Haar
/// state, using invariance of `h` under `τ` (up to `ν`) and `R`.
pub fn closed_form(e: &Suq2, kind: DualKind, z: Cx, w: &DualElement) -> Result<DualElement> {
    let DualElement::ShiftedHaar { side, a } = w else {
        return Err(DualityError::WrongEngine(
            "covector given to the SU_q(2) engine".into(),
        ));
    };
    let nu = e.modular()?.nu;
    let side = *side;
    let (side, a) = match (kind, side) {
        // ω_z = ψ δ^{-iz} τ_{-z}(a)
        (DualKind::SigmaHat, HaarSide::Left) => {
            (side, e.multiply(&e.delta_power(-I * z)?, &e.tau(-z, a)?))
        }
        (DualKind::SigmaHat, HaarSide::Right) => {
            unimodular(e)?;
            (side, e.tau(-z, a)?.scale(&positive_power(nu, z)))
        }
        (DualKind::TauHat, _) => (side, e.tau(-z, a)?.scale(&positive_power(nu, z))),
        (DualKind::SigmaHatPrime, _) => {
            unimodular(e)?;
            (side, e.tau(z, a)?.scale(&positive_power(nu, -z)))
        }
        // h∘R = h in the compact case, and R is anti-multiplicative.
        (DualKind::RHat, HaarSide::Left) => {
            unimodular(e)?;
            (HaarSide::Right, e.unitary_antipode(a)?)
        }
        (DualKind::RHat, HaarSide::Right) => {
            unimodular(e)?;
            (HaarSide::Left, e.unitary_antipode(a)?)
        }
    };
    Ok(DualElement::ShiftedHaar { side, a })
}

/// Which dual Haar functional to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualHaar {
    /// `ψ̂(â) = ε(a)`.
    PsiHat,
    /// `φ̂(ψa) = ε(a)`.
    PhiHat,
}

/// `ψ̂` or `φ̂` on a shifted Haar state; `h·a = ρ(a)·h` converts between
/// the two representations.
pub fn dual_haar_suq2(e: &Suq2, which: DualHaar, w: &DualExpr) -> Result<Cx> {
    let DualExpr::Leaf(MultiplierFunctional::Element(DualElement::ShiftedHaar { side, a })) = w
    else {
        return Err(DualityError::NotRepresentable(
            "dual Haar functionals need a single shifted Haar state".into(),
        ));
    };
    let md = e.modular()?;
    let rho = |inverse: bool| {
        a.map(|t, v| {
            let w = rational_to_f64(&md.rho_weight(t));
            v * if inverse { 1.0 / w } else { w }
        })
    };
    let rep = match (which, side) {
        (DualHaar::PsiHat, HaarSide::Right) | (DualHaar::PhiHat, HaarSide::Left) => a.clone(),
        (DualHaar::PsiHat, HaarSide::Left) => rho(false),
        (DualHaar::PhiHat, HaarSide::Right) => rho(true),
    };
    Ok(e.counit(&rep))
}

/// A functional known on the span of monomials of degree `≤ d`. Legs of
/// `Δ(t)` never exceed the degree of `t`, so products stay in the span.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedFunctional {
    pub values: Vec<Cx>,
}

struct Truncation<'a> {
    e: &'a Suq2,
    basis: Vec<PbwTerm>,
    index: HashMap<PbwTerm, usize>,
}

impl<'a> Truncation<'a> {
    fn new(e: &'a Suq2, d: usize) -> Self {
        let basis = monomials(d);
        let index = basis.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        Truncation { e, basis, index }
    }

    fn of_character(&self, c: &Character<Cx>) -> TruncatedFunctional {
        TruncatedFunctional {
            values: self.basis.iter().map(|t| c.eval(t)).collect(),
        }
    }
}

impl UnitaryRep for Truncation<'_> {
    type Value = TruncatedFunctional;

    fn at(&self, z: Cx) -> TruncatedFunctional {
        let c = eps_sigma(self.e, -z).expect("σ is available once the suite has started");
        self.of_character(&c)
    }

    fn mul(&self, x: &TruncatedFunctional, y: &TruncatedFunctional) -> TruncatedFunctional {
        let values = self
            .basis
            .iter()
            .map(|t| {
                let d = self.e.delta_mono(*t).expect("within the degree cap");
                d.iter()
                    .map(|(s, u, _, f)| *f * x.values[self.index[s]] * y.values[self.index[u]])
                    .sum()
            })
            .collect();
        TruncatedFunctional { values }
    }

    fn star(&self, x: &TruncatedFunctional) -> TruncatedFunctional {
        let values = self
            .basis
            .iter()
            .map(|t| {
                let y = self.e.star(&self.e.antipode(&mono(*t)));
                y.iter()
                    .map(|(s, c)| c * x.values[self.index[s]])
                    .sum::<Cx>()
                    .conj()
            })
            .collect();
        TruncatedFunctional { values }
    }

    fn unit(&self) -> TruncatedFunctional {
        self.of_character(&Character::counit())
    }

    fn distance(&self, x: &TruncatedFunctional, y: &TruncatedFunctional) -> f64 {
        scaled_residual(&x.values, &y.values)
    }
}

/// Test functionals: `h·a` and `a·h` for monomials `a` of degree `≤ d`.
fn test_functionals(d: usize) -> Vec<(String, DualElement)> {
    let mut out = Vec::new();
    for t in monomials(d) {
        out.push((
            format!("h·({t})"),
            DualElement::ShiftedHaar {
                side: HaarSide::Left,
                a: mono(t),
            },
        ));
        out.push((format!("({t})·h"), fourier(&mono(t))));
    }
    out
}

/// The dual analytic maps, `δ̂` and the dual Haar functionals on
/// Pol(SU_q(2)), as identities of evaluations.
pub fn suq2_duality_report(
    e: &Suq2,
    degree: usize,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Result<Report> {
    let d = degree.min(4);
    e.check_cap(d)?;
    let tol = cfg.abs_tol;
    let xs = monomials(d);
    let omegas = test_functionals(2);
    let small = test_functionals(1);
    let ns = small.len();
    let mut r = Report::new("duality");
    r.note("degree", d.to_string());

    // Closed forms against the defining formulas.
    let kinds = [
        (
            DualKind::SigmaHat,
            "sigma_hat_closed_form",
            "σ̂_z(ω)(x) = ω(τ_z(x)δ^{-iz})",
        ),
        (DualKind::TauHat, "tau_hat_closed_form", "τ̂_z(ω) = ωτ_z"),
        (DualKind::RHat, "r_hat_closed_form", "R̂(ω) = ωR"),
        (
            DualKind::SigmaHatPrime,
            "sigma_hat_prime_closed_form",
            "σ̂'_z(ω)(x) = ω(δ^{-iz}τ_{-z}(x))",
        ),
    ];
    for (kind, id, anchor) in kinds {
        let zs: Vec<Cx> = if kind == DualKind::RHat {
            vec![ZERO]
        } else {
            z_grid.to_vec()
        };
        let cases: Vec<(Cx, usize)> = zs
            .iter()
            .flat_map(|z| (0..omegas.len()).map(move |k| (*z, k)))
            .collect();
        let w = par_worst(&cases, |(z, k), worst| -> Result<()> {
            let (name, om) = &omegas[*k];
            let def = DualExpr::element(om.clone()).analytic(kind, *z);
            let closed = DualExpr::element(closed_form(e, kind, *z, om)?);
            for t in &xs {
                let x = mono(*t);
                let res = scaled_diff(evaluate(e, &def, &x)?, evaluate(e, &closed, &x)?);
                worst.record(res, || format!("z={}, ω={name}, x={t}", fmt_z(*z)));
            }
            Ok(())
        })?;
        r.push(w.within(id, anchor, tol));
    }

    // ω_z for ω = ψa by definition and by its closed form, and φ̂(ω_z) = φ̂(ω).
    let lefts: Vec<&(String, DualElement)> = omegas
        .iter()
        .filter(|(_, w)| {
            matches!(
                w,
                DualElement::ShiftedHaar {
                    side: HaarSide::Left,
                    ..
                }
            )
        })
        .collect();
    let cases: Vec<(Cx, usize)> = z_grid
        .iter()
        .flat_map(|z| (0..lefts.len()).map(move |k| (*z, k)))
        .collect();
    let w = par_worst(&cases, |(z, k), worst| -> Result<()> {
        let (name, om) = lefts[*k];
        let closed = DualExpr::element(closed_form(e, DualKind::SigmaHat, *z, om)?);
        let lhs = dual_haar_suq2(e, DualHaar::PhiHat, &closed)?;
        let rhs = dual_haar_suq2(e, DualHaar::PhiHat, &DualExpr::element(om.clone()))?;
        worst.record(scaled_diff(lhs, rhs), || {
            format!("z={}, ω={name}", fmt_z(*z))
        });
        Ok(())
    })?;
    r.push(w.within("phi_hat_omega_z", "φ̂(ω_z) = φ̂(ω)", tol));

    // One-parameter group laws of the transformed families.
    let pairs: Vec<(Cx, Cx, usize)> = z_grid
        .iter()
        .flat_map(|y| {
            z_grid
                .iter()
                .flat_map(move |z| (0..ns).map(move |k| (*y, *z, k)))
        })
        .collect();
    for (kind, id) in [
        (DualKind::SigmaHat, "sigma_hat_group_law"),
        (DualKind::TauHat, "tau_hat_group_law"),
    ] {
        let w = par_worst(&pairs, |(y, z, k), worst| -> Result<()> {
            let (name, om) = &small[*k];
            let l = DualExpr::element(om.clone());
            let nested = l.clone().analytic(kind, *z).analytic(kind, *y);
            let direct = l.analytic(kind, *y + *z);
            for t in &xs {
                let x = mono(*t);
                let res = scaled_diff(evaluate(e, &nested, &x)?, evaluate(e, &direct, &x)?);
                worst.record(res, || {
                    format!("y={}, z={}, ω={name}, x={t}", fmt_z(*y), fmt_z(*z))
                });
            }
            Ok(())
        })?;
        r.push(w.within(id, &format!("{kind}_(y+z) = {kind}_y {kind}_z"), tol));
    }

    let cases: Vec<(Cx, usize)> = z_grid
        .iter()
        .flat_map(|z| (0..ns).map(move |k| (*z, k)))
        .collect();
    let w = par_worst(&cases, |(z, k), worst| -> Result<()> {
        let (name, om) = &small[*k];
        let l = DualExpr::element(om.clone());
        let lhs = l.clone().analytic(DualKind::SigmaHat, *z).star();
        let rhs = l.star().analytic(DualKind::SigmaHat, z.conj());
        for t in &xs {
            let x = mono(*t);
            let res = scaled_diff(evaluate(e, &lhs, &x)?, evaluate(e, &rhs, &x)?);
            worst.record(res, || format!("z={}, ω={name}, x={t}", fmt_z(*z)));
        }
        Ok(())
    })?;
    r.push(w.within("sigma_hat_star_law", "σ̂_z(ω)* = σ̂_{z̄}(ω*)", tol));

    let w = par_worst(&cases, |(z, k), worst| -> Result<()> {
        let (name, om) = &small[*k];
        let l = DualExpr::element(om.clone());
        let lhs = l.clone().analytic(DualKind::SigmaHatPrime, *z);
        let rhs = l
            .analytic(DualKind::RHat, ZERO)
            .analytic(DualKind::SigmaHat, -*z)
            .analytic(DualKind::RHat, ZERO);
        for t in &xs {
            let x = mono(*t);
            let res = scaled_diff(evaluate(e, &lhs, &x)?, evaluate(e, &rhs, &x)?);
            worst.record(res, || format!("z={}, ω={name}, x={t}", fmt_z(*z)));
        }
        Ok(())
    })?;
    r.push(w.within("sigma_hat_prime_r", "σ̂'_z = R̂σ̂_{-z}R̂", tol));

    let x3 = monomials(d.min(3));
    let prod_cases: Vec<(Cx, usize, usize)> = z_grid
        .iter()
        .flat_map(|z| (0..ns).flat_map(move |i| (0..ns).map(move |j| (*z, i, j))))
        .collect();
    let w = par_worst(&prod_cases, |(z, i, j), worst| -> Result<()> {
        let (n1, w1) = &small[*i];
        let (n2, w2) = &small[*j];
        let (a, b) = (DualExpr::element(w1.clone()), DualExpr::element(w2.clone()));
        let lhs = a.clone().times(b.clone()).analytic(DualKind::SigmaHat, *z);
        let rhs = a
            .analytic(DualKind::SigmaHat, *z)
            .times(b.analytic(DualKind::SigmaHat, *z));
        for t in &x3 {
            let x = mono(*t);
            let res = scaled_diff(evaluate(e, &lhs, &x)?, evaluate(e, &rhs, &x)?);
            worst.record(res, || {
                format!("z={}, (ω, θ)=({n1}, {n2}), x={t}", fmt_z(*z))
            });
        }
        Ok(())
    })?;
    r.push(w.within("sigma_hat_multiplicative", "(ωθ)_z = ω_z θ_z", tol));

    let mut unit = Worst::new();
    let mut s2 = Worst::new();
    let eps = DualExpr::character(Character::counit());
    for (name, om) in &omegas {
        let l = DualExpr::element(om.clone());
        for t in &x3 {
            let x = mono(*t);
            let v = evaluate(e, &l, &x)?;
            let a = evaluate(e, &eps.clone().times(l.clone()), &x)?;
            let b = evaluate(e, &l.clone().times(eps.clone()), &x)?;
            unit.record(scaled_diff(a, v).max(scaled_diff(b, v)), || {
                format!("ω={name}, x={t}")
            });
            let lhs = evaluate(e, &l.clone().antipode().antipode(), &x)?;
            let rhs = evaluate(e, &l.clone().analytic(DualKind::TauHat, -I), &x)?;
            s2.record(scaled_diff(lhs, rhs), || format!("ω={name}, x={t}"));
        }
    }
    r.push(unit.within("counit_is_dual_unit", "εω = ω = ωε", tol));
    r.push(s2.within("dual_antipode_squared", "Ŝ²(ω) = ωS² = τ̂_{-i}(ω)", tol));

    r.extend(delta_hat_report(e, d, z_grid, cfg)?);
    Ok(r)
}

fn delta_hat_report(e: &Suq2, d: usize, z_grid: &[Cx], cfg: &ToleranceCfg) -> Result<Report> {
    let tol = cfg.abs_tol;
    let xs = monomials(d);
    let half = monomials(d / 2);
    let mut r = Report::new("delta_hat");

    let a = mono(Gen::A.term());
    let at_i = evaluate(e, &DualExpr::Leaf(delta_hat_power(e, I)?), &a)?;
    r.note(
        "delta_hat_at_i_on_a",
        format!("{:.16e}{:+.16e}i", at_i.re, at_i.im),
    );
    r.push(Entry::exact(
        "delta_hat_zero",
        "δ̂^{i0} = ε",
        match delta_hat_power(e, ZERO)? {
            MultiplierFunctional::Character(c) => {
                let eps = Character::<Cx>::counit();
                [
                    c.value_on_a - eps.value_on_a,
                    c.value_on_a_star - eps.value_on_a_star,
                    c.value_on_c - eps.value_on_c,
                    c.value_on_c_star - eps.value_on_c_star,
                ]
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
            }
            MultiplierFunctional::Element(_) => 1.0,
        },
    ));

    let cases: Vec<Cx> = z_grid.to_vec();
    let w = par_worst(&cases, |z, worst| -> Result<()> {
        for s in &half {
            for t in &half {
                let (x, y) = (mono(*s), mono(*t));
                let u = |p: &NcPoly<Cx>| -> Result<Cx> { Ok(e.counit(&e.sigma_spectral(-*z, p)?)) };
                let res = scaled_diff(u(&e.multiply(&x, &y))?, u(&x)? * u(&y)?);
                worst.record(res, || format!("z={}, (a, b)=({s}, {t})", fmt_z(*z)));
            }
        }
        Ok(())
    })?;
    r.push(w.within(
        "delta_hat_character",
        "δ̂^{iz} = εσ_{-z} is multiplicative",
        tol,
    ));

    let w = par_worst(&cases, |z, worst| -> Result<()> {
        let es = eps_sigma(e, *z)?;
        for t in &xs {
            let x = mono(*t);
            let res = scaled_diff(es.eval_poly(&x), e.counit(&e.sigma_prime(*z, &x)?));
            worst.record(res, || format!("z={}, x={t}", fmt_z(*z)));
        }
        Ok(())
    })?;
    r.push(w.within("eps_sigma_prime", "εσ_z = εσ'_z", tol));

    let w = par_worst(&cases, |z, worst| -> Result<()> {
        let u = eps_sigma(e, -*z)?;
        for t in &xs {
            let x = mono(*t);
            let dx = e.comultiply(&x)?;
            let right = e.slice_right(|s| u.eval(s), &dx);
            let want_r = e.tau(*z, &e.sigma_spectral(-*z, &x)?)?;
            let left = e.slice_left(|s| u.eval(s), &dx);
            let want_l = e.tau(-*z, &e.sigma_prime(-*z, &x)?)?;
            let in_a = right.degree() <= t.degree() && left.degree() <= t.degree();
            let res = poly_residual(&right, &want_r).max(poly_residual(&left, &want_l));
            worst.record(if in_a { res } else { f64::INFINITY }, || {
                format!("z={}, a={t}", fmt_z(*z))
            });
        }
        Ok(())
    })?;
    r.push(w.within(
        "delta_hat_multiplier",
        "(ι⊙δ̂^{iz})Δ(a) = τ_zσ_{-z}(a), (δ̂^{iz}⊙ι)Δ(a) = τ_{-z}σ'_{-z}(a), both in A",
        tol,
    ));

    let trunc = Truncation::new(e, d.min(3));
    r.extend_prefixed("delta_hat", unitary_rep_check(&trunc, z_grid, cfg));
    Ok(r)
}

/// The compact-case link `δ̂^z = f_{-2z}` with its two supporting sandwich
/// identities and the character algebra of `f`.
pub fn f_link_check(e: &Suq2, degree: usize, z_grid: &[Cx], cfg: &ToleranceCfg) -> Result<Report> {
    let d = degree.min(e.degree_cap());
    e.check_cap(d)?;
    let tol = cfg.abs_tol;
    let md = e.modular()?;
    let sign = md.f_sign;
    let xs = monomials(d);
    let mut r = Report::new("f_link");
    r.note("f_sign", sign.to_string());
    r.note(
        "f_sign_source",
        if md.f_sign_resolved {
            "resolved"
        } else {
            "forced by fault setting"
        },
    );

    let cases: Vec<Cx> = z_grid.to_vec();
    let w = par_worst(&cases, |z, worst| -> Result<()> {
        let (l, rr) = (eps_sigma(e, *z)?, eps_sigma(e, -*z)?);
        let dl = e.delta_power(I * *z)?;
        let dr = e.delta_power(-I * *z)?;
        for t in &xs {
            let x = mono(*t);
            let lhs = e.sandwich(&l, &x, &rr)?;
            let rhs = e.multiply(&e.multiply(&dl, &e.tau(*z * 2.0, &x)?), &dr);
            worst.record(poly_residual(&lhs, &rhs), || {
                format!("z={}, a={t}", fmt_z(*z))
            });
        }
        Ok(())
    })?;
    r.push(w.within(
        "sandwich_tau",
        "(εσ_z⊙ι⊙εσ_{-z})Δ⁽²⁾(a) = δ^{iz}τ_{2z}(a)δ^{-iz}",
        tol,
    ));

    let w = par_worst(&cases, |z, worst| -> Result<()> {
        let l = eps_sigma(e, *z)?;
        let dl = e.delta_power(I * *z)?;
        let dr = e.delta_power(-I * *z)?;
        for t in &xs {
            let x = mono(*t);
            let lhs = e.sandwich(&l, &x, &l)?;
            let rhs = e.multiply(&e.multiply(&dl, &e.sigma_spectral(*z * 2.0, &x)?), &dr);
            worst.record(poly_residual(&lhs, &rhs), || {
                format!("z={}, a={t}", fmt_z(*z))
            });
        }
        Ok(())
    })?;
    r.push(w.within(
        "sandwich_sigma",
        "(εσ_z⊙ι⊙εσ_z)Δ⁽²⁾(a) = δ^{iz}σ_{2z}(a)δ^{-iz}",
        tol,
    ));

    let mut w = Worst::new();
    let z = -I * 0.5;
    let (l, rr) = (eps_sigma(e, z)?, eps_sigma(e, -z)?);
    for t in &xs {
        let x = mono(*t);
        w.record(
            poly_residual(&e.sandwich(&l, &x, &rr)?, &e.s_squared(&x)),
            || t.to_string(),
        );
    }
    r.push(w.within(
        "sandwich_s_squared",
        "(εσ_{-i/2}⊙ι⊙εσ_{i/2})Δ⁽²⁾ = τ_{-i} = S²",
        tol,
    ));

    let mut w = Worst::new();
    for &z in z_grid {
        // δ̂^z = δ̂^{i(-iz)} = εσ_{iz}
        let dh = eps_sigma(e, I * z)?;
        let f = e.f_character(sign, -2.0 * z);
        for g in Gen::ALL {
            let t = g.term();
            w.record(scaled_diff(dh.eval(&t), f.eval(&t)), || {
                format!("z={}, generator {t}", fmt_z(z))
            });
        }
    }
    r.push(w.within("delta_hat_f_link", "δ̂^z = f_{-2z} on generators", tol));

    let pairs: Vec<(Cx, Cx)> = z_grid
        .iter()
        .flat_map(|y| z_grid.iter().map(move |z| (*y, *z)))
        .collect();
    let w = par_worst(&pairs, |(y, z), worst| -> Result<()> {
        let (fy, fz, fyz) = (
            e.f_character(sign, *y),
            e.f_character(sign, *z),
            e.f_character(sign, *y + *z),
        );
        for t in &xs {
            let x = mono(*t);
            let res = scaled_diff(e.convolve_characters(&fy, &fz, &x)?, fyz.eval_poly(&x));
            worst.record(res, || format!("y={}, z={}, x={t}", fmt_z(*y), fmt_z(*z)));
        }
        Ok(())
    })?;
    r.push(w.within("f_group", "f_{y+z} = f_y f_z", tol));

    let f0 = e.f_character_exact(sign, 0);
    let eps = Character::<Rational>::counit();
    let mut w = Worst::new();
    for t in &xs {
        let v = f0.eval(t) - eps.eval(t);
        w.record(
            if Scalar::is_zero(&v) {
                0.0
            } else {
                v.modulus()
            },
            || t.to_string(),
        );
    }
    r.push(w.exact("f_zero", "f_0 = ε"));

    let mut held = true;
    for &z in z_grid {
        let f = e.f_character(sign, z);
        for t in &xs {
            let dx = e.comultiply(&mono(*t))?;
            let l = e.slice_left(|s| f.eval(s), &dx);
            let rr = e.slice_right(|s| f.eval(s), &dx);
            held &= l.degree() <= t.degree() && rr.degree() <= t.degree();
        }
    }
    r.push(Entry::condition(
        "f_multiplier",
        "(f_z⊙ι)Δ(x), (ι⊙f_z)Δ(x) ∈ A",
        held,
    ));
    Ok(r)
}

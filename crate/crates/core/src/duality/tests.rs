use super::*;
use crate::finqg::{BundledInstance, FiniteQG};
use crate::oneparam::default_z_grid;
use crate::scalars::{rat, Scalar, ToleranceCfg};
use crate::suq2::{FSign, Gen, PbwTerm};

fn cfg() -> ToleranceCfg {
    ToleranceCfg::default()
}

fn build(b: BundledInstance) -> FiniteQG {
    FiniteQG::build(b.spec(), &cfg()).unwrap()
}

fn cov(w: &DualElement) -> Vec<QI> {
    match w {
        DualElement::FiniteCovector(c) => c.clone(),
        _ => panic!("expected a covector"),
    }
}

fn leaf(c: &[QI]) -> DualExpr {
    DualExpr::element(DualElement::FiniteCovector(c.to_vec()))
}

fn q(n: i64, d: i64) -> QI {
    QI::real(rat(n, d))
}

fn suq2(n: i64, d: i64) -> Suq2 {
    Suq2::new(rat(n, d), 6).unwrap()
}

fn m(t: PbwTerm) -> NcPoly<Cx> {
    NcPoly::monomial(t)
}

#[test]
fn fourier_of_unit_is_the_haar_functional() {
    let qg = build(BundledInstance::CZ2);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    let w = cov(&fd.fourier(&qg.spec.unit_vec()));
    assert_eq!(w, qg.phi().covector);
    // h(e) = 1, h(g) = 0 on C[Z2]
    assert_eq!(w, vec![q(1, 1), q(0, 1)]);
    assert_eq!(fd.inverse_fourier(&w), qg.spec.unit_vec());
}

#[test]
fn convolution_on_a_group_algebra_is_pointwise() {
    // Δg = g⊗g, so (ω₁ω₂)(g) = ω₁(g)ω₂(g).
    let qg = build(BundledInstance::CS3);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    let n = fd.dim();
    let w1: Vec<QI> = (0..n).map(|i| q(i as i64 + 1, 2)).collect();
    let w2: Vec<QI> = (0..n).map(|i| q(3 - i as i64, 5)).collect();
    let (w, c) = fd.dual_multiply(&w1, &w2);
    let want: Vec<QI> = w1
        .iter()
        .zip(&w2)
        .map(|(a, b)| a.clone() * b.clone())
        .collect();
    assert_eq!(w, want);
    assert_eq!(cov(&fd.fourier(&c)), w);
}

#[test]
fn counit_is_the_dual_unit() {
    let qg = build(BundledInstance::KacPaljutkin);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    let eps = leaf(&qg.counit.covector);
    let w = cov(&fd.fourier(&qg.spec.basis(3)));
    assert_eq!(fd.covector(&eps.clone().times(leaf(&w))).unwrap(), w);
    assert_eq!(fd.covector(&leaf(&w).times(eps)).unwrap(), w);
}

#[test]
fn dual_haar_functionals_on_fourier_images() {
    // ψ̂(â) = ε(a) with ε(g) = 1 on a group algebra.
    let qg = build(BundledInstance::CZ2);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    let g = qg.spec.basis(1);
    assert_eq!(fd.psi_hat(&cov(&fd.fourier(&g))), q(1, 1));
}

#[test]
fn kac_instances_have_trivial_sigma_hat_and_involutive_dual_antipode() {
    for b in BundledInstance::ALL {
        let qg = build(b);
        let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
        assert!(fd.is_kac(), "{}", b.name());
        for i in 0..fd.dim() {
            let w = cov(&fd.fourier(&qg.spec.basis(i)));
            let s = fd
                .covector(&leaf(&w).analytic(DualKind::SigmaHat, Cx::new(0.3, -0.7)))
                .unwrap();
            assert_eq!(s, w, "{} {i}", b.name());
            assert_eq!(fd.dual_antipode(&fd.dual_antipode(&w)), w);
            let r = fd
                .covector(&leaf(&w).analytic(DualKind::RHat, Cx::new(0.0, 0.0)))
                .unwrap();
            assert_eq!(r, fd.dual_antipode(&w));
        }
    }
}

#[test]
fn delta_hat_is_the_counit_on_kac_instances() {
    let qg = build(BundledInstance::KacPaljutkin);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    let eps = qg.spec.to_cx(&qg.counit.covector);
    for z in default_z_grid() {
        let d = fd.delta_hat_power(z);
        for (a, b) in d.iter().zip(&eps) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn finite_duality_report_passes_on_bundled_instances() {
    let grid = default_z_grid();
    for b in BundledInstance::ALL {
        let qg = build(b);
        let r = finite_duality_report(&qg, &grid, &cfg()).unwrap();
        assert!(r.pass(), "{}\n{r}", b.name());
    }
}

#[test]
fn sigma_hat_of_fourier_c_on_c_star() {
    // ω = c·h, σ̂_i(ω)(c*) = h(τ_i(c*)c) = q² h(cc*) = q²/(1 + q²) = 1/5 at q = 1/2.
    let e = suq2(1, 2);
    let w = fourier(&m(Gen::C.term()));
    let x = m(Gen::CStar.term());
    let def = DualExpr::element(w.clone()).analytic(DualKind::SigmaHat, I);
    let v = evaluate(&e, &def, &x).unwrap();
    assert!((v - Cx::new(0.2, 0.0)).norm() < 1e-12, "{v}");
    let closed = closed_form(&e, DualKind::SigmaHat, I, &w).unwrap();
    let v2 = evaluate(&e, &DualExpr::element(closed), &x).unwrap();
    assert!((v - v2).norm() < 1e-12);
}

#[test]
fn omega_z_closed_form_preserves_phi_hat() {
    let e = suq2(1, 3);
    let a = m(PbwTerm::new(0, 1, 1)).add(&NcPoly::one());
    let w = DualElement::ShiftedHaar {
        side: HaarSide::Left,
        a,
    };
    let before = dual_haar_suq2(&e, DualHaar::PhiHat, &DualExpr::element(w.clone())).unwrap();
    assert!((before - Cx::new(1.0, 0.0)).norm() < 1e-12);
    for z in default_z_grid() {
        let wz = closed_form(&e, DualKind::SigmaHat, z, &w).unwrap();
        let after = dual_haar_suq2(&e, DualHaar::PhiHat, &DualExpr::element(wz)).unwrap();
        assert!((after - before).norm() < 1e-10, "z={z}");
    }
}

#[test]
fn psi_hat_of_fourier_unit_is_one() {
    let e = suq2(1, 2);
    let w = DualExpr::element(fourier(&NcPoly::one()));
    let v = dual_haar_suq2(&e, DualHaar::PsiHat, &w).unwrap();
    assert!((v - Cx::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn delta_hat_values() {
    let e = suq2(1, 2);
    let a = Gen::A.term();
    match delta_hat_power(&e, Cx::new(0.0, 0.0)).unwrap() {
        MultiplierFunctional::Character(c) => {
            assert!((c.eval(&a) - Cx::new(1.0, 0.0)).norm() < 1e-14);
            assert!(c.eval(&Gen::C.term()).norm() < 1e-14);
        }
        _ => panic!("δ̂ is a character"),
    }
    // δ̂^1 = εσ_i, and εσ_i(a) = q² = f_{-2}(a).
    let d1 = eps_sigma(&e, I).unwrap();
    let f = e.f_character(FSign::Negative, Cx::new(-2.0, 0.0));
    assert!((d1.eval(&a) - Cx::new(0.25, 0.0)).norm() < 1e-12);
    assert!((f.eval(&a) - Cx::new(0.25, 0.0)).norm() < 1e-12);
}

#[test]
fn suq2_duality_and_f_link_pass() {
    let grid = default_z_grid();
    for (n, d) in [(1, 2), (1, 3), (9, 10)] {
        let e = suq2(n, d);
        let r = suq2_duality_report(&e, 4, &grid, &cfg()).unwrap();
        assert!(r.pass(), "q={n}/{d}\n{r}");
        let f = f_link_check(&e, 4, &grid, &cfg()).unwrap();
        assert!(f.pass(), "q={n}/{d}\n{f}");
    }
}

#[test]
fn engines_reject_foreign_elements() {
    let e = suq2(1, 2);
    let cv = DualElement::FiniteCovector(vec![QI::one()]);
    assert!(matches!(
        closed_form(&e, DualKind::TauHat, I, &cv),
        Err(DualityError::WrongEngine(_))
    ));
    assert!(matches!(
        evaluate(&e, &DualExpr::element(cv), &NcPoly::one()),
        Err(DualityError::WrongEngine(_))
    ));
    let qg = build(BundledInstance::CZ2);
    let fd = FiniteDuality::new(&qg, &cfg()).unwrap();
    assert!(matches!(
        fd.covector(&DualExpr::element(fourier(&NcPoly::one()))),
        Err(DualityError::WrongEngine(_))
    ));
    assert_eq!("R_hat".parse::<DualKind>().unwrap(), DualKind::RHat);
    assert!(matches!(
        "x".parse::<DualKind>(),
        Err(DualityError::UnknownKind(_))
    ));
}

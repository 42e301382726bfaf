use proptest::prelude::*;

use super::suites::{confluence_residual, haar_oracle_degree2};
use super::*;
use crate::oneparam::default_z_grid;
use crate::scalars::{rat, rational_to_f64, ToleranceCfg};

fn engine(n: i64, d: i64) -> Suq2 {
    Suq2::new(rat(n, d), 6).unwrap()
}

fn m(k: i32, l: u32, mm: u32) -> NcPoly<Rational> {
    NcPoly::monomial(PbwTerm::new(k, l, mm))
}

fn gens_of(t: PbwTerm) -> Vec<Gen> {
    let mut w = Vec::new();
    let g = if t.k >= 0 { Gen::A } else { Gen::AStar };
    w.extend(std::iter::repeat_n(g, t.k.unsigned_abs() as usize));
    w.extend(std::iter::repeat_n(Gen::C, t.l as usize));
    w.extend(std::iter::repeat_n(Gen::CStar, t.m as usize));
    w
}

#[test]
fn normal_form_small_words() {
    let q = rat(1, 2);
    // ca = q⁻¹ac
    assert_eq!(
        normal_form(&[Gen::C, Gen::A], &q),
        m(1, 1, 0).scale(&rat(2, 1))
    );
    // aa* = 1 - q²cc*
    let want = NcPoly::one().sub(&m(0, 1, 1).scale(&rat(1, 4)));
    assert_eq!(normal_form(&[Gen::A, Gen::AStar], &q), want);
    // a*a = 1 - cc*
    let want = NcPoly::one().sub(&m(0, 1, 1));
    assert_eq!(normal_form(&[Gen::AStar, Gen::A], &q), want);
    assert_eq!(normal_form(&[Gen::CStar, Gen::C], &q), m(0, 1, 1));
    assert_eq!(normal_form(&[], &q), NcPoly::one());
}

#[test]
fn engine_matches_rewriting_on_all_short_words() {
    for (n, d) in [(1, 2), (1, 3), (9, 10)] {
        let e = engine(n, d);
        let mut ws = vec![vec![]];
        for _ in 0..4 {
            ws = ws
                .iter()
                .flat_map(|w: &Vec<Gen>| {
                    Gen::ALL.iter().map(move |g| {
                        let mut v = w.clone();
                        v.push(*g);
                        v
                    })
                })
                .collect();
            for w in &ws {
                assert_eq!(confluence_residual(&e, w), 0.0, "q={n}/{d} word {w:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_words_are_confluent(w in proptest::collection::vec(0usize..4, 0..=8),
                                  qi in 0usize..3) {
        let e = { let (n, d) = [(1, 2), (1, 3), (9, 10)][qi]; engine(n, d) };
        let w: Vec<Gen> = w.into_iter().map(|i| Gen::ALL[i]).collect();
        prop_assert_eq!(confluence_residual(&e, &w), 0.0);
        prop_assert_eq!(e.word::<Rational>(&w), normal_form(&w, e.q()));
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(
        k1 in -2i32..=2, l1 in 0u32..2, m1 in 0u32..2,
        k2 in -2i32..=2, l2 in 0u32..2, m2 in 0u32..2,
    ) {
        let e = engine(1, 3);
        let (x, y) = (m(k1, l1, m1), m(k2, l2, m2));
        prop_assert_eq!(e.star(&e.star(&x)), x.clone());
        prop_assert_eq!(e.star(&e.multiply(&x, &y)), e.multiply(&e.star(&y), &e.star(&x)));
    }

    #[test]
    fn antipode_is_antimultiplicative_and_squares_diagonally(
        k1 in -2i32..=2, l1 in 0u32..2, m1 in 0u32..2,
        k2 in -2i32..=2, l2 in 0u32..2, m2 in 0u32..2,
    ) {
        let e = engine(1, 2);
        let (x, y) = (m(k1, l1, m1), m(k2, l2, m2));
        prop_assert_eq!(e.antipode(&e.multiply(&x, &y)),
                        e.multiply(&e.antipode(&y), &e.antipode(&x)));
        let s2 = e.s_squared(&x);
        prop_assert_eq!(s2.len(), 1);
        prop_assert!(s2.iter().all(|(t, _)| *t == PbwTerm::new(k1, l1, m1)));
    }
}

#[test]
fn closed_form_antipode_matches_generator_images() {
    let e = engine(1, 2);
    let q = e.q().clone();
    let image = |g: Gen| -> NcPoly<Rational> {
        match g {
            Gen::A => m(-1, 0, 0),
            Gen::AStar => m(1, 0, 0),
            Gen::C => m(0, 1, 0).scale(&-q.clone()),
            Gen::CStar => m(0, 0, 1).scale(&-(<Rational as Scalar>::one() / q.clone())),
        }
    };
    for t in monomials(6) {
        let oracle = gens_of(t)
            .iter()
            .rev()
            .fold(NcPoly::one(), |acc, g| e.multiply(&acc, &image(*g)));
        assert_eq!(e.antipode(&NcPoly::monomial(t)), oracle, "{t}");
    }
}

#[test]
fn antipode_values_on_c() {
    let e = engine(1, 2);
    assert_eq!(e.antipode(&m(0, 1, 0)), m(0, 1, 0).scale(&rat(-1, 2)));
    assert_eq!(e.s_squared(&m(0, 1, 0)), m(0, 1, 0).scale(&rat(1, 4)));
}

#[test]
fn haar_matches_invariance_oracle() {
    for (n, d) in [(1, 2), (1, 3), (9, 10)] {
        let e = engine(n, d);
        let oracle = haar_oracle_degree2(&e)
            .unwrap()
            .expect("unique invariant state");
        for t in monomials(2) {
            assert_eq!(e.haar_mono(&t), oracle[&t], "q={n}/{d} {t}");
        }
    }
    let e = engine(1, 2);
    assert_eq!(e.haar_mono(&PbwTerm::new(0, 1, 1)), rat(4, 5));
    assert_eq!(e.haar_mono(&PbwTerm::new(1, 0, 0)), rat(0, 1));
    // (1 - q²)/(1 - q⁶) at q = 1/2
    assert_eq!(e.haar_mono(&PbwTerm::new(0, 2, 2)), rat(16, 21));
}

#[test]
fn shifted_haar_breaks_invariance_by_at_least_the_shift() {
    let eps = rat(1, 1000);
    let faults = Suq2Faults {
        haar_cc_shift: Some(eps.clone()),
        f_sign: None,
    };
    let e = Suq2::with_faults(rat(1, 2), 6, faults).unwrap();
    let r = haar_invariance_residual(&e, 4, &ToleranceCfg::default()).unwrap();
    assert!(!r.pass());
    let left = r.get("left_invariance").unwrap();
    assert!(left.residual >= 1e-3, "{r}");
}

#[test]
fn coproduct_laws_on_generators() {
    let e = engine(1, 2);
    let c = m(0, 1, 0);
    let d = e.comultiply(&c).unwrap();
    let eps = e.slice_left(|t| e.counit_mono::<Rational>(t), &d);
    assert_eq!(eps, c);
    let mut want = TensorPoly::zero();
    want.add_term(PbwTerm::new(0, 1, 0), PbwTerm::new(1, 0, 0), rat(1, 1));
    want.add_term(PbwTerm::new(-1, 0, 0), PbwTerm::new(0, 1, 0), rat(1, 1));
    assert_eq!(d.sub(&want).len(), 0);
}

#[test]
fn degree_cap_is_enforced() {
    let e = engine(1, 2);
    let err = e.comultiply(&m(7, 0, 0)).unwrap_err();
    assert!(matches!(err, Suq2Error::DegreeCap { degree: 7, cap: 6 }));
}

#[test]
fn hopf_and_haar_suites_pass_exactly() {
    for (n, d) in [(1, 2), (1, 3), (9, 10)] {
        let e = engine(n, d);
        let h = hopf_report(&e, 6).unwrap();
        assert!(h.pass(), "{h}");
        assert_eq!(h.max_residual(), 0.0, "{h}");
        let r = haar_invariance_residual(&e, 6, &ToleranceCfg::default()).unwrap();
        assert!(r.pass(), "{r}");
    }
}

#[test]
fn modular_data_and_f_sign() {
    let e = engine(1, 2);
    let md = e.modular().unwrap();
    assert_eq!(md.f_sign, FSign::Negative);
    assert!(md.f_sign_resolved);
    assert!(md.unimodular());
    assert_eq!(md.delta, NcPoly::one());
    assert_eq!(md.mu, rat(1, 1));
    assert!((md.nu - 1.0).abs() < 1e-12);
    // ρ(a) = q⁻²a, ρ(c) = c
    assert_eq!(md.rho_generators[0], m(1, 0, 0).scale(&rat(4, 1)));
    assert_eq!(md.rho_generators[2], m(0, 1, 0));
    let (s2, kms) = md.f_constraints[1];
    assert!(
        s2 > 0.0 && kms > 0.0,
        "positive sign must fail a constraint"
    );
    let r = modular_report(&e, 6).unwrap();
    assert!(r.pass(), "{r}");
}

#[test]
fn forced_wrong_f_sign_is_reported() {
    let faults = Suq2Faults {
        haar_cc_shift: None,
        f_sign: Some(FSign::Positive),
    };
    let e = Suq2::with_faults(rat(1, 2), 6, faults).unwrap();
    let r = modular_report(&e, 4).unwrap();
    assert!(!r.pass());
    assert!(!r.get("f_s_squared").unwrap().pass || !r.get("f_rho").unwrap().pass);
}

#[test]
fn unitary_antipode_on_c_and_involution() {
    let e = engine(1, 2);
    let c = m(0, 1, 0).to_cx();
    let rc = e.unitary_antipode(&c).unwrap();
    assert!(poly_residual(&rc, &c.scale(&Cx::new(-1.0, 0.0))) < 1e-12);
    for t in monomials(4) {
        let x = NcPoly::<Cx>::monomial(t);
        let back = e
            .unitary_antipode(&e.unitary_antipode(&x).unwrap())
            .unwrap();
        assert!(poly_residual(&back, &x) < 1e-12, "{t}");
    }
}

#[test]
fn analytic_groups_at_minus_i() {
    let e = engine(1, 3);
    let i = Cx::new(0.0, 1.0);
    let md = e.modular().unwrap();
    for t in monomials(4) {
        let x = NcPoly::<Cx>::monomial(t);
        let tau = e.tau(-i, &x).unwrap();
        assert!(poly_residual(&tau, &e.s_squared(&x)) < 1e-10, "{t}");
        let rho = x.scale(&Cx::new(rational_to_f64(&md.rho_weight(&t)), 0.0));
        assert!(
            poly_residual(&e.sigma(-i, &x).unwrap(), &rho) < 1e-10,
            "{t}"
        );
        let spec = e.sigma_spectral(-i, &x).unwrap();
        assert!(poly_residual(&spec, &rho) < 1e-10, "{t}");
    }
}

#[test]
fn identity_and_oneparam_suites_pass() {
    let cfg = ToleranceCfg::default();
    let grid = default_z_grid();
    for (n, d) in [(1, 2), (1, 3), (9, 10)] {
        let e = engine(n, d);
        let r = identity_suite(&e, &grid, 4, &cfg).unwrap();
        assert!(r.pass(), "q={n}/{d}\n{r}");
        assert!(r.max_residual() < 1e-9, "{r}");
        let o = oneparam_report(&e, 4, &grid, &cfg).unwrap();
        assert!(o.pass(), "q={n}/{d}\n{o}");
    }
}

#[test]
fn unknown_analytic_kind_is_an_error() {
    assert!(matches!(
        "omega".parse::<AnalyticKind>(),
        Err(Suq2Error::UnknownKind(_))
    ));
    assert_eq!("negative".parse::<FSign>().unwrap(), FSign::Negative);
}

use super::*;
use crate::linalg::{inverse, rank};
use crate::oneparam::{check_group_laws, default_z_grid, unitary_rep_check};
use crate::scalars::{rat, Rational};

fn cfg() -> ToleranceCfg {
    ToleranceCfg::default()
}

fn q(n: i64, d: i64) -> QI {
    QI::real(rat(n, d))
}

fn build(b: BundledInstance) -> FiniteQG {
    FiniteQG::build(b.spec(), &cfg()).unwrap_or_else(|e| panic!("{}: {e}", b.name()))
}

#[test]
fn bundled_structures_validate_exactly() {
    for b in BundledInstance::ALL {
        let spec = b.spec();
        let r = validate_structure(&spec).unwrap();
        assert!(r.pass(), "{}: {r}", b.name());
        assert_eq!(r.max_residual(), 0.0);
    }
}

#[test]
fn t1_rank_of_f_s3_is_36() {
    let spec = BundledInstance::FS3.spec();
    let (t1, t2) = structure::t_maps(&spec);
    assert_eq!(rank(&t1), 36);
    assert_eq!(rank(&t2), 36);
}

fn broken_c_z2() -> AlgebraSpec {
    let mut spec = BundledInstance::CZ2.spec();
    spec.comult[1] = vec![(1, 0, QI::one())];
    spec
}

#[test]
fn broken_coproduct_fails_rank_and_counit() {
    let spec = broken_c_z2();
    let r = validate_structure(&spec).unwrap();
    assert!(!r.pass());
    assert!(!r.get("t1_bijective").unwrap().pass);
    assert!(matches!(solve_counit(&spec), Err(FinqgError::NotHopf(_))));
}

#[test]
fn malformed_index_is_named() {
    let mut spec = BundledInstance::CZ2.spec();
    spec.mult[1][1] = Element::basis(5);
    let err = validate_structure(&spec).unwrap_err();
    assert!(err.to_string().contains("e1*e1"), "{err}");
}

#[test]
fn non_associative_table_reports_triple() {
    // C[Z3] with one product entry corrupted
    let mut spec = group_algebra("z3", &FiniteGroup::cyclic(3));
    spec.mult[1][1] = Element::basis(1);
    let r = validate_structure(&spec).unwrap();
    let e = r.get("associativity").unwrap();
    assert!(!e.pass);
    assert!(e.witness.as_deref().unwrap().starts_with('('));
}

#[test]
fn counits() {
    let c = solve_counit(&BundledInstance::CZ2.spec()).unwrap();
    assert_eq!(c.covector, vec![QI::one(), QI::one()]);
    let f = solve_counit(&BundledInstance::FS3.spec()).unwrap();
    let expected: Vec<QI> = (0..6)
        .map(|s| if s == 0 { QI::one() } else { QI::zero() })
        .collect();
    assert_eq!(f.covector, expected);
}

#[test]
fn kac_paljutkin_counit_is_a_character() {
    let spec = kac_paljutkin();
    let eps = solve_counit(&spec).unwrap();
    // ε(x) = ε(y) = ε(z) = 1
    for g in [1, 2, 4] {
        assert_eq!(eps.covector[g], QI::one());
    }
    for i in 0..8 {
        for j in 0..8 {
            let lhs = eps.eval(&spec.mul(&spec.basis(i), &spec.basis(j)));
            assert_eq!(lhs, eps.covector[i].clone() * eps.covector[j].clone());
        }
    }
}

#[test]
fn antipodes() {
    let spec = BundledInstance::CZ2.spec();
    let s = solve_antipode(&spec, &solve_counit(&spec).unwrap()).unwrap();
    assert!(s.is_identity());

    let g = FiniteGroup::s3();
    let spec = BundledInstance::FS3.spec();
    let s = solve_antipode(&spec, &solve_counit(&spec).unwrap()).unwrap();
    for t in 0..6 {
        assert_eq!(s.image(t), spec.basis(g.inverse(t)), "S(δ_{})", g.labels[t]);
    }
    let spec = BundledInstance::CS3.spec();
    let s = solve_antipode(&spec, &solve_counit(&spec).unwrap()).unwrap();
    for t in 0..6 {
        assert_eq!(s.image(t), spec.basis(g.inverse(t)));
    }
}

#[test]
fn antipode_reports_exact() {
    for b in BundledInstance::ALL {
        let qg = build(b);
        let r = antipode_report(&qg.spec, &qg.counit, &qg.antipode);
        assert!(r.pass(), "{}: {r}", b.name());
        assert_eq!(r.max_residual(), 0.0);
    }
}

#[test]
fn haar_functionals() {
    let qg = build(BundledInstance::CZ2);
    assert_eq!(qg.phi().covector, vec![QI::one(), QI::zero()]);
    let qg = build(BundledInstance::FS3);
    assert_eq!(qg.phi().covector, vec![q(1, 6); 6]);
    for b in BundledInstance::ALL {
        let qg = build(b);
        assert_eq!(qg.haar.solution_dim, 1);
        assert!(qg.haar.exact_positive_definite);
        assert!(qg.haar.gram_min_eigenvalue > 1e-10, "{}", b.name());
        let r = strong_invariance_report(&qg.spec, &qg.antipode, &qg.haar, &cfg());
        assert!(r.pass(), "{}: {r}", b.name());
    }
}

#[test]
fn kac_paljutkin_haar_against_eigen_oracle() {
    // Haar of KP: φ(1) = 1 and zero on every other basis element.
    let qg = build(BundledInstance::KacPaljutkin);
    let mut expected = vec![QI::zero(); 8];
    expected[0] = QI::one();
    assert_eq!(qg.phi().covector, expected);
    // Gram eigenvalues recomputed from scratch on the complex side.
    let g = qg.haar.gram_cmatrix();
    let eig = crate::linalg::hermitian_eigen(&g);
    assert!(eig.values.iter().all(|v| *v > 0.4));
}

#[test]
fn kac_collapse_on_every_bundled_instance() {
    for b in BundledInstance::ALL {
        let qg = build(b);
        let md = &qg.modular;
        assert!(md.s_squared.is_identity(), "{}", b.name());
        assert!(md.rho.is_identity());
        assert_eq!(md.delta.to_dense(qg.spec.dim), qg.spec.unit_vec());
        assert_eq!(md.mu, QI::one());
        assert!((md.nu - 1.0).abs() < 1e-12);
        let r = modular_report(&qg.spec, &qg.counit, &qg.antipode, qg.phi(), md);
        assert!(r.pass(), "{}: {r}", b.name());
        assert_eq!(r.max_residual(), 0.0);
    }
}

#[test]
fn gns_spaces() {
    let qg = build(BundledInstance::CZ2);
    let gns = gns_build(&qg.spec, &qg.haar, &qg.modular, &cfg()).unwrap();
    assert!(gns.gram.sub(&crate::linalg::CMatrix::identity(2)).max_abs() == 0.0);
    let qg = build(BundledInstance::FS3);
    let gns = gns_build(&qg.spec, &qg.haar, &qg.modular, &cfg()).unwrap();
    let sixth = crate::linalg::CMatrix::diagonal(&[Cx::new(1.0 / 6.0, 0.0); 6]);
    assert!(gns.gram.sub(&sixth).max_abs() < 1e-16);
    for b in BundledInstance::ALL {
        let qg = build(b);
        let gns = gns_build(&qg.spec, &qg.haar, &qg.modular, &cfg()).unwrap();
        let r = gns::gns_report(&qg.spec, &qg.haar, &gns, &default_z_grid(), &cfg());
        assert!(r.pass(), "{}: {r}", b.name());
        assert!(r.max_residual() < 1e-12);
        let laws = check_group_laws(&gns.sigma, &qg.spec, &default_z_grid(), &cfg());
        assert!(laws.pass() && laws.max_residual() == 0.0);
        let u = DeltaRep::new(&qg.spec, &qg.modular, &gns.gram, &cfg()).unwrap();
        let ur = unitary_rep_check(&u, &default_z_grid(), &cfg());
        assert!(ur.pass() && ur.max_residual() == 0.0);
    }
}

#[test]
fn j_is_coordinatewise_conjugation_on_c_z2() {
    let qg = build(BundledInstance::CZ2);
    let gns = gns_build(&qg.spec, &qg.haar, &qg.modular, &cfg()).unwrap();
    let x = vec![Cx::new(1.0, 2.0), Cx::new(-3.0, 0.5)];
    let jx = gns.apply_j(&x);
    assert_eq!(jx, vec![Cx::new(1.0, -2.0), Cx::new(-3.0, -0.5)]);
}

fn same_structure(a: &AlgebraSpec, b: &AlgebraSpec) -> bool {
    a.mult == b.mult && a.star == b.star && a.unit == b.unit && {
        let n = a.dim;
        (0..n).all(|i| a.delta(&a.basis(i)) == b.delta(&b.basis(i)))
    }
}

#[test]
fn dual_of_c_z2_is_f_z2() {
    let dual = dualize(&build(BundledInstance::CZ2)).unwrap();
    assert!(same_structure(&dual.spec, &BundledInstance::FZ2.spec()));
    // ψ̂(ĝ) = ε(g) = 1
    assert_eq!(
        dual.psi_hat.eval(&dual.fourier(&dual.spec.basis(1))),
        QI::one()
    );
}

#[test]
fn dual_of_f_s3_is_c_s3_after_rescaling() {
    let dual = dualize(&build(BundledInstance::FS3)).unwrap();
    let cs3 = BundledInstance::CS3.spec();
    // u_s = 6ê_s multiplies like the group.
    let six = q(6, 1);
    for s in 0..6 {
        for t in 0..6 {
            let us = scale(&six, &dual.spec.basis(s));
            let ut = scale(&six, &dual.spec.basis(t));
            let prod = dual.spec.mul(&us, &ut);
            let expected = scale(&six, &cs3.mult[s][t].to_dense(6));
            assert_eq!(prod, expected);
        }
        assert_eq!(dual.spec.star[s], cs3.star[s]);
    }
}

#[test]
fn fourier_is_injective_on_c_s3() {
    let dual = dualize(&build(BundledInstance::CS3)).unwrap();
    assert!(inverse(&dual.pairing).is_some());
    // fourier(1) = φ
    let qg = build(BundledInstance::CS3);
    assert_eq!(
        dual.covector(&dual.fourier(&qg.spec.unit_vec())),
        qg.phi().covector
    );
}

#[test]
fn dual_reports_and_plancherel() {
    for b in BundledInstance::ALL {
        let qg = build(b);
        let dual = dualize(&qg).unwrap();
        let r = dual_report(&qg, &dual).unwrap();
        assert!(r.pass(), "{}: {r}", b.name());
        assert_eq!(r.max_residual(), 0.0);
    }
}

#[test]
fn plancherel_on_e_plus_g() {
    let qg = build(BundledInstance::CZ2);
    let dual = dualize(&qg).unwrap();
    let a = vec![QI::one(), QI::one()];
    let ah = dual.fourier(&a);
    let lhs = dual.psi_hat.eval(&dual.spec.mul(&dual.spec.star(&ah), &ah));
    let rhs = qg.phi().eval(&qg.spec.mul(&qg.spec.star(&a), &a));
    assert_eq!(lhs, q(2, 1));
    assert_eq!(rhs, q(2, 1));
}

#[test]
fn biduals() {
    for b in BundledInstance::ALL {
        let r = bidual_check(&build(b), &cfg()).unwrap();
        assert!(r.pass(), "{}: {r}", b.name());
        assert_eq!(r.max_residual(), 0.0);
    }
}

#[test]
fn gaussian_rational_instance_is_exact() {
    // C[Z2] in the basis {e, i·g}: star and structure constants become imaginary.
    let mut spec = BundledInstance::CZ2.spec();
    let i = QI::new(
        Rational::from_integer(0.into()),
        Rational::from_integer(1.into()),
    );
    let mut gg = Element::zero();
    gg.add_term(0, -QI::one());
    spec.mult[1][1] = gg;
    let mut st = Element::zero();
    st.add_term(1, -QI::one());
    spec.star[1] = st;
    spec.comult[1] = vec![(1, 1, -i)];
    let qg = FiniteQG::build(spec, &cfg()).unwrap();
    assert!(validate_structure(&qg.spec).unwrap().pass());
    assert_eq!(
        qg.counit.covector[1],
        QI::new(
            Rational::from_integer(0.into()),
            Rational::from_integer(1.into())
        )
    );
}

#[test]
fn oneparam_and_identity_reports_pass_on_bundled_instances() {
    for b in BundledInstance::ALL {
        let qg = build(b);
        let o = oneparam_report(&qg, &default_z_grid(), &cfg()).unwrap();
        assert!(o.pass(), "{}: {o}", b.name());
        assert!(o.max_residual() < 1e-9);
        let r = identity_report(&qg, &default_z_grid(), &cfg()).unwrap();
        assert!(r.pass(), "{}: {r}", b.name());
        assert!(r.max_residual() < 1e-9, "{r}");
    }
}

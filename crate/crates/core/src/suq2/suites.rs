use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::{exact_positive_definite, min_eigenvalue, solve, CMatrix, Solution};
use crate::oneparam::{
    check_group_laws, compute_lambda, p_operator_check, uniqueness_check, SpectralGroup,
};
use crate::report::{par_worst, Entry, Report, Worst};
use crate::scalars::{
    format_rational, positive_power, rational_to_f64, scaled_diff, Cx, Rational, Scalar,
    ToleranceCfg,
};

use super::{
    monomials, normal_form, poly_residual, tensor_residual, Gen, GradedSpace, NcPoly, PbwTerm,
    Result, Suq2, TensorPoly,
};

const I: Cx = Cx::new(0.0, 1.0);

type Q = Rational;

fn mono(t: PbwTerm) -> NcPoly<Q> {
    NcPoly::monomial(t)
}

fn mono_cx(t: PbwTerm) -> NcPoly<Cx> {
    NcPoly::monomial(t)
}

fn pairs(ts: &[PbwTerm]) -> Vec<(PbwTerm, PbwTerm)> {
    ts.iter()
        .flat_map(|a| ts.iter().map(move |b| (*a, *b)))
        .collect()
}

fn fmt_z(z: Cx) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn words(max_len: usize) -> Vec<Vec<Gen>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<Gen>> = layer
            .iter()
            .flat_map(|w: &Vec<Gen>| {
                Gen::ALL.iter().map(move |g| {
                    let mut v = w.clone();
                    v.push(*g);
                    v
                })
            })
            .collect();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub(crate) fn word_label(w: &[Gen]) -> String {
    if w.is_empty() {
        return "()".into();
    }
    w.iter()
        .map(|g| match g {
            Gen::A => "a",
            Gen::AStar => "a*",
            Gen::C => "c",
            Gen::CStar => "c*",
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// Compares every bracketing of `word` (interval recursion over split
/// points) with each other and with the rewriting normal form.
pub(crate) fn confluence_residual(e: &Suq2, word: &[Gen]) -> f64 {
    let n = word.len();
    let rewritten = normal_form(word, e.q());
    if n == 0 {
        return rewritten.sub(&NcPoly::one()).exact_size();
    }
    let mut nf: BTreeMap<(usize, usize), NcPoly<Q>> = BTreeMap::new();
    let mut worst = 0.0f64;
    for (i, g) in word.iter().enumerate() {
        nf.insert((i, i + 1), mono(g.term()));
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut first: Option<NcPoly<Q>> = None;
            for k in i + 1..j {
                let p = e.multiply(&nf[&(i, k)], &nf[&(k, j)]);
                match &first {
                    None => first = Some(p),
                    Some(f) => worst = worst.max(p.sub(f).exact_size()),
                }
            }
            nf.insert((i, j), first.expect("len ≥ 2 has a split"));
        }
    }
    worst.max(nf[&(0, n)].sub(&rewritten).exact_size())
}

type Tensor3 = BTreeMap<(PbwTerm, PbwTerm, PbwTerm), Q>;

fn add3(t: &mut Tensor3, key: (PbwTerm, PbwTerm, PbwTerm), c: Q) {
    let v = t.entry(key).or_insert_with(<Q as Scalar>::zero);
    *v = v.clone() + c;
    if Scalar::is_zero(v) {
        t.remove(&key);
    }
}

fn coassociativity_residual(e: &Suq2, x: PbwTerm) -> Result<f64> {
    let d = e.delta_mono(x)?;
    let (mut left, mut right) = (Tensor3::new(), Tensor3::new());
    for (s, u, c, _) in d.iter() {
        for (s1, s2, c1, _) in e.delta_mono(*s)?.iter() {
            add3(&mut left, (*s1, *s2, *u), c.clone() * c1.clone());
        }
        for (u1, u2, c2, _) in e.delta_mono(*u)?.iter() {
            add3(&mut right, (*s, *u1, *u2), c.clone() * c2.clone());
        }
    }
    for (k, v) in right {
        add3(&mut left, k, -v);
    }
    Ok(left
        .values()
        .map(|v| v.modulus().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max))
}

fn ok<T>(x: NcPoly<T>) -> Result<NcPoly<T>> {
    Ok(x)
}

fn id<T: Clone>(x: &NcPoly<T>) -> Result<NcPoly<T>> {
    Ok(x.clone())
}

/// Hopf *-algebra axioms, exact in rational arithmetic on monomials of
/// degree `≤ degree` (pairs and triples use smaller degrees so that every
/// product stays within the cap).
pub fn hopf_report(e: &Suq2, degree: usize) -> Result<Report> {
    e.check_cap(degree)?;
    let mons = monomials(degree);
    let half = pairs(&monomials(degree / 2));
    let third = monomials((degree / 3).max(1));
    let mut triples = Vec::new();
    for a in &third {
        for b in &third {
            for c in &third {
                triples.push((*a, *b, *c));
            }
        }
    }
    let mut r = Report::new("hopf");
    r.note("q", format_rational(e.q()));
    r.note("degree", degree.to_string());
    r.note("monomials", mons.len().to_string());

    let ws = words(5);
    let w = par_worst(&ws, |w, worst| -> Result<()> {
        worst.record(confluence_residual(e, w), || word_label(w));
        Ok(())
    })?;
    r.push(w.exact(
        "pbw_confluence",
        "every bracketing of a word has the rewriting normal form",
    ));

    let w = par_worst(&triples, |(a, b, c), worst| -> Result<()> {
        let (a, b, c) = (mono(*a), mono(*b), mono(*c));
        let lhs = e.multiply(&e.multiply(&a, &b), &c);
        let rhs = e.multiply(&a, &e.multiply(&b, &c));
        worst.record(lhs.sub(&rhs).exact_size(), || {
            format!("{a:?}, {b:?}, {c:?}")
        });
        Ok(())
    })?;
    r.push(w.exact("associativity", "(xy)z = x(yz)"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        worst.record(e.star(&e.star(&x)).sub(&x).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("star_involutive", "(x*)* = x"));

    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        let (x, y) = (mono(*a), mono(*b));
        let lhs = e.star(&e.multiply(&x, &y));
        let rhs = e.multiply(&e.star(&y), &e.star(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || format!("({a}, {b})"));
        Ok(())
    })?;
    r.push(w.exact("star_antimultiplicative", "(xy)* = y*x*"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        worst.record(coassociativity_residual(e, *t)?, || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("coassociativity", "(Δ⊙ι)Δ = (ι⊙Δ)Δ"));

    let unit_t = TensorPoly::pure(&NcPoly::<Q>::one(), &NcPoly::one());
    r.push(Entry::exact(
        "delta_unital",
        "Δ(1) = 1⊗1",
        e.comultiply(&NcPoly::<Q>::one())?.sub(&unit_t).exact_size(),
    ));

    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        let (x, y) = (mono(*a), mono(*b));
        let lhs = e.comultiply(&e.multiply(&x, &y))?;
        let rhs = e.tensor_multiply(&e.comultiply(&x)?, &e.comultiply(&y)?);
        worst.record(lhs.sub(&rhs).exact_size(), || format!("({a}, {b})"));
        Ok(())
    })?;
    r.push(w.exact("delta_multiplicative", "Δ(xy) = Δ(x)Δ(y)"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.comultiply(&e.star(&x))?;
        let rhs = e.tensor_star(&e.comultiply(&x)?);
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("delta_star", "Δ(x*) = Δ(x)*"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let d = e.comultiply(&x)?;
        let l = e.slice_left(|s| e.counit_mono::<Q>(s), &d);
        let rr = e.slice_right(|s| e.counit_mono::<Q>(s), &d);
        let res = l.sub(&x).exact_size().max(rr.sub(&x).exact_size());
        worst.record(res, || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("counit_law", "(ε⊙ι)Δ(x) = x = (ι⊙ε)Δ(x)"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let d = e.comultiply(&x)?;
        let lhs = e.multiply_legs(&e.tensor_map(|p| ok(e.antipode(p)), id, &d)?);
        let rhs = NcPoly::one().scale(&e.counit(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("antipode_left", "m(S⊙ι)Δ(x) = ε(x)1"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let d = e.comultiply(&x)?;
        let lhs = e.multiply_legs(&e.tensor_map(id, |p| ok(e.antipode(p)), &d)?);
        let rhs = NcPoly::one().scale(&e.counit(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("antipode_right", "m(ι⊙S)Δ(x) = ε(x)1"));

    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        let (x, y) = (mono(*a), mono(*b));
        let lhs = e.antipode(&e.multiply(&x, &y));
        let rhs = e.multiply(&e.antipode(&y), &e.antipode(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || format!("({a}, {b})"));
        Ok(())
    })?;
    r.push(w.exact("antipode_antimultiplicative", "S(xy) = S(y)S(x)"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.antipode(&e.star(&e.antipode(&e.star(&x))));
        worst.record(lhs.sub(&x).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("antipode_star", "S(S(x*)*) = x"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let anti = |p: &NcPoly<Q>| ok(e.antipode(p));
        let lhs = e.tensor_map(anti, anti, &e.comultiply(&x)?)?.flip();
        let rhs = e.comultiply(&e.antipode(&x))?;
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("antipode_coantimultiplicative", "χ(S⊙S)Δ = ΔS"));

    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        worst.record(strong_invariance_residual(e, *a, *b)?, || {
            format!("(a, b) = ({a}, {b})")
        });
        Ok(())
    })?;
    r.push(w.exact(
        "strong_left_invariance",
        "(ι⊙h)((1⊗a)Δ(b)) = S((ι⊙h)(Δ(a)(1⊗b)))",
    ));
    Ok(r)
}

fn strong_invariance_residual(e: &Suq2, a: PbwTerm, b: PbwTerm) -> Result<f64> {
    let one = NcPoly::<Q>::one();
    let (ap, bp) = (mono(a), mono(b));
    let h = |t: &PbwTerm| e.haar_mono(t);
    let lhs = e.slice_right(
        h,
        &e.tensor_multiply(&TensorPoly::pure(&one, &ap), &e.comultiply(&bp)?),
    );
    let inner = e.slice_right(
        h,
        &e.tensor_multiply(&e.comultiply(&ap)?, &TensorPoly::pure(&one, &bp)),
    );
    Ok(lhs.sub(&e.antipode(&inner)).exact_size())
}

/// Independent oracle for the Haar state on degree `≤ 2`: the unique `ω`
/// with `(ι⊙ω)Δ(x) = ω(x)1` for all `x` of degree `≤ 2` and `ω(1) = 1`.
pub fn haar_oracle_degree2(e: &Suq2) -> Result<Option<BTreeMap<PbwTerm, Q>>> {
    let unknowns = monomials(2);
    let col = |t: &PbwTerm| unknowns.iter().position(|u| u == t);
    let zero = <Q as Scalar>::zero;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in &unknowns {
        let d = e.delta_mono(*x)?;
        let mut eqs: BTreeMap<PbwTerm, Vec<Q>> = BTreeMap::new();
        eqs.entry(PbwTerm::ONE)
            .or_insert_with(|| vec![zero(); unknowns.len()]);
        for (s, u, c, _) in d.iter() {
            let row = eqs
                .entry(*s)
                .or_insert_with(|| vec![zero(); unknowns.len()]);
            let j = col(u).expect("right legs of Δ keep the degree");
            row[j] = row[j].clone() + c.clone();
        }
        let j = col(x).expect("x is an unknown");
        let unit_row = eqs.get_mut(&PbwTerm::ONE).expect("inserted above");
        unit_row[j] = unit_row[j].clone() - <Q as Scalar>::one();
        for (_, row) in eqs {
            rows.push(row);
            rhs.push(zero());
        }
    }
    let mut norm = vec![zero(); unknowns.len()];
    norm[col(&PbwTerm::ONE).expect("1 is a monomial")] = <Q as Scalar>::one();
    rows.push(norm);
    rhs.push(<Q as Scalar>::one());
    Ok(match solve(&rows, &rhs) {
        Solution::Unique(v) => Some(unknowns.into_iter().zip(v).collect()),
        _ => None,
    })
}

/// Invariance and positivity of the Haar state.
pub fn haar_invariance_residual(e: &Suq2, degree: usize, cfg: &ToleranceCfg) -> Result<Report> {
    e.check_cap(degree)?;
    let mons = monomials(degree);
    let mut r = Report::new("haar");
    r.note("q", format_rational(e.q()));
    r.note("degree", degree.to_string());
    if let Some(s) = &e.faults().haar_cc_shift {
        r.note(
            "injected_fault",
            format!("h(cc*) shifted by {}", format_rational(s)),
        );
    }
    let one = <Q as Scalar>::one();
    r.push(Entry::exact(
        "haar_normalised",
        "h(1) = 1",
        (e.haar(&NcPoly::<Q>::one()) - one).modulus(),
    ));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.slice_right(|s| e.haar_mono(s), &e.comultiply(&x)?);
        let rhs = NcPoly::one().scale(&e.haar(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("left_invariance", "(ι⊙h)Δ(x) = h(x)1"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.slice_left(|s| e.haar_mono(s), &e.comultiply(&x)?);
        let rhs = NcPoly::one().scale(&e.haar(&x));
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("right_invariance", "(h⊙ι)Δ(x) = h(x)1"));

    match haar_oracle_degree2(e)? {
        Some(oracle) => {
            let mut w = Worst::new();
            for (t, v) in &oracle {
                w.record((e.haar_mono(t) - v.clone()).modulus(), || t.to_string());
            }
            let cc = PbwTerm::new(0, 1, 1);
            r.note("haar_cc_star", format_rational(&e.haar_mono(&cc)));
            r.note("oracle_cc_star", format_rational(&oracle[&cc]));
            r.push(w.exact("haar_oracle", "h = unique invariant state on degree ≤ 2"));
        }
        None => r.push(Entry::condition(
            "haar_oracle",
            "invariance system on degree ≤ 2 has a unique normalised solution",
            false,
        )),
    }

    let gd = degree.min(4);
    let space = GradedSpace::new(e, gd);
    let g = space.gram_exact();
    let exact_pd = exact_positive_definite(&g, |x: &Q| x > &<Q as Scalar>::zero());
    r.push(Entry::condition(
        "gram_exact_positive_definite",
        "h(y*x) on degree ≤ 4 is positive definite",
        exact_pd,
    ));
    let lam = min_eigenvalue(&CMatrix::from_exact(&g));
    r.note("gram_min_eigenvalue", format!("{lam:.6e}"));
    r.push(Entry::condition(
        "gram_min_eigenvalue",
        "min eigenvalue of h(y*x) above the PSD floor",
        lam > cfg.psd_floor,
    ));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        worst.record((e.haar(&e.s_squared(&x)) - e.haar(&x)).modulus(), || {
            t.to_string()
        });
        Ok(())
    })?;
    r.push(w.exact("haar_s_squared", "h∘S² = h (μ = 1)"));
    Ok(r)
}

/// ρ, δ, μ and the two constraints pinning `f_z`.
pub fn modular_report(e: &Suq2, degree: usize) -> Result<Report> {
    e.check_cap(degree)?;
    let md = e.modular()?;
    let mons = monomials(degree);
    let half = pairs(&monomials(degree / 2));
    let mut r = Report::new("modular");
    r.note("q", format_rational(e.q()));
    r.note("degree", degree.to_string());
    for (g, img) in Gen::ALL.iter().zip(&md.rho_generators) {
        r.note(format!("rho({})", word_label(&[*g])), format!("{img:?}"));
    }
    r.note("delta", format!("{:?}", md.delta));
    r.note("mu", format_rational(&md.mu));
    r.note("nu", format!("{:.16e}", md.nu));
    r.note("f_sign", md.f_sign.to_string());
    r.note(
        "f_sign_source",
        if md.f_sign_resolved {
            "resolved"
        } else {
            "forced by fault setting"
        },
    );

    let rho = |x: &NcPoly<Q>| x.map(|t, v| md.rho_weight(t) * v.clone());
    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        let (x, y) = (mono(*a), mono(*b));
        let lhs = e.haar(&e.multiply(&x, &y));
        let rhs = e.haar(&e.multiply(&y, &rho(&x)));
        worst.record((lhs - rhs).modulus(), || format!("({a}, {b})"));
        Ok(())
    })?;
    r.push(w.exact("weak_kms", "h(xy) = h(yρ(x))"));

    let w = par_worst(&half, |(a, b), worst| -> Result<()> {
        let (x, y) = (mono(*a), mono(*b));
        let lhs = rho(&e.multiply(&x, &y));
        let rhs = e.multiply(&rho(&x), &rho(&y));
        worst.record(lhs.sub(&rhs).exact_size(), || format!("({a}, {b})"));
        Ok(())
    })?;
    r.push(w.exact("rho_multiplicative", "ρ(xy) = ρ(x)ρ(y)"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.comultiply(&rho(&x))?;
        let rhs = e.tensor_map(|p| ok(e.s_squared(p)), |p| ok(rho(p)), &e.comultiply(&x)?)?;
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("delta_rho", "Δρ = (S²⊙ρ)Δ"));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono(*t);
        let lhs = e.slice_left(|s| e.haar_mono(s), &e.comultiply(&x)?);
        let rhs = e.multiply(&NcPoly::one().scale(&e.haar(&x)), &md.delta);
        worst.record(lhs.sub(&rhs).exact_size(), || t.to_string());
        Ok(())
    })?;
    r.push(w.exact("modular_element", "(h⊙ι)Δ(x) = h(x)δ"));
    r.push(Entry::exact(
        "delta_unit",
        "δ = 1",
        md.delta.sub(&NcPoly::one()).exact_size(),
    ));
    r.push(Entry::exact(
        "mu",
        "μ = 1",
        (md.mu.clone() - <Q as Scalar>::one()).modulus(),
    ));
    r.push(Entry::within("nu", "ν = 1", (md.nu - 1.0).abs(), 1e-12));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        if let Err(err) = e.s2_weight(t) {
            worst.record(1.0, || err.to_string());
        }
        Ok(())
    })?;
    r.push(w.exact("s_squared_diagonal", "S² scales every PBW monomial"));

    let (s2, kms) = e.f_constraint_residuals(md.f_sign, &md.rho_diag, degree)?;
    r.push(Entry::exact(
        "f_s_squared",
        "(f_1⊙ι⊙f_{-1})Δ⁽²⁾(x) = S²(x)",
        s2,
    ));
    r.push(Entry::exact("f_rho", "f_1 * x * f_1 = ρ(x)", kms));
    let other = md.f_sign.flipped();
    let idx = |s: super::FSign| if s == super::FSign::Negative { 0 } else { 1 };
    let (os2, okms) = md.f_constraints[idx(other)];
    r.push(Entry::info(
        format!("f_{}_sign_s_squared", other.name()),
        "constraint residual for the rejected sign",
        os2,
    ));
    r.push(Entry::info(
        format!("f_{}_sign_rho", other.name()),
        "constraint residual for the rejected sign",
        okms,
    ));
    Ok(r)
}

/// σ and τ as analytic one-parameter groups on the span of monomials of
/// degree `≤ min(degree, 4)`.
pub fn oneparam_report(
    e: &Suq2,
    degree: usize,
    z_grid: &[Cx],
    cfg: &ToleranceCfg,
) -> Result<Report> {
    e.check_cap(degree)?;
    let gd = degree.min(4);
    let space = GradedSpace::new(e, gd);
    let n = space.basis.len();
    let gram = space.gram();
    let phi = space.haar_covector();
    let mut r = Report::new("oneparam");
    r.note("q", format_rational(e.q()));
    r.note("graded_degree", gd.to_string());

    let groups = [
        ("sigma", space.rho_values()?, "σ_{-i} = ρ"),
        ("tau", space.s2_values()?, "τ_{-i} = S²"),
    ];
    for (name, values, anchor_i) in groups {
        let g = SpectralGroup::diagonal(values.clone())
            .map_err(|err| super::Suq2Error::NotDiagonal(err.to_string()))?;
        r.extend_prefixed(name, check_group_laws(&g, &space, z_grid, cfg));

        match compute_lambda(&g, &phi, z_grid, cfg) {
            Ok(out) => {
                r.extend_prefixed(name, out.report);
                r.note(format!("{name}_lambda"), format!("{:.16e}", out.lambda));
                r.push(Entry::within(
                    format!("{name}_lambda_one"),
                    "h is invariant, so the scaling constant is 1",
                    (out.lambda - 1.0).abs(),
                    cfg.abs_tol,
                ));
                match p_operator_check(&g, out.lambda, &gram, z_grid, cfg) {
                    Ok(p) => r.extend_prefixed(name, p),
                    Err(err) => r.push(Entry::condition(
                        format!("{name}_p_operator"),
                        err.to_string(),
                        false,
                    )),
                }
            }
            Err(err) => r.push(Entry::condition(
                format!("{name}_relative_invariance"),
                err.to_string(),
                false,
            )),
        }

        match SpectralGroup::from_value_at_i(&g.matrix(I), &gram, cfg) {
            Ok(rebuilt) => {
                let labels = |k: usize| space.basis[k].to_string();
                let out = uniqueness_check(&g, &rebuilt, &labels, z_grid, cfg);
                r.push(Entry::condition(
                    format!("{name}_uniqueness_premise"),
                    "group rebuilt from its value at i agrees there",
                    out.agree_at_i,
                ));
                r.extend_prefixed(name, out.report);
            }
            Err(err) => r.push(Entry::condition(
                format!("{name}_uniqueness_premise"),
                err.to_string(),
                false,
            )),
        }

        let mut w = Worst::new();
        for (k, t) in space.basis.iter().enumerate() {
            let x = mono_cx(*t);
            let direct = match name {
                "sigma" => x.scale(&Cx::new(rational_to_f64(&e.modular()?.rho_weight(t)), 0.0)),
                _ => e.s_squared(&x),
            };
            let via = space.poly(&g.apply(-I, &crate::oneparam::unit_vector(n, k)));
            w.record(poly_residual(&via, &direct), || t.to_string());
        }
        r.push(w.within(&format!("{name}_at_minus_i"), anchor_i, cfg.abs_tol));
    }

    // σ from the f-convolution against the spectral σ: also shows σ_z is
    // diagonal on PBW monomials.
    let sigma_g = SpectralGroup::diagonal(space.rho_values()?)
        .map_err(|err| super::Suq2Error::NotDiagonal(err.to_string()))?;
    let cases: Vec<(Cx, usize)> = z_grid
        .iter()
        .flat_map(|z| (0..n).map(move |k| (*z, k)))
        .collect();
    let (w, diag) = cases
        .par_iter()
        .map(|(z, k)| -> Result<(Worst, bool)> {
            let t = space.basis[*k];
            let conv = e.sigma(*z, &mono_cx(t))?;
            let diag = conv.iter().all(|(s, _)| *s == t);
            let spec = space.poly(&sigma_g.apply(*z, &crate::oneparam::unit_vector(n, *k)));
            let mut w = Worst::new();
            w.record(poly_residual(&conv, &spec), || {
                format!("z={}, x={t}", fmt_z(*z))
            });
            Ok((w, diag))
        })
        .try_reduce(
            || (Worst::new(), true),
            |(a, da), (b, db)| Ok((a.merge(b), da && db)),
        )?;
    r.push(w.within(
        "sigma_f_convolution",
        "σ_z(x) = f_{iz} * x * f_{iz} agrees with the spectral σ_z",
        cfg.abs_tol,
    ));
    r.push(Entry::condition(
        "sigma_diagonal",
        "σ_z maps each PBW monomial to a multiple of itself",
        diag,
    ));
    Ok(r)
}

/// Every polynomial-level identity relating Δ, ε, S, R, τ, σ, σ', h and δ,
/// checked on monomials of degree `≤ degree` at every grid point.
pub fn identity_suite(
    e: &Suq2,
    z_grid: &[Cx],
    degree: usize,
    cfg: &ToleranceCfg,
) -> Result<Report> {
    e.check_cap(degree)?;
    let md = e.modular()?;
    let nu = md.nu;
    let mons = monomials(degree);
    let tol = cfg.abs_tol;
    let mut r = Report::new("identities");
    r.note("q", format_rational(e.q()));
    r.note("degree", degree.to_string());
    r.note("nu", format!("{nu:.16e}"));

    let cases: Vec<(Cx, PbwTerm)> = z_grid
        .iter()
        .flat_map(|z| mons.iter().map(move |t| (*z, *t)))
        .collect();
    let label = |z: Cx, t: &PbwTerm| format!("z={}, x={t}", fmt_z(z));

    let tau = |z: Cx| move |p: &NcPoly<Cx>| e.tau(z, p);
    let sigma = |z: Cx| move |p: &NcPoly<Cx>| e.sigma(z, p);
    let sigmap = |z: Cx| move |p: &NcPoly<Cx>| e.sigma_prime(z, p);
    let rmap = |p: &NcPoly<Cx>| e.unitary_antipode(p);

    type Map<'a> =
        Box<dyn Fn(Cx) -> Box<dyn Fn(&NcPoly<Cx>) -> Result<NcPoly<Cx>> + 'a> + Sync + 'a>;
    let table: Vec<(&str, &str, Map, Map, Map)> = vec![
        (
            "delta_tau_tau",
            "(τ_z⊙τ_z)Δ = Δτ_z",
            Box::new(move |z| Box::new(tau(z))),
            Box::new(move |z| Box::new(tau(z))),
            Box::new(move |z| Box::new(tau(z))),
        ),
        (
            "delta_tau_sigma",
            "(τ_z⊙σ_z)Δ = Δσ_z",
            Box::new(move |z| Box::new(tau(z))),
            Box::new(move |z| Box::new(sigma(z))),
            Box::new(move |z| Box::new(sigma(z))),
        ),
        (
            "delta_sigma_prime_tau",
            "(σ'_z⊙τ_{-z})Δ = Δσ'_z",
            Box::new(move |z| Box::new(sigmap(z))),
            Box::new(move |z| Box::new(tau(-z))),
            Box::new(move |z| Box::new(sigmap(z))),
        ),
        (
            "delta_sigma_sigma_prime",
            "(σ_z⊙σ'_{-z})Δ = Δτ_z",
            Box::new(move |z| Box::new(sigma(z))),
            Box::new(move |z| Box::new(sigmap(-z))),
            Box::new(move |z| Box::new(tau(z))),
        ),
    ];
    for (id, anchor, left, right, diag) in &table {
        let w = par_worst(&cases, |(z, t), worst| -> Result<()> {
            let x = mono_cx(*t);
            let lhs = e.tensor_map(left(*z), right(*z), &e.comultiply(&x)?)?;
            let rhs = e.comultiply(&diag(*z)(&x)?)?;
            worst.record(tensor_residual(&lhs, &rhs), || label(*z, t));
            Ok(())
        })?;
        r.push(w.within(id, anchor, tol));
    }

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        let lhs = e.comultiply(&rmap(&x)?)?;
        let rhs = e.tensor_map(rmap, rmap, &e.comultiply(&x)?)?.flip();
        worst.record(tensor_residual(&lhs, &rhs), || t.to_string());
        Ok(())
    })?;
    r.push(w.within("delta_r", "ΔR = χ(R⊙R)Δ", tol));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        worst.record(poly_residual(&rmap(&rmap(&x)?)?, &x), || t.to_string());
        Ok(())
    })?;
    r.push(w.within("r_involutive", "R² = ι", tol));

    let w = par_worst(&cases, |(z, t), worst| -> Result<()> {
        let x = mono_cx(*t);
        worst.record(scaled_diff(e.counit(&e.tau(*z, &x)?), e.counit(&x)), || {
            label(*z, t)
        });
        Ok(())
    })?;
    r.push(w.within("counit_tau", "ετ_z = ε", tol));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        worst.record(scaled_diff(e.counit(&rmap(&x)?), e.counit(&x)), || {
            t.to_string()
        });
        Ok(())
    })?;
    r.push(w.within("counit_r", "εR = ε", tol));

    let mut yz = Vec::new();
    for y in z_grid {
        for z in z_grid {
            for t in &mons {
                yz.push((*y, *z, *t));
            }
        }
    }
    let w = par_worst(&yz, |(y, z, t), worst| -> Result<()> {
        let x = mono_cx(*t);
        let lhs = e.tau(*y, &e.sigma(*z, &x)?)?;
        let rhs = e.sigma(*z, &e.tau(*y, &x)?)?;
        worst.record(poly_residual(&lhs, &rhs), || {
            format!("y={}, z={}, x={t}", fmt_z(*y), fmt_z(*z))
        });
        Ok(())
    })?;
    r.push(w.within("tau_sigma_commute", "τ_yσ_z = σ_zτ_y", tol));

    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        let rhs = rmap(&e.tau(-I * 0.5, &x)?)?;
        worst.record(poly_residual(&e.antipode(&x), &rhs), || t.to_string());
        Ok(())
    })?;
    r.push(w.within("antipode_polar", "S = Rτ_{-i/2}", tol));

    let w = par_worst(&cases, |(z, t), worst| -> Result<()> {
        let x = mono_cx(*t);
        worst.record(scaled_diff(e.haar(&e.sigma(*z, &x)?), e.haar(&x)), || {
            label(*z, t)
        });
        Ok(())
    })?;
    r.push(w.within("haar_sigma", "hσ_z = h", tol));

    let w = par_worst(&cases, |(z, t), worst| -> Result<()> {
        let x = mono_cx(*t);
        let rhs = positive_power(nu, *z) * e.haar(&x);
        worst.record(scaled_diff(e.haar(&e.tau(*z, &x)?), rhs), || label(*z, t));
        Ok(())
    })?;
    r.push(w.within("haar_tau", "hτ_z = ν^z h", tol));

    // hR is a positive invariant functional: Gram matrix and both invariances.
    let gd = degree / 2;
    let basis = monomials(gd);
    let mut gram = CMatrix::zeros(basis.len(), basis.len());
    for (i, a) in basis.iter().enumerate() {
        let sa = e.star(&mono_cx(*a));
        for (j, b) in basis.iter().enumerate() {
            gram[(i, j)] = e.haar(&rmap(&e.multiply(&sa, &mono_cx(*b)))?);
        }
    }
    let hermitian = gram.hermitian_defect();
    let lam = min_eigenvalue(&gram);
    r.note("haar_r_gram_min_eigenvalue", format!("{lam:.6e}"));
    r.push(Entry::condition(
        "haar_r_positive",
        "hR(y*x) is Hermitian positive definite on degree ≤ degree/2",
        hermitian <= tol && lam > cfg.psd_floor && lam > 0.0,
    ));
    let hr = |t: &PbwTerm| -> Result<Cx> { Ok(e.haar(&rmap(&mono_cx(*t))?)) };
    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        let d = e.comultiply(&x)?;
        let mut left = NcPoly::zero();
        let mut right = NcPoly::zero();
        for ((s, u), v) in d.iter() {
            left.add_term(*s, v * hr(u)?);
            right.add_term(*u, v * hr(s)?);
        }
        let one = NcPoly::one().scale(&hr(t)?);
        let res = poly_residual(&left, &one).max(poly_residual(&right, &one));
        worst.record(res, || t.to_string());
        Ok(())
    })?;
    r.push(w.within("haar_r_invariant", "hR is left and right invariant", tol));

    let nu_half = positive_power(nu, -I * 0.5);
    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        let rhs = nu_half * e.haar(&rmap(&x)?);
        worst.record(scaled_diff(e.haar(&e.antipode(&x)), rhs), || t.to_string());
        Ok(())
    })?;
    r.push(w.within("haar_antipode", "hS = ν^{-i/2}hR", tol));

    let dh = e.delta_power(Cx::new(0.5, 0.0))?;
    let w = par_worst(&mons, |t, worst| -> Result<()> {
        let x = mono_cx(*t);
        let rhs = e.haar(&e.multiply(&e.multiply(&dh, &x), &dh));
        worst.record(scaled_diff(e.haar(&rmap(&x)?), rhs), || t.to_string());
        Ok(())
    })?;
    r.push(w.within("haar_r_delta", "h(R(x)) = h(δ^{1/2}xδ^{1/2})", tol));

    let mut w = Worst::new();
    let mut w2 = Worst::new();
    let mut w3 = Worst::new();
    for &z in z_grid {
        let dz = e.delta_power(z)?;
        let dmz = e.delta_power(-z)?;
        w.record(
            tensor_residual(&e.comultiply(&dz)?, &TensorPoly::pure(&dz, &dz)),
            || fmt_z(z),
        );
        let c = scaled_diff(e.counit(&dz), Cx::new(1.0, 0.0));
        w2.record(c.max(poly_residual(&e.antipode(&dz), &dmz)), || fmt_z(z));
        w3.record(poly_residual(&rmap(&dz)?, &dmz), || fmt_z(z));
    }
    r.push(w.within("delta_power_grouplike", "Δ(δ^z) = δ^z⊗δ^z", tol));
    r.push(w2.within(
        "delta_power_counit_antipode",
        "ε(δ^z) = 1, S(δ^z) = δ^{-z}",
        tol,
    ));
    r.push(w3.within("delta_power_r", "R(δ^z) = δ^{-z}", tol));

    let mut w = Worst::new();
    for &y in z_grid {
        for &z in z_grid {
            let dy = e.delta_power(y)?;
            let rhs = dy.scale(&positive_power(nu, -y * z));
            w.record(poly_residual(&e.sigma(z, &dy)?, &rhs), || {
                format!("y={}, z={}", fmt_z(y), fmt_z(z))
            });
        }
    }
    r.push(w.within("sigma_delta_power", "σ_z(δ^y) = ν^{-yz}δ^y", tol));

    let w = par_worst(&cases, |(z, t), worst| -> Result<()> {
        let x = mono_cx(*t);
        let rhs = rmap(&e.sigma(-*z, &rmap(&x)?)?)?;
        worst.record(poly_residual(&e.sigma_prime(*z, &x)?, &rhs), || {
            label(*z, t)
        });
        Ok(())
    })?;
    r.push(w.within("sigma_prime_r", "σ'_z = Rσ_{-z}R", tol));
    Ok(r)
}

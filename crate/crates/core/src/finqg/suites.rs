use crate::linalg::{min_eigenvalue, CMatrix};
use crate::oneparam::{
    check_group_laws, compute_lambda, p_operator_check, uniqueness_check, unit_vector,
    unitary_rep_check, SpectralGroup, UnitaryRep,
};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{positive_power, scaled_diff, scaled_residual, Cx, ToleranceCfg};

use super::{gns_build, scaling_group, AlgebraSpec, DeltaRep, FiniteQG, LinearMap, Result};

const I: Cx = Cx::new(0.0, 1.0);

fn fmt_z(z: Cx) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn from_columns(cols: &[Vec<Cx>]) -> CMatrix {
    let n = cols.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

fn cx_matrix(spec: &AlgebraSpec, m: &LinearMap) -> CMatrix {
    let cols: Vec<Vec<Cx>> = (0..spec.dim).map(|j| spec.to_cx(&m.image(j))).collect();
    from_columns(&cols)
}

/// `(A⊗B)t` for `t` indexed `j * n + k`.
fn tensor_apply(a: &CMatrix, b: &CMatrix, t: &[Cx], n: usize) -> Vec<Cx> {
    let mut out = vec![Cx::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let v = t[j * n + k];
            if v == Cx::new(0.0, 0.0) {
                continue;
            }
            for p in 0..n {
                let ap = a[(p, j)];
                if ap == Cx::new(0.0, 0.0) {
                    continue;
                }
                for s in 0..n {
                    out[p * n + s] += ap * b[(s, k)] * v;
                }
            }
        }
    }
    out
}

fn flip(t: &[Cx], n: usize) -> Vec<Cx> {
    let mut out = vec![Cx::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            out[k * n + j] = t[j * n + k];
        }
    }
    out
}

fn dot(a: &[Cx], b: &[Cx]) -> Cx {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// σ (from ∇) and τ (from S²) as analytic one-parameter groups, and
/// `z ↦ δ^{iz}` as an analytic unitary representation.
pub fn oneparam_report(qg: &FiniteQG, z_grid: &[Cx], cfg: &ToleranceCfg) -> Result<Report> {
    let spec = &qg.spec;
    let md = &qg.modular;
    let n = spec.dim;
    let gns = gns_build(spec, &qg.haar, md, cfg)?;
    let tau = scaling_group(spec, &md.s_squared, qg.phi(), cfg)?;
    let phi = spec.to_cx(&qg.phi().covector);
    let labels = |k: usize| spec.label(k).to_string();
    let mut r = Report::new("oneparam");
    r.note("instance", spec.name.clone());

    let groups = [
        ("sigma", gns.sigma.clone(), &md.rho, "σ_{-i} = ρ"),
        ("tau", tau, &md.s_squared, "τ_{-i} = S²"),
    ];
    for (name, g, at_i, anchor_i) in groups {
        r.extend_prefixed(name, check_group_laws(&g, spec, z_grid, cfg));
        match compute_lambda(&g, &phi, z_grid, cfg) {
            Ok(out) => {
                r.extend_prefixed(name, out.report);
                r.note(format!("{name}_lambda"), format!("{:.16e}", out.lambda));
                match p_operator_check(&g, out.lambda, &gns.gram, z_grid, cfg) {
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
        match SpectralGroup::from_value_at_i(&g.matrix(I), &gns.gram, cfg) {
            Ok(rebuilt) => {
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
        for k in 0..n {
            let via = g.apply(-I, &unit_vector(n, k));
            w.record(scaled_residual(&via, &spec.to_cx(&at_i.image(k))), || {
                labels(k)
            });
        }
        r.push(w.within(&format!("{name}_at_minus_i"), anchor_i, cfg.abs_tol));
    }

    let delta = DeltaRep::new(spec, md, &gns.gram, cfg)?;
    r.extend_prefixed("delta", unitary_rep_check(&delta, z_grid, cfg));
    let mut w = Worst::new();
    let d = spec.to_cx(&md.delta.to_dense(n));
    w.record(scaled_residual(&delta.at(-I), &d), || "z=-i".into());
    r.push(w.within("delta_at_minus_i", "δ^{i(-i)} = δ", cfg.abs_tol));
    Ok(r)
}

/// The identities relating Δ, ε, φ with σ, σ', τ, R and `δ^z`, evaluated
/// on the basis over a grid of `z`.
pub fn identity_report(qg: &FiniteQG, z_grid: &[Cx], cfg: &ToleranceCfg) -> Result<Report> {
    let spec = &qg.spec;
    let md = &qg.modular;
    let n = spec.dim;
    let tol = cfg.abs_tol;
    let gns = gns_build(spec, &qg.haar, md, cfg)?;
    let tau = scaling_group(spec, &md.s_squared, qg.phi(), cfg)?;
    let delta = DeltaRep::new(spec, md, &gns.gram, cfg)?;
    let s = cx_matrix(spec, &qg.antipode);
    let rmat = s.mul(&tau.matrix(I * 0.5));
    let eps = spec.to_cx(&qg.counit.covector);
    let phi = spec.to_cx(&qg.phi().covector);
    let e = |k: usize| unit_vector(n, k);
    let lab = |k: usize| spec.label(k).to_string();
    let sigma_prime = |z: Cx| -> CMatrix {
        let (l, rr) = (delta.at(z), delta.at(-z));
        let cols: Vec<Vec<Cx>> = (0..n)
            .map(|k| spec.mul_cx(&spec.mul_cx(&l, &gns.sigma.apply(z, &e(k))), &rr))
            .collect();
        from_columns(&cols)
    };
    let mut r = Report::new("identities");
    r.note("instance", spec.name.clone());

    type Pick<'a> = Box<dyn Fn(Cx) -> CMatrix + 'a>;
    let table: Vec<(&str, &str, Pick, Pick, Pick)> = vec![
        (
            "delta_tau_tau",
            "(τ_z⊗τ_z)Δ = Δτ_z",
            Box::new(|z| tau.matrix(z)),
            Box::new(|z| tau.matrix(z)),
            Box::new(|z| tau.matrix(z)),
        ),
        (
            "delta_tau_sigma",
            "(τ_z⊗σ_z)Δ = Δσ_z",
            Box::new(|z| tau.matrix(z)),
            Box::new(|z| gns.sigma.matrix(z)),
            Box::new(|z| gns.sigma.matrix(z)),
        ),
        (
            "delta_sigma_prime_tau",
            "(σ'_z⊗τ_{-z})Δ = Δσ'_z",
            Box::new(&sigma_prime),
            Box::new(|z| tau.matrix(-z)),
            Box::new(&sigma_prime),
        ),
        (
            "delta_sigma_sigma_prime",
            "(σ_z⊗σ'_{-z})Δ = Δτ_z",
            Box::new(|z| gns.sigma.matrix(z)),
            Box::new(|z| sigma_prime(-z)),
            Box::new(|z| tau.matrix(z)),
        ),
    ];
    for (id, anchor, left, right, diag) in &table {
        let mut w = Worst::new();
        for &z in z_grid {
            let (l, rr, dg) = (left(z), right(z), diag(z));
            for k in 0..n {
                let lhs = tensor_apply(&l, &rr, &spec.delta_cx(&e(k)), n);
                let rhs = spec.delta_cx(&dg.mul_vec(&e(k)));
                w.record(scaled_residual(&lhs, &rhs), || {
                    format!("z={}, a={}", fmt_z(z), lab(k))
                });
            }
        }
        r.push(w.within(id, anchor, tol));
    }

    let mut w = Worst::new();
    for k in 0..n {
        let lhs = spec.delta_cx(&rmat.mul_vec(&e(k)));
        let rhs = flip(&tensor_apply(&rmat, &rmat, &spec.delta_cx(&e(k)), n), n);
        w.record(scaled_residual(&lhs, &rhs), || lab(k));
    }
    r.push(w.within("delta_r", "ΔR = χ(R⊗R)Δ", tol));

    let mut w = Worst::new();
    let mut ws = Worst::new();
    let mut wc = Worst::new();
    for k in 0..n {
        let rk = rmat.mul_vec(&e(k));
        w.record(scaled_residual(&rmat.mul_vec(&rk), &e(k)), || lab(k));
        let lhs = rmat.mul_vec(&spec.star_cx(&e(k)));
        ws.record(scaled_residual(&lhs, &spec.star_cx(&rk)), || lab(k));
        wc.record(scaled_diff(dot(&eps, &rk), eps[k]), || lab(k));
    }
    r.push(w.within("r_involutive", "R² = ι", tol));
    r.push(ws.within("r_star", "R(a*) = R(a)*", tol));
    r.push(wc.within("counit_r", "εR = ε", tol));

    let mut w = Worst::new();
    let mut wt = Worst::new();
    let mut ws = Worst::new();
    for &z in z_grid {
        let (t, sg) = (tau.matrix(z), gns.sigma.matrix(z));
        let nu_z = positive_power(md.nu, z);
        for k in 0..n {
            let tk = t.mul_vec(&e(k));
            w.record(scaled_diff(dot(&eps, &tk), eps[k]), || {
                format!("z={}, a={}", fmt_z(z), lab(k))
            });
            wt.record(scaled_diff(dot(&phi, &tk), nu_z * phi[k]), || {
                format!("z={}, a={}", fmt_z(z), lab(k))
            });
            ws.record(scaled_diff(dot(&phi, &sg.mul_vec(&e(k))), phi[k]), || {
                format!("z={}, a={}", fmt_z(z), lab(k))
            });
        }
    }
    r.push(w.within("counit_tau", "ετ_z = ε", tol));
    r.push(ws.within("haar_sigma", "φσ_z = φ", tol));
    r.push(wt.within("haar_tau", "φτ_z = ν^z φ", tol));

    let mut w = Worst::new();
    for &y in z_grid {
        for &z in z_grid {
            let a = tau.matrix(y).mul(&gns.sigma.matrix(z));
            let b = gns.sigma.matrix(z).mul(&tau.matrix(y));
            w.record(a.sub(&b).max_abs(), || {
                format!("y={}, z={}", fmt_z(y), fmt_z(z))
            });
        }
    }
    r.push(w.within("tau_sigma_commute", "τ_yσ_z = σ_zτ_y", tol));

    let polar = rmat.mul(&tau.matrix(-I * 0.5));
    let mut w = Worst::new();
    w.record(polar.sub(&s).max_abs(), || "S".into());
    r.push(w.within("antipode_polar", "S = Rτ_{-i/2}", tol));

    // φR: positive, and a multiple of φS.
    let phi_r: Vec<Cx> = (0..n).map(|k| dot(&phi, &rmat.mul_vec(&e(k)))).collect();
    let gram: Vec<Vec<Cx>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| dot(&phi_r, &spec.mul_cx(&spec.star_cx(&e(a)), &e(b))))
                .collect()
        })
        .collect();
    let lam = min_eigenvalue(&CMatrix::from_rows(&gram));
    r.note("haar_r_gram_min_eigenvalue", format!("{lam:.6e}"));
    r.push(Entry::condition(
        "haar_r_positive",
        "φR(a*a) ≥ 0 (min Gram eigenvalue ≥ psd_floor)",
        lam >= cfg.psd_floor,
    ));
    let nu_half = positive_power(md.nu, -I * 0.5);
    let mut w = Worst::new();
    let mut wd = Worst::new();
    let half = delta.at(-I * 0.5);
    for k in 0..n {
        let phi_s = dot(&phi, &s.mul_vec(&e(k)));
        w.record(scaled_diff(phi_s, nu_half * phi_r[k]), || lab(k));
        let sand = spec.mul_cx(&spec.mul_cx(&half, &e(k)), &half);
        wd.record(scaled_diff(phi_r[k], dot(&phi, &sand)), || lab(k));
    }
    r.push(w.within("haar_antipode", "φS = ν^{-i/2}φR", tol));
    r.push(wd.within("haar_r_delta", "φ(R(a)) = φ(δ^{1/2}aδ^{1/2})", tol));

    // The δ^z calculus, with δ^y = δ^{i(-iy)}.
    let mut wg = Worst::new();
    let mut we = Worst::new();
    let mut wr = Worst::new();
    let mut wsd = Worst::new();
    for &y in z_grid {
        let dy = delta.at(-I * y);
        let dmy = delta.at(I * y);
        let lhs = spec.delta_cx(&dy);
        let rhs = outer(&dy, &dy);
        wg.record(scaled_residual(&lhs, &rhs), || format!("y={}", fmt_z(y)));
        let e1 = scaled_diff(dot(&eps, &dy), Cx::new(1.0, 0.0));
        let e2 = scaled_residual(&s.mul_vec(&dy), &dmy);
        we.record(e1.max(e2), || format!("y={}", fmt_z(y)));
        wr.record(scaled_residual(&rmat.mul_vec(&dy), &dmy), || {
            format!("y={}", fmt_z(y))
        });
        for &z in z_grid {
            let lhs = gns.sigma.apply(z, &dy);
            let f = positive_power(md.nu, -y * z);
            let rhs: Vec<Cx> = dy.iter().map(|v| f * v).collect();
            wsd.record(scaled_residual(&lhs, &rhs), || {
                format!("y={}, z={}", fmt_z(y), fmt_z(z))
            });
        }
    }
    r.push(wg.within("delta_power_grouplike", "Δ(δ^z) = δ^z⊗δ^z", tol));
    r.push(we.within(
        "delta_power_counit_antipode",
        "ε(δ^z) = 1, S(δ^z) = δ^{-z}",
        tol,
    ));
    r.push(wr.within("delta_power_r", "R(δ^z) = δ^{-z}", tol));
    r.push(wsd.within("sigma_delta_power", "σ_z(δ^y) = ν^{-yz}δ^y", tol));

    let mut w = Worst::new();
    for &z in z_grid {
        let lhs = sigma_prime(z);
        let rhs = rmat.mul(&gns.sigma.matrix(-z)).mul(&rmat);
        w.record(lhs.sub(&rhs).max_abs(), || format!("z={}", fmt_z(z)));
    }
    r.push(w.within("sigma_prime_r", "σ'_z = Rσ_{-z}R", tol));
    Ok(r)
}

fn outer(x: &[Cx], y: &[Cx]) -> Vec<Cx> {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect()
}

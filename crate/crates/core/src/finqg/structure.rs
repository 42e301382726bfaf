use crate::linalg::rank;
use crate::report::{Entry, Report, Worst};
use crate::scalars::{Scalar, QI};

use super::{exact_residual, sub, AlgebraSpec, Result};

/// Exact check of the Hopf *-algebra axioms that only involve the tables.
pub fn validate_structure(spec: &AlgebraSpec) -> Result<Report> {
    spec.check_well_formed()?;
    let n = spec.dim;
    let mut r = Report::new("structure");
    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let ij = spec.mul(&e(i), &e(j));
            for k in 0..n {
                let lhs = spec.mul(&ij, &e(k));
                let rhs = spec.mul(&e(i), &spec.mul(&e(j), &e(k)));
                w.record(exact_residual(&sub(&lhs, &rhs)), || {
                    format!("({}, {}, {})", lab(i), lab(j), lab(k))
                });
            }
        }
    }
    r.push(w.exact("associativity", "(ab)c = a(bc)"));

    let one = spec.unit_vec();
    let mut w = Worst::new();
    for i in 0..n {
        let left = sub(&spec.mul(&one, &e(i)), &e(i));
        let right = sub(&spec.mul(&e(i), &one), &e(i));
        w.record(exact_residual(&left).max(exact_residual(&right)), || lab(i));
    }
    r.push(w.exact("unit", "1a = a1 = a"));

    let mut w = Worst::new();
    for i in 0..n {
        w.record(
            exact_residual(&sub(&spec.star(&spec.star(&e(i))), &e(i))),
            || lab(i),
        );
    }
    r.push(w.exact("star_involutive", "(a*)* = a"));

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = spec.star(&spec.mul(&e(i), &e(j)));
            let rhs = spec.mul(&spec.star(&e(j)), &spec.star(&e(i)));
            w.record(exact_residual(&sub(&lhs, &rhs)), || {
                format!("({}, {})", lab(i), lab(j))
            });
        }
    }
    r.push(w.exact("star_antimultiplicative", "(ab)* = b*a*"));

    let mut w = Worst::new();
    for i in 0..n {
        let (lhs, rhs) = coassociativity_sides(spec, i);
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
    }
    r.push(w.exact("coassociativity", "(Δ⊗ι)Δ = (ι⊗Δ)Δ"));

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = spec.delta(&spec.mul(&e(i), &e(j)));
            let rhs = spec.tensor_mul(&spec.delta(&e(i)), &spec.delta(&e(j)));
            w.record(exact_residual(&sub(&lhs, &rhs)), || {
                format!("({}, {})", lab(i), lab(j))
            });
        }
    }
    r.push(w.exact("delta_multiplicative", "Δ(ab) = Δ(a)Δ(b)"));

    let res = exact_residual(&sub(&spec.delta(&one), &spec.tensor(&one, &one)));
    r.push(Entry::exact("delta_unital", "Δ(1) = 1⊗1", res));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.delta(&spec.star(&e(i)));
        let d = spec.delta(&e(i));
        let mut rhs = vec![QI::zero(); n * n];
        for (idx, c) in d.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = spec.tensor(&spec.star(&e(idx / n)), &spec.star(&e(idx % n)));
            super::axpy(&mut rhs, &c.conj(), &t);
        }
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
    }
    r.push(w.exact("delta_star", "Δ(a*) = Δ(a)*"));

    let (t1, t2) = t_maps(spec);
    let (r1, r2) = (rank(&t1), rank(&t2));
    r.push(Entry::condition(
        "t1_bijective",
        format!("rank T₁ = n² (T₁(a⊗b) = Δ(a)(b⊗1)), rank {r1} of {}", n * n),
        r1 == n * n,
    ));
    r.push(Entry::condition(
        "t2_bijective",
        format!("rank T₂ = n² (T₂(a⊗b) = (a⊗1)Δ(b)), rank {r2} of {}", n * n),
        r2 == n * n,
    ));
    r.note("rank_t1", r1.to_string());
    r.note("rank_t2", r2.to_string());
    Ok(r)
}

/// Both sides of coassociativity on `e_i` as dense 3-tensors.
fn coassociativity_sides(spec: &AlgebraSpec, i: usize) -> (Vec<QI>, Vec<QI>) {
    let n = spec.dim;
    let mut lhs = vec![QI::zero(); n * n * n];
    let mut rhs = vec![QI::zero(); n * n * n];
    for (j, k, c) in &spec.comult[i] {
        for (p, s, d) in &spec.comult[*j] {
            let t = &mut lhs[(p * n + s) * n + k];
            *t = t.clone() + c.clone() * d.clone();
        }
        for (p, s, d) in &spec.comult[*k] {
            let t = &mut rhs[(j * n + p) * n + s];
            *t = t.clone() + c.clone() * d.clone();
        }
    }
    (lhs, rhs)
}

/// The n²×n² matrices of `T₁(a⊗b) = Δ(a)(b⊗1)` and `T₂(a⊗b) = (a⊗1)Δ(b)`.
pub(crate) fn t_maps(spec: &AlgebraSpec) -> (Vec<Vec<QI>>, Vec<Vec<QI>>) {
    let n = spec.dim;
    let one = spec.unit_vec();
    let mut t1 = vec![vec![QI::zero(); n * n]; n * n];
    let mut t2 = vec![vec![QI::zero(); n * n]; n * n];
    for a in 0..n {
        let da = spec.delta(&spec.basis(a));
        for b in 0..n {
            let col = a * n + b;
            let img1 = spec.tensor_mul(&da, &spec.tensor(&spec.basis(b), &one));
            let img2 = spec.tensor_mul(
                &spec.tensor(&spec.basis(a), &one),
                &spec.delta(&spec.basis(b)),
            );
            for row in 0..n * n {
                t1[row][col] = img1[row].clone();
                t2[row][col] = img2[row].clone();
            }
        }
    }
    (t1, t2)
}

use num_traits::Signed;

use crate::linalg::{exact_positive_definite, min_eigenvalue, nullspace, solve, CMatrix, Solution};
use crate::report::{Entry, Report, Worst};
use crate::scalars::{Field, Scalar, ToleranceCfg, QI};

use super::{exact_residual, scale, sub, AlgebraSpec, FinqgError, Functional, LinearMap, Result};

/// The counit: the unique ε with `(ε⊗ι)Δ = (ι⊗ε)Δ = ι`, checked to be a *-character.
pub fn solve_counit(spec: &AlgebraSpec) -> Result<Functional> {
    let n = spec.dim;
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for t in 0..n {
            let mut left = vec![QI::zero(); n];
            let mut right = vec![QI::zero(); n];
            for (j, k, c) in &spec.comult[i] {
                if *k == t {
                    left[*j] = left[*j].clone() + c.clone();
                }
                if *j == t {
                    right[*k] = right[*k].clone() + c.clone();
                }
            }
            let target = if i == t { QI::one() } else { QI::zero() };
            rows.push(left);
            rhs.push(target.clone());
            rows.push(right);
            rhs.push(target);
        }
    }
    let eps = match solve(&rows, &rhs) {
        Solution::Unique(x) => x,
        Solution::Underdetermined(_, d) => {
            return Err(FinqgError::NotHopf(format!(
                "counit equations leave a {d}-dimensional freedom"
            )))
        }
        Solution::Inconsistent => {
            return Err(FinqgError::NotHopf(
                "counit equations are inconsistent".into(),
            ))
        }
    };
    let f = Functional { covector: eps };
    for i in 0..n {
        for j in 0..n {
            let lhs = f.eval(&spec.mul(&spec.basis(i), &spec.basis(j)));
            if lhs != f.covector[i].clone() * f.covector[j].clone() {
                return Err(FinqgError::NotHopf(format!(
                    "counit is not multiplicative on ({}, {})",
                    spec.label(i),
                    spec.label(j)
                )));
            }
        }
        if f.eval(&spec.star(&spec.basis(i))) != f.covector[i].conj() {
            return Err(FinqgError::NotHopf(format!(
                "counit does not respect the star on {}",
                spec.label(i)
            )));
        }
    }
    Ok(f)
}

/// The antipode: unique S with `m(S⊗ι)Δ(a) = m(ι⊗S)Δ(a) = ε(a)1`.
pub fn solve_antipode(spec: &AlgebraSpec, counit: &Functional) -> Result<LinearMap> {
    let n = spec.dim;
    let one = spec.unit_vec();
    // Unknown s[r][j] (coefficient of e_r in S(e_j)) lives at column r*n + j.
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        let mut left = vec![vec![QI::zero(); n * n]; n];
        let mut right = vec![vec![QI::zero(); n * n]; n];
        for (j, k, c) in &spec.comult[i] {
            for r in 0..n {
                for (t, m) in spec.mult[r][*k].iter() {
                    let v = &mut left[t][r * n + j];
                    *v = v.clone() + c.clone() * m.clone();
                }
                for (t, m) in spec.mult[*j][r].iter() {
                    let v = &mut right[t][r * n + k];
                    *v = v.clone() + c.clone() * m.clone();
                }
            }
        }
        for t in 0..n {
            let target = counit.covector[i].clone() * one[t].clone();
            rows.push(std::mem::take(&mut left[t]));
            rhs.push(target.clone());
            rows.push(std::mem::take(&mut right[t]));
            rhs.push(target);
        }
    }
    let s = match solve(&rows, &rhs) {
        Solution::Unique(x) => x,
        Solution::Underdetermined(_, d) => {
            return Err(FinqgError::NoAntipode(format!(
                "antipode equations leave a {d}-dimensional freedom"
            )))
        }
        Solution::Inconsistent => {
            return Err(FinqgError::NoAntipode(
                "antipode equations are inconsistent".into(),
            ))
        }
    };
    Ok(LinearMap {
        m: (0..n).map(|r| s[r * n..(r + 1) * n].to_vec()).collect(),
    })
}

/// Exact residuals of the counit and antipode laws and the derived antipode properties.
pub fn antipode_report(spec: &AlgebraSpec, counit: &Functional, s: &LinearMap) -> Report {
    let n = spec.dim;
    let mut r = Report::new("antipode");
    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();
    let id = LinearMap::identity(n);
    let eps_map = LinearMap::from_images(
        &(0..n)
            .map(|i| scale(&counit.covector[i], &spec.unit_vec()))
            .collect::<Vec<_>>(),
    );

    let mut w = Worst::new();
    for i in 0..n {
        let d = spec.delta(&e(i));
        let left = spec.multiply_legs(&spec.tensor_map(&eps_map, &id, &d));
        let right = spec.multiply_legs(&spec.tensor_map(&id, &eps_map, &d));
        let res = exact_residual(&sub(&left, &e(i))).max(exact_residual(&sub(&right, &e(i))));
        w.record(res, || lab(i));
    }
    r.push(w.exact("counit_law", "(ε⊗ι)Δ(a) = (ι⊗ε)Δ(a) = a"));

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = counit.eval(&spec.mul(&e(i), &e(j)));
            let rhs = counit.covector[i].clone() * counit.covector[j].clone();
            w.record(exact_residual(&[lhs - rhs]), || {
                format!("({}, {})", lab(i), lab(j))
            });
        }
    }
    r.push(w.exact("counit_multiplicative", "ε(ab) = ε(a)ε(b)"));

    let (mut wl, mut wr) = (Worst::new(), Worst::new());
    let one = spec.unit_vec();
    for i in 0..n {
        let d = spec.delta(&e(i));
        for j in 0..n {
            let target = scale(&counit.covector[i], &e(j));
            // m(S⊗ι)(Δ(a)(1⊗b)) = ε(a)b
            let t = spec.tensor_mul(&d, &spec.tensor(&one, &e(j)));
            let lhs = spec.multiply_legs(&spec.tensor_map(s, &id, &t));
            wl.record(exact_residual(&sub(&lhs, &target)), || {
                format!("(a, b) = ({}, {})", lab(i), lab(j))
            });
            // m(ι⊗S)((b⊗1)Δ(a)) = ε(a)b
            let t = spec.tensor_mul(&spec.tensor(&e(j), &one), &d);
            let lhs = spec.multiply_legs(&spec.tensor_map(&id, s, &t));
            wr.record(exact_residual(&sub(&lhs, &target)), || {
                format!("(a, b) = ({}, {})", lab(i), lab(j))
            });
        }
    }
    r.push(wl.exact("antipode_left", "m(S⊗ι)(Δ(a)(1⊗b)) = ε(a)b"));
    r.push(wr.exact("antipode_right", "m(ι⊗S)((b⊗1)Δ(a)) = ε(a)b"));

    let mut w = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = s.apply(&spec.mul(&e(i), &e(j)));
            let rhs = spec.mul(&s.image(j), &s.image(i));
            w.record(exact_residual(&sub(&lhs, &rhs)), || {
                format!("({}, {})", lab(i), lab(j))
            });
        }
    }
    r.push(w.exact("antipode_antimultiplicative", "S(ab) = S(b)S(a)"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.star(&s.apply(&spec.star(&s.image(i))));
        w.record(exact_residual(&sub(&lhs, &e(i))), || lab(i));
    }
    r.push(w.exact("antipode_star", "S(S(a*)*) = a"));

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.flip(&spec.tensor_map(s, s, &spec.delta(&e(i))));
        let rhs = spec.delta(&s.image(i));
        w.record(exact_residual(&sub(&lhs, &rhs)), || lab(i));
    }
    r.push(w.exact("antipode_coantimultiplicative", "χ(S⊗S)Δ = ΔS"));
    r
}

/// A normalised positive left invariant functional with its certificates.
#[derive(Clone, Debug)]
pub struct Haar {
    pub phi: Functional,
    /// Dimension of the space of left invariant functionals.
    pub solution_dim: usize,
    /// `gram[r][c] = φ(e_r* e_c)`.
    pub gram: Vec<Vec<QI>>,
    pub gram_min_eigenvalue: f64,
    pub exact_positive_definite: bool,
}

impl Haar {
    pub fn gram_cmatrix(&self) -> CMatrix {
        CMatrix::from_exact(&self.gram)
    }
}

pub(crate) fn gram_of(spec: &AlgebraSpec, phi: &Functional) -> Vec<Vec<QI>> {
    let n = spec.dim;
    (0..n)
        .map(|r| {
            let sr = spec.star(&spec.basis(r));
            (0..n)
                .map(|c| phi.eval(&spec.mul(&sr, &spec.basis(c))))
                .collect()
        })
        .collect()
}

/// Left invariant functionals as the null space of `(ι⊗φ)Δ(a) - φ(a)1 = 0`.
pub(crate) fn left_invariant_functionals(spec: &AlgebraSpec) -> Vec<Vec<QI>> {
    let n = spec.dim;
    let one = spec.unit_vec();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for t in 0..n {
            let mut row = vec![QI::zero(); n];
            for (j, k, c) in &spec.comult[i] {
                if *j == t {
                    row[*k] = row[*k].clone() + c.clone();
                }
            }
            row[i] = row[i].clone() - one[t].clone();
            rows.push(row);
        }
    }
    nullspace(&rows, n)
}

/// Solves for the left Haar functional, normalised by `φ(1) = 1`, and certifies
/// positivity and faithfulness through its Gram matrix.
pub fn solve_haar(spec: &AlgebraSpec, cfg: &ToleranceCfg) -> Result<Haar> {
    let basis = left_invariant_functionals(spec);
    if basis.len() != 1 {
        return Err(FinqgError::HaarDimension(basis.len()));
    }
    let v = &basis[0];
    let norm = super::dot(v, &spec.unit_vec());
    let Some(inv) = norm.inv() else {
        return Err(FinqgError::HaarUnnormalisable);
    };
    let phi = Functional {
        covector: scale(&inv, v),
    };
    let gram = gram_of(spec, &phi);
    let gram_min_eigenvalue = min_eigenvalue(&CMatrix::from_exact(&gram));
    let exact_pd = exact_positive_definite(&gram, |p| p.im.is_zero() && p.re.is_positive());
    if !exact_pd || gram_min_eigenvalue <= cfg.psd_floor {
        return Err(FinqgError::HaarNotPositive(gram_min_eigenvalue));
    }
    Ok(Haar {
        phi,
        solution_dim: basis.len(),
        gram,
        gram_min_eigenvalue,
        exact_positive_definite: exact_pd,
    })
}

/// Haar invariance, uniqueness, positivity and the strong left invariance formula.
pub fn strong_invariance_report(
    spec: &AlgebraSpec,
    s: &LinearMap,
    haar: &Haar,
    cfg: &ToleranceCfg,
) -> Report {
    let n = spec.dim;
    let mut r = Report::new("haar");
    let e = |i| spec.basis(i);
    let lab = |i: usize| spec.label(i).to_string();
    let phi = &haar.phi;
    let one = spec.unit_vec();

    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.slice_right(phi, &spec.delta(&e(i)));
        w.record(
            exact_residual(&sub(&lhs, &scale(&phi.covector[i], &one))),
            || lab(i),
        );
    }
    r.push(w.exact("left_invariance", "(ι⊗φ)Δ(a) = φ(a)1"));

    let psi = Functional {
        covector: (0..n).map(|i| phi.eval(&s.image(i))).collect(),
    };
    let mut w = Worst::new();
    for i in 0..n {
        let lhs = spec.slice_left(&psi, &spec.delta(&e(i)));
        w.record(
            exact_residual(&sub(&lhs, &scale(&psi.covector[i], &one))),
            || lab(i),
        );
    }
    r.push(w.exact("right_invariance_psi", "(ψ⊗ι)Δ(a) = ψ(a)1, ψ = φS"));

    let mut w = Worst::new();
    for a in 0..n {
        let da = spec.delta(&e(a));
        for b in 0..n {
            let lhs = spec.slice_right(
                phi,
                &spec.tensor_mul(&spec.tensor(&one, &e(a)), &spec.delta(&e(b))),
            );
            let inner = spec.slice_right(phi, &spec.tensor_mul(&da, &spec.tensor(&one, &e(b))));
            let rhs = s.apply(&inner);
            w.record(exact_residual(&sub(&lhs, &rhs)), || {
                format!("(a, b) = ({}, {})", lab(a), lab(b))
            });
        }
    }
    r.push(w.exact(
        "strong_left_invariance",
        "(ι⊗φ)((1⊗a)Δ(b)) = S((ι⊗φ)(Δ(a)(1⊗b)))",
    ));

    r.push(Entry::condition(
        "haar_unique",
        "left invariant functionals form a 1-dimensional space",
        haar.solution_dim == 1,
    ));
    r.push(Entry::exact(
        "haar_normalised",
        "φ(1) = 1",
        exact_residual(&[phi.eval(&one) - QI::one()]),
    ));
    r.push(Entry::condition(
        "gram_exact_positive_definite",
        "φ(a*a) > 0 for a ≠ 0 (exact LDL*)",
        haar.exact_positive_definite,
    ));
    r.push(Entry::condition(
        "gram_min_eigenvalue",
        format!(
            "min eig of [φ(e_r* e_c)] = {:.6e} > psd_floor",
            haar.gram_min_eigenvalue
        ),
        haar.gram_min_eigenvalue > cfg.psd_floor && haar.gram_min_eigenvalue > 0.0,
    ));
    r.note(
        "gram_min_eigenvalue",
        format!("{:.6e}", haar.gram_min_eigenvalue),
    );
    r
}

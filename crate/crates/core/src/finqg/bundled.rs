use crate::scalars::{rat, Scalar, QI};

use super::{AlgebraSpec, Element};

/// A finite group by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub labels: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order())
            .find(|&h| self.mul[g][h] == self.identity)
            .expect("group element without inverse")
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteGroup {
            labels: (0..n)
                .map(|k| if k == 0 { "e".into() } else { format!("g{k}") })
                .collect(),
            mul: (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
            identity: 0,
        }
    }

    /// Permutations of {1, 2, 3} in lexicographic one-line notation, composed
    /// as maps: `(st)(x) = s(t(x))`.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| idx([s[t[0]], s[t[1]], s[t[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup {
            labels: perms
                .iter()
                .map(|p| p.iter().map(|x| (x + 1).to_string()).collect())
                .collect(),
            mul,
            identity: 0,
        }
    }
}

fn single(k: usize) -> Element {
    Element::basis(k)
}

/// The group algebra ℂ[G]: `u_g u_h = u_{gh}`, `u_g* = u_{g⁻¹}`, `Δu_g = u_g⊗u_g`.
pub fn group_algebra(name: &str, g: &FiniteGroup) -> AlgebraSpec {
    let n = g.order();
    AlgebraSpec {
        name: name.into(),
        dim: n,
        basis_labels: g.labels.clone(),
        mult: (0..n)
            .map(|a| (0..n).map(|b| single(g.mul[a][b])).collect())
            .collect(),
        star: (0..n).map(|a| single(g.inverse(a))).collect(),
        unit: single(g.identity),
        comult: (0..n).map(|a| vec![(a, a, QI::one())]).collect(),
    }
}

/// Functions on G: `δ_s δ_t = [s = t]δ_s`, `δ_s* = δ_s`, `Δδ_s = Σ_{uv=s} δ_u⊗δ_v`.
pub fn function_algebra(name: &str, g: &FiniteGroup) -> AlgebraSpec {
    let n = g.order();
    let mut unit = Element::zero();
    for s in 0..n {
        unit.add_term(s, QI::one());
    }
    AlgebraSpec {
        name: name.into(),
        dim: n,
        basis_labels: g.labels.iter().map(|l| format!("d_{l}")).collect(),
        mult: (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { single(a) } else { Element::zero() })
                    .collect()
            })
            .collect(),
        star: (0..n).map(single).collect(),
        unit,
        comult: (0..n)
            .map(|s| {
                let mut terms = Vec::new();
                for u in 0..n {
                    for v in 0..n {
                        if g.mul[u][v] == s {
                            terms.push((u, v, QI::one()));
                        }
                    }
                }
                terms
            })
            .collect(),
    }
}

/// The 8-dimensional Kac–Paljutkin algebra with basis `x^a y^b z^c`, relations
/// `x² = y² = 1`, `xy = yx`, `zx = yz`, `zy = xz`, `z² = ½(1 + x + y - xy)`,
/// `x* = x`, `y* = y`, `z* = z⁻¹ = z³` and
/// `Δz = ½(1⊗1 + 1⊗x + y⊗1 - y⊗x)(z⊗z)`.
pub fn kac_paljutkin() -> AlgebraSpec {
    let idx = |a: usize, b: usize, c: usize| (a % 2) + 2 * (b % 2) + 4 * c;
    let labels: Vec<String> = (0..8)
        .map(|i| {
            let (a, b, c) = (i & 1, (i >> 1) & 1, (i >> 2) & 1);
            let s: String = [(a, "x"), (b, "y"), (c, "z")]
                .iter()
                .filter(|(p, _)| *p == 1)
                .map(|(_, g)| *g)
                .collect();
            if s.is_empty() {
                "1".into()
            } else {
                s
            }
        })
        .collect();
    let half = QI::real(rat(1, 2));
    let mut mult = vec![vec![Element::zero(); 8]; 8];
    for i in 0..8 {
        let (a, b, c) = (i & 1, (i >> 1) & 1, (i >> 2) & 1);
        for j in 0..8 {
            let (d, e, f) = (j & 1, (j >> 1) & 1, (j >> 2) & 1);
            // z x^d y^e = x^e y^d z
            let (d, e) = if c == 1 { (e, d) } else { (d, e) };
            let (p, r) = (a + d, b + e);
            let out = &mut mult[i][j];
            if c + f < 2 {
                out.add_term(idx(p, r, c + f), QI::one());
            } else {
                out.add_term(idx(p, r, 0), half.clone());
                out.add_term(idx(p + 1, r, 0), half.clone());
                out.add_term(idx(p, r + 1, 0), half.clone());
                out.add_term(idx(p + 1, r + 1, 0), -half.clone());
            }
        }
    }
    let mut spec = AlgebraSpec {
        name: "kac_paljutkin".into(),
        dim: 8,
        basis_labels: labels,
        mult,
        star: (0..8).map(single).collect(),
        unit: single(0),
        comult: vec![Vec::new(); 8],
    };
    // (x^a y^b z)* = z⁻¹ y^b x^a = x^b y^a z³
    let z3 = spec.mul(&spec.basis(4), &spec.mul(&spec.basis(4), &spec.basis(4)));
    for i in 4..8 {
        let (a, b) = (i & 1, (i >> 1) & 1);
        spec.star[i] = Element::from_dense(&spec.mul(&spec.basis(idx(b, a, 0)), &z3));
    }
    let one = spec.basis(0);
    let (x, y, z) = (spec.basis(1), spec.basis(2), spec.basis(4));
    let dx = spec.tensor(&x, &x);
    let dy = spec.tensor(&y, &y);
    let mut pre = spec.tensor(&one, &one);
    for (l, r, sign) in [(&one, &x, 1), (&y, &one, 1), (&y, &x, -1)] {
        let t = spec.tensor(l, r);
        super::axpy(&mut pre, &QI::int(sign), &t);
    }
    let pre = super::scale(&half, &pre);
    let dz = spec.tensor_mul(&pre, &spec.tensor(&z, &z));
    let unit_t = spec.tensor(&one, &one);
    let comult = (0..8)
        .map(|i| {
            let (a, b, c) = (i & 1, (i >> 1) & 1, (i >> 2) & 1);
            let mut t = unit_t.clone();
            if a == 1 {
                t = spec.tensor_mul(&t, &dx);
            }
            if b == 1 {
                t = spec.tensor_mul(&t, &dy);
            }
            if c == 1 {
                t = spec.tensor_mul(&t, &dz);
            }
            t.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (k / 8, k % 8, v.clone()))
                .collect()
        })
        .collect();
    spec.comult = comult;
    spec
}

/// The bundled finite instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BundledInstance {
    CZ2,
    FZ2,
    CS3,
    FS3,
    KacPaljutkin,
}

impl BundledInstance {
    pub const ALL: [BundledInstance; 5] = [
        BundledInstance::CZ2,
        BundledInstance::FZ2,
        BundledInstance::CS3,
        BundledInstance::FS3,
        BundledInstance::KacPaljutkin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BundledInstance::CZ2 => "c_z2",
            BundledInstance::FZ2 => "f_z2",
            BundledInstance::CS3 => "c_s3",
            BundledInstance::FS3 => "f_s3",
            BundledInstance::KacPaljutkin => "kac_paljutkin",
        }
    }

    pub fn spec(self) -> AlgebraSpec {
        match self {
            BundledInstance::CZ2 => group_algebra("c_z2", &FiniteGroup::cyclic(2)),
            BundledInstance::FZ2 => function_algebra("f_z2", &FiniteGroup::cyclic(2)),
            BundledInstance::CS3 => group_algebra("c_s3", &FiniteGroup::s3()),
            BundledInstance::FS3 => function_algebra("f_s3", &FiniteGroup::s3()),
            BundledInstance::KacPaljutkin => kac_paljutkin(),
        }
    }
}

pub fn bundled() -> Vec<AlgebraSpec> {
    BundledInstance::ALL.iter().map(|b| b.spec()).collect()
}

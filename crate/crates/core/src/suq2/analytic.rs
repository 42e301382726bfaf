use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::linalg::{solve, CMatrix, Solution};
use crate::oneparam::{compute_lambda, CoordAlgebra, SpectralGroup};
use crate::scalars::{positive_power, rational_pow, Cx, Rational, Scalar, ToleranceCfg};

use super::{Coeff, Gen, NcPoly, PbwTerm, Result, Suq2, Suq2Error};

const I: Cx = Cx::new(0.0, 1.0);

/// A unital multiplicative functional, fixed by its values on the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Character<K> {
    pub value_on_a: K,
    pub value_on_a_star: K,
    pub value_on_c: K,
    pub value_on_c_star: K,
}

fn pow<K: Scalar>(x: &K, n: u32) -> K {
    (0..n).fold(K::one(), |acc, _| acc * x.clone())
}

impl<K: Scalar> Character<K> {
    pub fn counit() -> Self {
        Character {
            value_on_a: K::one(),
            value_on_a_star: K::one(),
            value_on_c: K::zero(),
            value_on_c_star: K::zero(),
        }
    }

    pub fn eval(&self, t: &PbwTerm) -> K {
        let a = if t.k >= 0 {
            pow(&self.value_on_a, t.k as u32)
        } else {
            pow(&self.value_on_a_star, t.k.unsigned_abs())
        };
        a * pow(&self.value_on_c, t.l) * pow(&self.value_on_c_star, t.m)
    }

    pub fn eval_poly(&self, x: &NcPoly<K>) -> K {
        x.iter()
            .fold(K::zero(), |acc, (t, v)| acc + self.eval(t) * v.clone())
    }
}

/// Exponent sign in `f_z(a) = q^{∓z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FSign {
    /// `f_z(a) = q^{-z}`, `f_z(a*) = q^{z}`.
    Negative,
    /// `f_z(a) = q^{z}`, `f_z(a*) = q^{-z}`.
    Positive,
}

impl FSign {
    fn exponent(self) -> i64 {
        match self {
            FSign::Negative => -1,
            FSign::Positive => 1,
        }
    }

    pub fn flipped(self) -> FSign {
        match self {
            FSign::Negative => FSign::Positive,
            FSign::Positive => FSign::Negative,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FSign::Negative => "negative",
            FSign::Positive => "positive",
        }
    }
}

impl fmt::Display for FSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSign::Negative => write!(f, "f_z(a) = q^(-z), f_z(a*) = q^(z)"),
            FSign::Positive => write!(f, "f_z(a) = q^(z), f_z(a*) = q^(-z)"),
        }
    }
}

impl FromStr for FSign {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "negative" | "-" => Ok(FSign::Negative),
            "positive" | "+" => Ok(FSign::Positive),
            _ => Err(format!("expected \"negative\" or \"positive\", got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticKind {
    Sigma,
    SigmaPrime,
    Tau,
    R,
    F,
}

impl FromStr for AnalyticKind {
    type Err = Suq2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(AnalyticKind::Sigma),
            "sigma_prime" => Ok(AnalyticKind::SigmaPrime),
            "tau" => Ok(AnalyticKind::Tau),
            "R" | "r" => Ok(AnalyticKind::R),
            "f" => Ok(AnalyticKind::F),
            _ => Err(Suq2Error::UnknownKind(s.into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticValue {
    Poly(NcPoly<Cx>),
    Scalar(Cx),
}

/// Modular data of the Haar state, all derived from the engine.
#[derive(Clone, Debug)]
pub struct ModularSu {
    /// `ρ(a), ρ(a*), ρ(c), ρ(c*)` solved from `h(xy) = h(yρ(x))`.
    pub rho_generators: Vec<NcPoly<Rational>>,
    /// Scalars `w_g` with `ρ(g) = w_g g`.
    pub(super) rho_diag: [Rational; 4],
    /// `δ` with `(h⊙ι)Δ(x) = h(x)δ`.
    pub delta: NcPoly<Rational>,
    /// `h∘S² = μh`.
    pub mu: Rational,
    /// `φτ_z = ν^z φ`.
    pub nu: f64,
    pub f_sign: FSign,
    /// False when the sign was forced by a fault setting.
    pub f_sign_resolved: bool,
    /// Residuals of the two defining constraints for each sign, in the order
    /// (negative, positive): `(f_1⊙ι⊙f_{-1})Δ⁽²⁾ = S²` and `f_1*x*f_1 = ρ(x)`.
    pub f_constraints: [(f64, f64); 2],
}

impl ModularSu {
    /// `ρ(t) = w·t`.
    pub fn rho_weight(&self, t: &PbwTerm) -> Rational {
        diag_weight(&self.rho_diag, t)
    }

    pub fn unimodular(&self) -> bool {
        self.delta == NcPoly::one()
    }
}

/// Weight of a monomial under the automorphism scaling `a, a*, c, c*` by `w`.
fn diag_weight(w: &[Rational; 4], t: &PbwTerm) -> Rational {
    let [wa, was, wc, wcs] = w;
    let a = if t.k >= 0 {
        rational_pow(wa, t.k as i64)
    } else {
        rational_pow(was, -(t.k as i64))
    };
    a * rational_pow(wc, t.l as i64) * rational_pow(wcs, t.m as i64)
}

impl Suq2 {
    /// `f_z` as a character with complex values.
    pub fn f_character(&self, sign: FSign, z: Cx) -> Character<Cx> {
        let e = sign.exponent() as f64;
        let qa = positive_power(self.qf, z * e);
        Character {
            value_on_a: qa,
            value_on_a_star: qa.inv(),
            value_on_c: Cx::new(0.0, 0.0),
            value_on_c_star: Cx::new(0.0, 0.0),
        }
    }

    /// `f_n` for integer `n`, exactly.
    pub fn f_character_exact(&self, sign: FSign, n: i64) -> Character<Rational> {
        let qa = rational_pow(&self.q, sign.exponent() * n);
        Character {
            value_on_a_star: qa.recip(),
            value_on_a: qa,
            value_on_c: <Rational as Scalar>::zero(),
            value_on_c_star: <Rational as Scalar>::zero(),
        }
    }

    /// `(χ_l ⊙ ι ⊙ χ_r)Δ⁽²⁾(x)`, computed as `(χ_l⊙ι)Δ((ι⊙χ_r)Δ(x))`.
    pub fn sandwich<K: Coeff>(
        &self,
        left: &Character<K>,
        x: &NcPoly<K>,
        right: &Character<K>,
    ) -> Result<NcPoly<K>> {
        let inner = self.slice_right(|t| right.eval(t), &self.comultiply(x)?);
        Ok(self.slice_left(|t| left.eval(t), &self.comultiply(&inner)?))
    }

    /// Convolution of characters, `(χ₁χ₂)(x) = (χ₁⊙χ₂)Δ(x)`, evaluated on `x`.
    pub fn convolve_characters<K: Coeff>(
        &self,
        c1: &Character<K>,
        c2: &Character<K>,
        x: &NcPoly<K>,
    ) -> Result<K> {
        let d = self.comultiply(x)?;
        Ok(d.iter().fold(K::zero(), |acc, ((s, t), v)| {
            acc + c1.eval(s) * c2.eval(t) * v.clone()
        }))
    }

    fn derive_rho(&self) -> Result<Vec<NcPoly<Rational>>> {
        let ansatz: Vec<PbwTerm> = std::iter::once(PbwTerm::ONE)
            .chain(Gen::ALL.iter().map(|g| g.term()))
            .collect();
        let tests = super::monomials(3);
        let mut out = Vec::new();
        for g in Gen::ALL {
            let gp = NcPoly::<Rational>::monomial(g.term());
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for y in &tests {
                let yp = NcPoly::monomial(*y);
                rows.push(
                    ansatz
                        .iter()
                        .map(|b| self.haar(&self.multiply(&yp, &NcPoly::monomial(*b))))
                        .collect::<Vec<_>>(),
                );
                rhs.push(self.haar(&self.multiply(&gp, &yp)));
            }
            match solve(&rows, &rhs) {
                Solution::Unique(x) => {
                    let mut p = NcPoly::zero();
                    for (b, c) in ansatz.iter().zip(x) {
                        p.add_term(*b, c);
                    }
                    out.push(p);
                }
                Solution::Underdetermined(_, d) => {
                    return Err(Suq2Error::RhoUnresolved(format!(
                        "ρ({g:?}) has a {d}-dimensional solution space"
                    )))
                }
                Solution::Inconsistent => {
                    return Err(Suq2Error::RhoUnresolved(format!(
                        "no ρ({g:?}) in span{{1, a, a*, c, c*}} satisfies h(xy) = h(yρ(x))"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Residuals of the two constraints on `f` for the given sign, on all
    /// monomials of degree `≤ d`.
    pub(crate) fn f_constraint_residuals(
        &self,
        sign: FSign,
        rho_diag: &[Rational; 4],
        d: usize,
    ) -> Result<(f64, f64)> {
        let f1 = self.f_character_exact(sign, 1);
        let fm1 = self.f_character_exact(sign, -1);
        let (mut s2, mut kms) = (0.0f64, 0.0f64);
        for t in super::monomials(d.min(self.degree_cap)) {
            let x = NcPoly::<Rational>::monomial(t);
            let lhs = self.sandwich(&f1, &x, &fm1)?;
            s2 = s2.max(lhs.sub(&self.s_squared(&x)).exact_size());
            let lhs = self.sandwich(&f1, &x, &f1)?;
            let rhs = x.scale(&diag_weight(rho_diag, &t));
            kms = kms.max(lhs.sub(&rhs).exact_size());
        }
        Ok((s2, kms))
    }

    /// Derives ρ, δ, μ, ν and the sign of `f_z`; cached after the first call.
    pub fn modular(&self) -> Result<&ModularSu> {
        self.modular
            .get_or_init(|| self.derive_modular())
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn derive_modular(&self) -> Result<ModularSu> {
        let rho_generators = self.derive_rho()?;
        let mut diag = Vec::new();
        for (g, img) in Gen::ALL.iter().zip(&rho_generators) {
            let t = g.term();
            if img.len() != 1 || img.coeff(&t) == <Rational as Scalar>::zero() {
                return Err(Suq2Error::NotDiagonal(format!("ρ({}) = {img:?}", t)));
            }
            diag.push(img.coeff(&t));
        }
        let rho_diag: [Rational; 4] = diag.try_into().expect("four generators");

        let cc = NcPoly::<Rational>::monomial(PbwTerm::new(0, 1, 1));
        let hcc = self.haar(&cc);
        let delta = self
            .slice_left(|t| self.haar_mono(t), &self.comultiply(&cc)?)
            .scale(&hcc.recip());
        let mu = self.haar(&self.s_squared(&cc)) / hcc;

        let neg = self.f_constraint_residuals(FSign::Negative, &rho_diag, 3)?;
        let pos = self.f_constraint_residuals(FSign::Positive, &rho_diag, 3)?;
        let ok = |r: (f64, f64)| r.0 == 0.0 && r.1 == 0.0;
        let (f_sign, f_sign_resolved) = match (self.faults.f_sign, ok(neg), ok(pos)) {
            (Some(s), _, _) => (s, false),
            (None, true, false) => (FSign::Negative, true),
            (None, false, true) => (FSign::Positive, true),
            (None, a, b) => {
                return Err(Suq2Error::FSignUnresolved(format!(
                    "negative sign satisfies constraints: {a}, positive: {b}"
                )))
            }
        };

        let space = GradedSpace::new(self, 2);
        let s2 = SpectralGroup::diagonal(space.s2_values()?)
            .map_err(|e| Suq2Error::NotDiagonal(e.to_string()))?;
        let phi: Vec<Cx> = space
            .basis
            .iter()
            .map(|t| self.haar::<Cx>(&NcPoly::monomial(*t)))
            .collect();
        let nu = compute_lambda(&s2, &phi, &[], &ToleranceCfg::default())
            .map(|o| o.lambda)
            .map_err(|e| Suq2Error::NotDiagonal(format!("ν: {e}")))?;

        Ok(ModularSu {
            rho_generators,
            rho_diag,
            delta,
            mu,
            nu,
            f_sign,
            f_sign_resolved,
            f_constraints: [neg, pos],
        })
    }

    /// `S²(t) = w·t`.
    pub fn s2_weight(&self, t: &PbwTerm) -> Result<Rational> {
        let x = NcPoly::<Rational>::monomial(*t);
        let y = self.s_squared(&x);
        if y.len() == 1 && !Scalar::is_zero(&y.coeff(t)) {
            Ok(y.coeff(t))
        } else {
            Err(Suq2Error::NotDiagonal(format!("S²({t}) = {y:?}")))
        }
    }

    /// `δ^w` by spectral calculus; only the unimodular case `δ = 1` occurs.
    pub fn delta_power(&self, _w: Cx) -> Result<NcPoly<Cx>> {
        let md = self.modular()?;
        if md.unimodular() {
            Ok(NcPoly::one())
        } else {
            Err(Suq2Error::NotUnimodular(format!("δ = {:?}", md.delta)))
        }
    }

    /// `τ_z`, the analytic extension of `t ↦ S²`-powers: `τ_{-i} = S²`.
    pub fn tau(&self, z: Cx, x: &NcPoly<Cx>) -> Result<NcPoly<Cx>> {
        let mut out = NcPoly::zero();
        for (t, v) in x.iter() {
            let w = crate::scalars::rational_to_f64(&self.s2_weight(t)?);
            out.add_term(*t, v * positive_power(w, I * z));
        }
        Ok(out)
    }

    /// `σ_z(x) = f_{iz} * x * f_{iz}`.
    pub fn sigma(&self, z: Cx, x: &NcPoly<Cx>) -> Result<NcPoly<Cx>> {
        let f = self.f_character(self.modular()?.f_sign, I * z);
        self.sandwich(&f, x, &f)
    }

    /// `σ_z` from the spectral calculus of the derived ρ, `σ_{-i} = ρ`.
    pub fn sigma_spectral(&self, z: Cx, x: &NcPoly<Cx>) -> Result<NcPoly<Cx>> {
        let md = self.modular()?;
        Ok(x.map(|t, v| {
            let w = crate::scalars::rational_to_f64(&md.rho_weight(t));
            v * positive_power(w, I * z)
        }))
    }

    /// `σ'_z(x) = δ^{iz}σ_z(x)δ^{-iz}`.
    pub fn sigma_prime(&self, z: Cx, x: &NcPoly<Cx>) -> Result<NcPoly<Cx>> {
        let s = self.sigma(z, x)?;
        let l = self.delta_power(I * z)?;
        let r = self.delta_power(-I * z)?;
        Ok(self.multiply(&self.multiply(&l, &s), &r))
    }

    /// `R = Sτ_{i/2}`.
    pub fn unitary_antipode(&self, x: &NcPoly<Cx>) -> Result<NcPoly<Cx>> {
        Ok(self.antipode(&self.tau(I * 0.5, x)?))
    }

    pub fn f_value(&self, z: Cx, x: &NcPoly<Cx>) -> Result<Cx> {
        Ok(self.f_character(self.modular()?.f_sign, z).eval_poly(x))
    }

    pub fn analytic_map(&self, kind: AnalyticKind, z: Cx, x: &NcPoly<Cx>) -> Result<AnalyticValue> {
        Ok(match kind {
            AnalyticKind::Sigma => AnalyticValue::Poly(self.sigma(z, x)?),
            AnalyticKind::SigmaPrime => AnalyticValue::Poly(self.sigma_prime(z, x)?),
            AnalyticKind::Tau => AnalyticValue::Poly(self.tau(z, x)?),
            AnalyticKind::R => AnalyticValue::Poly(self.unitary_antipode(x)?),
            AnalyticKind::F => AnalyticValue::Scalar(self.f_value(z, x)?),
        })
    }
}

/// The span of monomials of degree `≤ d` as a coordinate space. Products
/// leaving it are reported as unavailable.
pub struct GradedSpace<'a> {
    pub engine: &'a Suq2,
    pub basis: Vec<PbwTerm>,
    index: HashMap<PbwTerm, usize>,
}

impl<'a> GradedSpace<'a> {
    pub fn new(engine: &'a Suq2, d: usize) -> Self {
        let basis = super::monomials(d);
        let index = basis.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        GradedSpace {
            engine,
            basis,
            index,
        }
    }

    pub fn coords(&self, x: &NcPoly<Cx>) -> Option<Vec<Cx>> {
        let mut v = vec![Cx::new(0.0, 0.0); self.basis.len()];
        for (t, c) in x.iter() {
            v[*self.index.get(t)?] = *c;
        }
        Some(v)
    }

    pub fn poly(&self, v: &[Cx]) -> NcPoly<Cx> {
        let mut p = NcPoly::zero();
        for (t, c) in self.basis.iter().zip(v) {
            p.add_term(*t, *c);
        }
        p
    }

    /// Exact Gram matrix `K[r][c] = h(e_r* e_c)`.
    pub fn gram_exact(&self) -> Vec<Vec<Rational>> {
        let e = self.engine;
        self.basis
            .iter()
            .map(|r| {
                let rs = e.star(&NcPoly::<Rational>::monomial(*r));
                self.basis
                    .iter()
                    .map(|c| e.haar(&e.multiply(&rs, &NcPoly::monomial(*c))))
                    .collect()
            })
            .collect()
    }

    pub fn gram(&self) -> CMatrix {
        CMatrix::from_exact(&self.gram_exact())
    }

    /// Eigenvalues of S² on the basis (it is diagonal there).
    pub fn s2_values(&self) -> Result<Vec<f64>> {
        self.basis
            .iter()
            .map(|t| Ok(crate::scalars::rational_to_f64(&self.engine.s2_weight(t)?)))
            .collect()
    }

    /// Eigenvalues of ρ on the basis.
    pub fn rho_values(&self) -> Result<Vec<f64>> {
        let md = self.engine.modular()?;
        Ok(self
            .basis
            .iter()
            .map(|t| crate::scalars::rational_to_f64(&md.rho_weight(t)))
            .collect())
    }

    pub fn haar_covector(&self) -> Vec<Cx> {
        self.basis
            .iter()
            .map(|t| self.engine.haar::<Cx>(&NcPoly::monomial(*t)))
            .collect()
    }
}

impl CoordAlgebra for GradedSpace<'_> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn label(&self, i: usize) -> String {
        self.basis[i].to_string()
    }

    fn star(&self, x: &[Cx]) -> Vec<Cx> {
        let p = self.engine.star(&self.poly(x));
        self.coords(&p).expect("star preserves degree")
    }

    fn mul_basis(&self, i: usize, j: usize) -> Option<Vec<Cx>> {
        let p = self.engine.multiply(
            &NcPoly::<Cx>::monomial(self.basis[i]),
            &NcPoly::monomial(self.basis[j]),
        );
        self.coords(&p)
    }
}

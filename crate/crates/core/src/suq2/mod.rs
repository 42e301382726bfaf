//! Pol(SU_q(2)) as a rewriting system on PBW monomials `a^k c^l c*^m`.
//!
//! Relations: `ac = qca`, `ac* = qc*a`, `cc* = c*c`, `a*a = 1 - c*c`,
//! `aa* = 1 - q²cc*`. Coproduct on generators:
//! `Δa = a⊗a - q c*⊗c`, `Δc = c⊗a + a*⊗c`.
//!
//! Products of PBW monomials use a closed form whose structure constants are
//! memoised once, exactly, and reused for every coefficient type. The
//! word-rewriting [`normal_form`] is kept separate so the closed form can be
//! tested against it.

mod analytic;
mod suites;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use thiserror::Error;

use crate::scalars::{
    format_rational, rational_pow, rational_to_f64, Cx, Rational, Scalar, ScalarError,
};

pub use analytic::{AnalyticKind, AnalyticValue, Character, FSign, GradedSpace, ModularSu};
pub use suites::{
    haar_invariance_residual, haar_oracle_degree2, hopf_report, identity_suite, modular_report,
    oneparam_report,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Suq2Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("cannot resolve the sign of f_z: {0}")]
    FSignUnresolved(String),
    #[error("weak KMS automorphism not determined: {0}")]
    RhoUnresolved(String),
    #[error("not diagonal on PBW monomials: {0}")]
    NotDiagonal(String),
    #[error("modular element is not the unit: {0}")]
    NotUnimodular(String),
    #[error("unknown analytic map {0:?} (expected sigma, sigma_prime, tau, R or f)")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, Suq2Error>;

/// `a^k c^l c*^m`; negative `k` means `a*^{-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwTerm {
    pub k: i32,
    pub l: u32,
    pub m: u32,
}

impl PbwTerm {
    pub const ONE: PbwTerm = PbwTerm { k: 0, l: 0, m: 0 };

    pub fn new(k: i32, l: u32, m: u32) -> Self {
        PbwTerm { k, l, m }
    }

    pub fn degree(&self) -> usize {
        self.k.unsigned_abs() as usize + self.l as usize + self.m as usize
    }
}

impl fmt::Display for PbwTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |g: &str, e: u32| match e {
            0 => {}
            1 => parts.push(g.to_string()),
            _ => parts.push(format!("{g}^{e}")),
        };
        if self.k >= 0 {
            push("a", self.k as u32);
        } else {
            push("a*", self.k.unsigned_abs());
        }
        push("c", self.l);
        push("c*", self.m);
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// All monomials of degree `≤ d`, by degree and then `(k, l, m)`.
pub fn monomials(d: usize) -> Vec<PbwTerm> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let deg = deg as i32;
        for k in -deg..=deg {
            let rest = (deg - k.abs()) as u32;
            for l in 0..=rest {
                out.push(PbwTerm::new(k, l, rest - l));
            }
        }
    }
    out
}

/// Coefficient types that can be built from memoised exact constants.
pub trait Coeff: Scalar {
    fn from_cached(r: &Rational, f: f64) -> Self;
}

impl Coeff for Rational {
    fn from_cached(r: &Rational, _: f64) -> Self {
        r.clone()
    }
}

impl Coeff for Cx {
    fn from_cached(_: &Rational, f: f64) -> Self {
        Cx::new(f, 0.0)
    }
}

/// Sparse element of the algebra in the PBW basis.
#[derive(Clone, PartialEq)]
pub struct NcPoly<K> {
    terms: BTreeMap<PbwTerm, K>,
}

impl<K: Scalar> Default for NcPoly<K> {
    fn default() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Scalar> NcPoly<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(PbwTerm::ONE)
    }

    pub fn monomial(t: PbwTerm) -> Self {
        Self::term(t, K::one())
    }

    pub fn term(t: PbwTerm, c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(t, c);
        p
    }

    pub fn add_term(&mut self, t: PbwTerm, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn coeff(&self, t: &PbwTerm) -> K {
        self.terms.get(t).cloned().unwrap_or_else(K::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PbwTerm, &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|t| t.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (t, v) in &self.terms {
            out.add_term(*t, c.clone() * v.clone());
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, v) in &o.terms {
            out.add_term(*t, v.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, v) in &o.terms {
            out.add_term(*t, -v.clone());
        }
        out
    }

    /// Applies `f` to each coefficient.
    pub fn map<L: Scalar>(&self, f: impl Fn(&PbwTerm, &K) -> L) -> NcPoly<L> {
        let mut out = NcPoly::zero();
        for (t, v) in &self.terms {
            out.add_term(*t, f(t, v));
        }
        out
    }

    pub fn to_cx(&self) -> NcPoly<Cx> {
        self.map(|_, v| v.to_cx())
    }
}

impl<K: Scalar> fmt::Debug for NcPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, v)| format!("({v:?})·{t}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl NcPoly<Rational> {
    /// Max modulus of a coefficient; exactly 0 iff the polynomial is zero.
    pub fn exact_size(&self) -> f64 {
        self.terms
            .values()
            .map(|v| v.modulus().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Coefficientwise [`crate::scalars::scaled_diff`] over the union of supports.
pub fn poly_residual(x: &NcPoly<Cx>, y: &NcPoly<Cx>) -> f64 {
    let zero = Cx::new(0.0, 0.0);
    x.terms
        .keys()
        .chain(y.terms.keys())
        .map(|t| {
            crate::scalars::scaled_diff(
                x.terms.get(t).copied().unwrap_or(zero),
                y.terms.get(t).copied().unwrap_or(zero),
            )
        })
        .fold(0.0, f64::max)
}

/// Sparse element of `A ⊙ A`.
#[derive(Clone, PartialEq)]
pub struct TensorPoly<K> {
    terms: BTreeMap<(PbwTerm, PbwTerm), K>,
}

impl<K: Scalar> Default for TensorPoly<K> {
    fn default() -> Self {
        TensorPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Scalar> TensorPoly<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pure(x: &NcPoly<K>, y: &NcPoly<K>) -> Self {
        let mut out = Self::zero();
        for (s, u) in x.iter() {
            for (t, v) in y.iter() {
                out.add_term(*s, *t, u.clone() * v.clone());
            }
        }
        out
    }

    pub fn add_term(&mut self, s: PbwTerm, t: PbwTerm, c: K) {
        if c.is_zero() {
            return;
        }
        let key = (s, t);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(PbwTerm, PbwTerm), &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((s, t), v) in &o.terms {
            out.add_term(*s, *t, -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for ((s, t), v) in &self.terms {
            out.add_term(*s, *t, c.clone() * v.clone());
        }
        out
    }

    /// The flip `χ(x⊗y) = y⊗x`.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero();
        for ((s, t), v) in &self.terms {
            out.add_term(*t, *s, v.clone());
        }
        out
    }

    pub fn to_cx(&self) -> TensorPoly<Cx> {
        let mut out = TensorPoly::zero();
        for ((s, t), v) in &self.terms {
            out.add_term(*s, *t, v.to_cx());
        }
        out
    }
}

impl<K: Scalar> fmt::Debug for TensorPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((s, t), v)| format!("({v:?})·{s}⊗{t}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorPoly<Rational> {
    pub fn exact_size(&self) -> f64 {
        self.terms
            .values()
            .map(|v| v.modulus().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

pub fn tensor_residual(x: &TensorPoly<Cx>, y: &TensorPoly<Cx>) -> f64 {
    let zero = Cx::new(0.0, 0.0);
    x.terms
        .keys()
        .chain(y.terms.keys())
        .map(|k| {
            crate::scalars::scaled_diff(
                x.terms.get(k).copied().unwrap_or(zero),
                y.terms.get(k).copied().unwrap_or(zero),
            )
        })
        .fold(0.0, f64::max)
}

/// A generator of the algebra, for words handed to [`normal_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    A,
    AStar,
    C,
    CStar,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::AStar, Gen::C, Gen::CStar];

    pub fn term(self) -> PbwTerm {
        match self {
            Gen::A => PbwTerm::new(1, 0, 0),
            Gen::AStar => PbwTerm::new(-1, 0, 0),
            Gen::C => PbwTerm::new(0, 1, 0),
            Gen::CStar => PbwTerm::new(0, 0, 1),
        }
    }

    fn rank(self) -> u8 {
        match self {
            Gen::A | Gen::AStar => 0,
            Gen::C => 1,
            Gen::CStar => 2,
        }
    }
}

/// Rewrites a word in the generators to PBW normal form by repeatedly
/// applying the defining relations to the leftmost out-of-order pair.
pub fn normal_form(word: &[Gen], q: &Rational) -> NcPoly<Rational> {
    use Gen::*;
    let one = <Rational as Scalar>::one();
    let qi = q.recip();
    let q2 = q.clone() * q.clone();
    let mut out = NcPoly::zero();
    let mut stack: Vec<(Vec<Gen>, Rational)> = vec![(word.to_vec(), one.clone())];
    while let Some((w, c)) = stack.pop() {
        let pos = (0..w.len().saturating_sub(1)).find(|&i| {
            let (x, y) = (w[i], w[i + 1]);
            x.rank() > y.rank() || (x.rank() == 0 && y.rank() == 0 && x != y)
        });
        let Some(i) = pos else {
            let k = w.iter().filter(|g| **g == A).count() as i32
                - w.iter().filter(|g| **g == AStar).count() as i32;
            let l = w.iter().filter(|g| **g == C).count() as u32;
            let m = w.iter().filter(|g| **g == CStar).count() as u32;
            out.add_term(PbwTerm::new(k, l, m), c);
            continue;
        };
        let splice = |mid: &[Gen]| -> Vec<Gen> {
            let mut v = w[..i].to_vec();
            v.extend_from_slice(mid);
            v.extend_from_slice(&w[i + 2..]);
            v
        };
        match (w[i], w[i + 1]) {
            (C, A) => stack.push((splice(&[A, C]), c * qi.clone())),
            (CStar, A) => stack.push((splice(&[A, CStar]), c * qi.clone())),
            (C, AStar) => stack.push((splice(&[AStar, C]), c * q.clone())),
            (CStar, AStar) => stack.push((splice(&[AStar, CStar]), c * q.clone())),
            (CStar, C) => stack.push((splice(&[C, CStar]), c)),
            (A, AStar) => {
                stack.push((splice(&[]), c.clone()));
                stack.push((splice(&[C, CStar]), -(c * q2.clone())));
            }
            (AStar, A) => {
                stack.push((splice(&[]), c.clone()));
                stack.push((splice(&[C, CStar]), -c));
            }
            _ => unreachable!("pair is in order"),
        }
    }
    out
}

type MonoProduct = Arc<Vec<(PbwTerm, Rational, f64)>>;
type MonoCoproduct = Arc<Vec<(PbwTerm, PbwTerm, Rational, f64)>>;

/// Optional injected faults, used by the fault fixtures.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Suq2Faults {
    /// Added to `h(cc*)`.
    pub haar_cc_shift: Option<Rational>,
    /// Forces the exponent sign of `f_z(a)` instead of resolving it.
    pub f_sign: Option<FSign>,
}

/// The SU_q(2) engine at a fixed rational `q`.
pub struct Suq2 {
    q: Rational,
    qf: f64,
    degree_cap: usize,
    faults: Suq2Faults,
    mul_memo: RwLock<HashMap<(PbwTerm, PbwTerm), MonoProduct>>,
    delta_memo: RwLock<HashMap<PbwTerm, MonoCoproduct>>,
    modular: OnceLock<Result<ModularSu>>,
}

impl fmt::Debug for Suq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Suq2")
            .field("q", &format_rational(&self.q))
            .field("degree_cap", &self.degree_cap)
            .field("faults", &self.faults)
            .finish()
    }
}

impl Suq2 {
    pub fn new(q: Rational, degree_cap: usize) -> Result<Self> {
        Self::with_faults(q, degree_cap, Suq2Faults::default())
    }

    pub fn with_faults(q: Rational, degree_cap: usize, faults: Suq2Faults) -> Result<Self> {
        let qf = crate::scalars::q_power(&q, Cx::new(1.0, 0.0))?.re;
        Ok(Suq2 {
            q,
            qf,
            degree_cap,
            faults,
            mul_memo: RwLock::new(HashMap::new()),
            delta_memo: RwLock::new(HashMap::new()),
            modular: OnceLock::new(),
        })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn q_f64(&self) -> f64 {
        self.qf
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn faults(&self) -> &Suq2Faults {
        &self.faults
    }

    fn qpow(&self, n: i64) -> Rational {
        rational_pow(&self.q, n)
    }

    /// `A(p)A(r)` as `A(p + r)·P(cc*)`, `P` given by its coefficients.
    fn a_product(&self, p: i32, r: i32) -> (i32, Vec<Rational>) {
        let one = <Rational as Scalar>::one();
        let mut poly = vec![one];
        if (p >= 0) == (r >= 0) || p == 0 || r == 0 {
            return (p + r, poly);
        }
        let mut times = |f: Rational| {
            // poly ← poly·(1 - f N)
            let mut next = poly.clone();
            next.push(<Rational as Scalar>::zero());
            for (j, c) in poly.iter().enumerate() {
                next[j + 1] = next[j + 1].clone() - f.clone() * c.clone();
            }
            poly = next;
        };
        if p > 0 {
            // a^p a*^n = A(p-n) Π_{i<min} (1 - q^{2(n-i)} N)
            let n = -r;
            for i in 0..p.min(n) {
                times(self.qpow(2 * (n - i) as i64));
            }
        } else {
            // a*^n a^p = A(p-n) Π_{1≤i≤min} (1 - q^{-2(p-i)} N)
            let (n, pp) = (-p, r);
            for i in 1..=pp.min(n) {
                times(self.qpow(-2 * (pp - i) as i64));
            }
        }
        (p + r, poly)
    }

    /// Memoised product of two PBW monomials.
    pub fn mul_mono(&self, s: PbwTerm, t: PbwTerm) -> MonoProduct {
        if let Some(v) = self.mul_memo.read().unwrap().get(&(s, t)) {
            return v.clone();
        }
        // C(l,m) A(k) = q^{-(l+m)k} A(k) C(l,m)
        let pref = self.qpow(-((s.l + s.m) as i64) * t.k as i64);
        let (k, poly) = self.a_product(s.k, t.k);
        let v: Vec<(PbwTerm, Rational, f64)> = poly
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !Scalar::is_zero(c))
            .map(|(j, c)| {
                let term = PbwTerm::new(k, s.l + t.l + j as u32, s.m + t.m + j as u32);
                let c = pref.clone() * c;
                let f = rational_to_f64(&c);
                (term, c, f)
            })
            .collect();
        let v = Arc::new(v);
        self.mul_memo.write().unwrap().insert((s, t), v.clone());
        v
    }

    pub fn multiply<K: Coeff>(&self, x: &NcPoly<K>, y: &NcPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for (s, u) in x.iter() {
            for (t, v) in y.iter() {
                let uv = u.clone() * v.clone();
                for (r, c, f) in self.mul_mono(*s, *t).iter() {
                    out.add_term(*r, uv.clone() * K::from_cached(c, *f));
                }
            }
        }
        out
    }

    /// Product of generators, left to right.
    pub fn word<K: Coeff>(&self, w: &[Gen]) -> NcPoly<K> {
        w.iter().fold(NcPoly::one(), |acc, g| {
            self.multiply(&acc, &NcPoly::monomial(g.term()))
        })
    }

    /// `(A(k)C(l,m))* = q^{(l+m)k} A(-k) C(m,l)`.
    pub fn star_mono(&self, t: PbwTerm) -> (PbwTerm, Rational) {
        (
            PbwTerm::new(-t.k, t.m, t.l),
            self.qpow((t.l + t.m) as i64 * t.k as i64),
        )
    }

    pub fn star<K: Coeff>(&self, x: &NcPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for (t, v) in x.iter() {
            let (s, c) = self.star_mono(*t);
            let f = rational_to_f64(&c);
            out.add_term(s, v.conj() * K::from_cached(&c, f));
        }
        out
    }

    pub fn tensor_multiply<K: Coeff>(&self, x: &TensorPoly<K>, y: &TensorPoly<K>) -> TensorPoly<K> {
        let mut out = TensorPoly::zero();
        for ((s1, t1), u) in x.iter() {
            for ((s2, t2), v) in y.iter() {
                let uv = u.clone() * v.clone();
                let left = self.mul_mono(*s1, *s2);
                let right = self.mul_mono(*t1, *t2);
                for (s, c, f) in left.iter() {
                    let lc = uv.clone() * K::from_cached(c, *f);
                    for (t, d, g) in right.iter() {
                        out.add_term(*s, *t, lc.clone() * K::from_cached(d, *g));
                    }
                }
            }
        }
        out
    }

    pub fn tensor_star<K: Coeff>(&self, x: &TensorPoly<K>) -> TensorPoly<K> {
        let mut out = TensorPoly::zero();
        for ((s, t), v) in x.iter() {
            let (s2, c) = self.star_mono(*s);
            let (t2, d) = self.star_mono(*t);
            let cd = c * d;
            let f = rational_to_f64(&cd);
            out.add_term(s2, t2, v.conj() * K::from_cached(&cd, f));
        }
        out
    }

    fn delta_generator(&self, g: Gen) -> TensorPoly<Rational> {
        let one = <Rational as Scalar>::one();
        let mq = -self.q.clone();
        let (a, as_, c, cs) = (
            Gen::A.term(),
            Gen::AStar.term(),
            Gen::C.term(),
            Gen::CStar.term(),
        );
        let mut t = TensorPoly::zero();
        match g {
            Gen::A => {
                t.add_term(a, a, one);
                t.add_term(cs, c, mq);
            }
            Gen::AStar => {
                t.add_term(as_, as_, one);
                t.add_term(c, cs, mq);
            }
            Gen::C => {
                t.add_term(c, a, one.clone());
                t.add_term(as_, c, one);
            }
            Gen::CStar => {
                t.add_term(cs, as_, one.clone());
                t.add_term(a, cs, one);
            }
        }
        t
    }

    pub(crate) fn check_cap(&self, degree: usize) -> Result<()> {
        if degree > self.degree_cap {
            Err(Suq2Error::DegreeCap {
                degree,
                cap: self.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Memoised `Δ` of a monomial, built by peeling off the last generator.
    pub fn delta_mono(&self, t: PbwTerm) -> Result<MonoCoproduct> {
        self.check_cap(t.degree())?;
        if let Some(v) = self.delta_memo.read().unwrap().get(&t) {
            return Ok(v.clone());
        }
        let tensor: TensorPoly<Rational> = if t == PbwTerm::ONE {
            let mut u = TensorPoly::zero();
            u.add_term(PbwTerm::ONE, PbwTerm::ONE, <Rational as Scalar>::one());
            u
        } else {
            let (prev, g) = if t.m > 0 {
                (PbwTerm::new(t.k, t.l, t.m - 1), Gen::CStar)
            } else if t.l > 0 {
                (PbwTerm::new(t.k, t.l - 1, 0), Gen::C)
            } else if t.k > 0 {
                (PbwTerm::new(t.k - 1, 0, 0), Gen::A)
            } else {
                (PbwTerm::new(t.k + 1, 0, 0), Gen::AStar)
            };
            let base = self.delta_mono(prev)?;
            let mut bt = TensorPoly::zero();
            for (s, u, c, _) in base.iter() {
                bt.add_term(*s, *u, c.clone());
            }
            self.tensor_multiply(&bt, &self.delta_generator(g))
        };
        let v: Vec<_> = tensor
            .iter()
            .map(|((s, u), c)| (*s, *u, c.clone(), rational_to_f64(c)))
            .collect();
        let v = Arc::new(v);
        self.delta_memo.write().unwrap().insert(t, v.clone());
        Ok(v)
    }

    pub fn comultiply<K: Coeff>(&self, x: &NcPoly<K>) -> Result<TensorPoly<K>> {
        self.check_cap(x.degree())?;
        let mut out = TensorPoly::zero();
        for (t, v) in x.iter() {
            for (s, u, c, f) in self.delta_mono(*t)?.iter() {
                out.add_term(*s, *u, v.clone() * K::from_cached(c, *f));
            }
        }
        Ok(out)
    }

    /// `(ω ⊙ ι)t` for a functional given on monomials.
    pub fn slice_left<K: Coeff>(&self, w: impl Fn(&PbwTerm) -> K, t: &TensorPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for ((s, u), v) in t.iter() {
            let ws = w(s);
            if !ws.is_zero() {
                out.add_term(*u, ws * v.clone());
            }
        }
        out
    }

    /// `(ι ⊙ ω)t`.
    pub fn slice_right<K: Coeff>(&self, w: impl Fn(&PbwTerm) -> K, t: &TensorPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for ((s, u), v) in t.iter() {
            let wu = w(u);
            if !wu.is_zero() {
                out.add_term(*s, wu * v.clone());
            }
        }
        out
    }

    /// `m(t)`.
    pub fn multiply_legs<K: Coeff>(&self, t: &TensorPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for ((s, u), v) in t.iter() {
            for (r, c, f) in self.mul_mono(*s, *u).iter() {
                out.add_term(*r, v.clone() * K::from_cached(c, *f));
            }
        }
        out
    }

    /// Applies linear maps leg by leg.
    pub fn tensor_map<K: Coeff>(
        &self,
        f: impl Fn(&NcPoly<K>) -> Result<NcPoly<K>>,
        g: impl Fn(&NcPoly<K>) -> Result<NcPoly<K>>,
        t: &TensorPoly<K>,
    ) -> Result<TensorPoly<K>> {
        let mut out = TensorPoly::zero();
        for ((s, u), v) in t.iter() {
            let fs = f(&NcPoly::monomial(*s))?;
            let gu = g(&NcPoly::monomial(*u))?;
            for (s2, c) in fs.iter() {
                for (u2, d) in gu.iter() {
                    out.add_term(*s2, *u2, v.clone() * c.clone() * d.clone());
                }
            }
        }
        Ok(out)
    }

    /// `ε(a) = ε(a*) = 1`, `ε(c) = ε(c*) = 0`.
    pub fn counit_mono<K: Coeff>(&self, t: &PbwTerm) -> K {
        if t.l == 0 && t.m == 0 {
            K::one()
        } else {
            K::zero()
        }
    }

    pub fn counit<K: Coeff>(&self, x: &NcPoly<K>) -> K {
        x.iter().fold(K::zero(), |acc, (t, v)| {
            acc + self.counit_mono::<K>(t) * v.clone()
        })
    }

    /// `S(A(k)c^l c*^m) = (-1)^{l+m} q^{l-m+(l+m)k} A(-k)c^l c*^m`, from
    /// `S(a) = a*`, `S(c) = -qc`, `S(c*) = -q⁻¹c*` and anti-multiplicativity.
    pub fn antipode_mono(&self, t: PbwTerm) -> (PbwTerm, Rational) {
        let (l, m, k) = (t.l as i64, t.m as i64, t.k as i64);
        let mut c = self.qpow(l - m + (l + m) * k);
        if (l + m) % 2 == 1 {
            c = -c;
        }
        (PbwTerm::new(-t.k, t.l, t.m), c)
    }

    pub fn antipode<K: Coeff>(&self, x: &NcPoly<K>) -> NcPoly<K> {
        let mut out = NcPoly::zero();
        for (t, v) in x.iter() {
            let (s, c) = self.antipode_mono(*t);
            let f = rational_to_f64(&c);
            out.add_term(s, v.clone() * K::from_cached(&c, f));
        }
        out
    }

    pub fn s_squared<K: Coeff>(&self, x: &NcPoly<K>) -> NcPoly<K> {
        self.antipode(&self.antipode(x))
    }

    /// `h(a^k c^l c*^m) = [k = 0, l = m] (1 - q²)/(1 - q^{2l+2})`, plus any
    /// injected shift on `cc*`.
    pub fn haar_mono(&self, t: &PbwTerm) -> Rational {
        if t.k != 0 || t.l != t.m {
            return <Rational as Scalar>::zero();
        }
        let one = <Rational as Scalar>::one();
        let l = t.l as i64;
        let v = (one.clone() - self.qpow(2)) / (one - self.qpow(2 * l + 2));
        match (&self.faults.haar_cc_shift, t.l) {
            (Some(d), 1) => v + d.clone(),
            _ => v,
        }
    }

    pub fn haar<K: Coeff>(&self, x: &NcPoly<K>) -> K {
        x.iter().fold(K::zero(), |acc, (t, v)| {
            let h = self.haar_mono(t);
            let f = rational_to_f64(&h);
            acc + K::from_cached(&h, f) * v.clone()
        })
    }
}

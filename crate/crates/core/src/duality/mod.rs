//! The dual quantum group as a space of functionals on `A`.
//!
//! In the finite engine a dual element is a covector and every formula is
//! evaluated exactly. For Pol(SU_q(2)) the dual is infinite-dimensional, so
//! dual elements are evaluation procedures: expression trees over shifted
//! Haar states and characters, evaluated against test polynomials.

mod compact;
mod finite;
#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::finqg::FinqgError;
use crate::scalars::{Cx, QI};
use crate::suq2::{Character, NcPoly, Suq2, Suq2Error};

pub use compact::{
    closed_form, delta_hat_power, dual_haar_suq2, eps_sigma, f_link_check, suq2_duality_report,
    DualHaar, TruncatedFunctional,
};
pub use finite::{finite_duality_report, FiniteDuality};

const I: Cx = Cx::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualityError {
    #[error(transparent)]
    Finqg(#[from] FinqgError),
    #[error(transparent)]
    Suq2(#[from] Suq2Error),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("wrong engine: {0}")]
    WrongEngine(String),
    #[error("finite instance is not of Kac type: {0}")]
    NotKac(String),
    #[error("unknown dual analytic map {0:?}")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, DualityError>;

/// Which side of the Haar state the element sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarSide {
    /// `(h·a)(x) = h(ax)`.
    Left,
    /// `(a·h)(x) = h(xa)`; this is the Fourier transform `â`.
    Right,
}

/// An element of `Â`.
#[derive(Clone, Debug, PartialEq)]
pub enum DualElement {
    /// Values on the basis of a finite `A`.
    FiniteCovector(Vec<QI>),
    /// `h·a` or `a·h` on Pol(SU_q(2)); in the compact case `ψ = h`.
    ShiftedHaar { side: HaarSide, a: NcPoly<Cx> },
}

/// An element of `M(Â)`: a character or an element of `Â`.
#[derive(Clone, Debug, PartialEq)]
pub enum MultiplierFunctional {
    Character(Character<Cx>),
    Element(DualElement),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    SigmaHat,
    SigmaHatPrime,
    TauHat,
    RHat,
}

impl FromStr for DualKind {
    type Err = DualityError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma_hat" => Ok(DualKind::SigmaHat),
            "sigma_hat_prime" => Ok(DualKind::SigmaHatPrime),
            "tau_hat" => Ok(DualKind::TauHat),
            "R_hat" | "r_hat" => Ok(DualKind::RHat),
            _ => Err(DualityError::UnknownKind(s.into())),
        }
    }
}

impl fmt::Display for DualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualKind::SigmaHat => "sigma_hat",
            DualKind::SigmaHatPrime => "sigma_hat_prime",
            DualKind::TauHat => "tau_hat",
            DualKind::RHat => "R_hat",
        })
    }
}

/// A functional built from dual elements by the operations of `M(Â)`.
#[derive(Clone, Debug, PartialEq)]
pub enum DualExpr {
    Leaf(MultiplierFunctional),
    /// `(ω₁ω₂)(x) = (ω₁⊙ω₂)Δ(x)`.
    Product(Box<DualExpr>, Box<DualExpr>),
    /// `ω*(x) = conj(ω(S(x)*))`.
    Star(Box<DualExpr>),
    /// `Ŝ(ω)(x) = ω(S(x))`.
    Antipode(Box<DualExpr>),
    /// `σ̂_z`, `σ̂'_z`, `τ̂_z` or `R̂` applied to the inner functional.
    Analytic {
        kind: DualKind,
        z: Cx,
        inner: Box<DualExpr>,
    },
}

impl DualExpr {
    pub fn element(w: DualElement) -> Self {
        DualExpr::Leaf(MultiplierFunctional::Element(w))
    }

    pub fn character(c: Character<Cx>) -> Self {
        DualExpr::Leaf(MultiplierFunctional::Character(c))
    }

    pub fn times(self, o: DualExpr) -> Self {
        DualExpr::Product(Box::new(self), Box::new(o))
    }

    pub fn star(self) -> Self {
        DualExpr::Star(Box::new(self))
    }

    pub fn antipode(self) -> Self {
        DualExpr::Antipode(Box::new(self))
    }

    pub fn analytic(self, kind: DualKind, z: Cx) -> Self {
        DualExpr::Analytic {
            kind,
            z,
            inner: Box::new(self),
        }
    }
}

/// `â = a·h` on Pol(SU_q(2)).
pub fn fourier(a: &NcPoly<Cx>) -> DualElement {
    DualElement::ShiftedHaar {
        side: HaarSide::Right,
        a: a.clone(),
    }
}

pub fn dual_multiply(w1: DualExpr, w2: DualExpr) -> DualExpr {
    w1.times(w2)
}

pub fn dual_star(w: DualExpr) -> DualExpr {
    w.star()
}

pub fn dual_antipode(w: DualExpr) -> DualExpr {
    w.antipode()
}

/// Evaluates a dual functional on a test polynomial of Pol(SU_q(2)).
pub fn evaluate(e: &Suq2, w: &DualExpr, x: &NcPoly<Cx>) -> Result<Cx> {
    Ok(match w {
        DualExpr::Leaf(MultiplierFunctional::Character(c)) => c.eval_poly(x),
        DualExpr::Leaf(MultiplierFunctional::Element(DualElement::ShiftedHaar { side, a })) => {
            match side {
                HaarSide::Left => e.haar(&e.multiply(a, x)),
                HaarSide::Right => e.haar(&e.multiply(x, a)),
            }
        }
        DualExpr::Leaf(MultiplierFunctional::Element(DualElement::FiniteCovector(_))) => {
            return Err(DualityError::WrongEngine(
                "finite covector evaluated on Pol(SU_q(2))".into(),
            ))
        }
        DualExpr::Product(w1, w2) => {
            let mut acc = Cx::new(0.0, 0.0);
            for ((s, t), v) in e.comultiply(x)?.iter() {
                let l = evaluate(e, w1, &NcPoly::monomial(*s))?;
                if l == Cx::new(0.0, 0.0) {
                    continue;
                }
                acc += v * l * evaluate(e, w2, &NcPoly::monomial(*t))?;
            }
            acc
        }
        DualExpr::Star(w) => evaluate(e, w, &e.star(&e.antipode(x)))?.conj(),
        DualExpr::Antipode(w) => evaluate(e, w, &e.antipode(x))?,
        DualExpr::Analytic { kind, z, inner } => {
            let y = match kind {
                DualKind::SigmaHat => e.multiply(&e.tau(*z, x)?, &e.delta_power(-I * *z)?),
                DualKind::SigmaHatPrime => e.multiply(&e.delta_power(-I * *z)?, &e.tau(-*z, x)?),
                DualKind::TauHat => e.tau(*z, x)?,
                DualKind::RHat => e.unitary_antipode(x)?,
            };
            evaluate(e, inner, &y)?
        }
    })
}

/// Evaluates `kind_z(ω)` on `x`.
pub fn dual_analytic_apply(
    e: &Suq2,
    kind: DualKind,
    z: Cx,
    w: &DualExpr,
    x: &NcPoly<Cx>,
) -> Result<Cx> {
    evaluate(e, &w.clone().analytic(kind, z), x)
}

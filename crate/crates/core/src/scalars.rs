//! Coefficient arithmetic.
//!
//! Two regimes are used throughout the crate: exact arithmetic (`Rational`
//! and the Gaussian rationals `QI`) for structural identities, and complex
//! double precision (`Cx`) for anything involving a complex parameter
//! `z`. The [`Scalar`] trait lets polynomial and matrix code run in either.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;
pub type Cx = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    QOutOfRange(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("non-finite complex value {0}")]
    NonFinite(String),
}

/// Common interface of coefficient types.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_cx(&self) -> Cx;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn modulus(&self) -> f64 {
        self.to_cx().norm()
    }
}

/// Scalars with division. Only exact fields are used in elimination code.
pub trait Field: Scalar + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;
}

/// Fields in which `is_zero` is decided exactly.
pub trait ExactField: Field {}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_cx(&self) -> Cx {
        Cx::new(rational_to_f64(self), 0.0)
    }
    fn modulus(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl ExactField for Rational {}

impl Scalar for Cx {
    fn zero() -> Self {
        Cx::new(0.0, 0.0)
    }
    fn one() -> Self {
        Cx::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_rational(r: &Rational) -> Self {
        Cx::new(rational_to_f64(r), 0.0)
    }
    fn to_cx(&self) -> Cx {
        *self
    }
    fn from_i64(n: i64) -> Self {
        Cx::new(n as f64, 0.0)
    }
}

impl Field for Cx {
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
}

/// Converts a big rational to the nearest double.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerators/denominators: scale by bit length first.
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (r.numer() >> (shift as usize), r.denom() >> (shift as usize))
    } else {
        (r.numer().clone(), r.denom().clone())
    };
    n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| err())?,
        )),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QI {
    pub re: Rational,
    pub im: Rational,
}

impl QI {
    pub fn new(re: Rational, im: Rational) -> Self {
        QI { re, im }
    }

    pub fn real(re: Rational) -> Self {
        QI {
            re,
            im: Zero::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        QI::real(Rational::from_integer(BigInt::from(n)))
    }

    /// `|x|²`, exactly.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }
}

impl fmt::Debug for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", format_rational(&self.re))
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}i", format_rational(&self.im))
        } else {
            write!(
                f,
                "{}{}{}i",
                format_rational(&self.re),
                if self.im.is_negative() { "" } else { "+" },
                format_rational(&self.im)
            )
        }
    }
}

impl Add for QI {
    type Output = QI;
    fn add(self, o: QI) -> QI {
        QI::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for QI {
    type Output = QI;
    fn sub(self, o: QI) -> QI {
        QI::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for QI {
    type Output = QI;
    fn mul(self, o: QI) -> QI {
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return QI::real(self.re * o.re);
        }
        QI::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for QI {
    type Output = QI;
    fn neg(self) -> QI {
        QI::new(-self.re, -self.im)
    }
}

impl Div for QI {
    type Output = QI;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: QI) -> QI {
        self * o.inv().expect("division by zero")
    }
}

impl Scalar for QI {
    fn zero() -> Self {
        QI::default()
    }
    fn one() -> Self {
        QI::int(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn conj(&self) -> Self {
        QI::new(self.re.clone(), -self.im.clone())
    }
    fn from_rational(r: &Rational) -> Self {
        QI::real(r.clone())
    }
    fn to_cx(&self) -> Cx {
        Cx::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Field for QI {
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(QI::new(&self.re / &n, -&self.im / &n))
    }
}

impl ExactField for QI {}

/// Tolerance policy shared by every numerical check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceCfg {
    pub abs_tol: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub psd_floor: f64,
}

impl Default for ToleranceCfg {
    fn default() -> Self {
        ToleranceCfg {
            abs_tol: 1e-9,
            psd_floor: -1e-10,
        }
    }
}

impl ToleranceCfg {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        assert!(abs_tol > 0.0, "abs_tol must be positive");
        ToleranceCfg {
            abs_tol,
            ..Default::default()
        }
    }
}

/// `q^z = exp(z ln q)` for `0 < q < 1`; `ln q` is real so there is no branch ambiguity.
pub fn q_power(q: &Rational, z: Cx) -> Result<Cx, ScalarError> {
    if !q.is_positive() || *q >= <Rational as Scalar>::one() {
        return Err(ScalarError::QOutOfRange(format_rational(q)));
    }
    Ok(positive_power(rational_to_f64(q), z))
}

/// `base^z` for a strictly positive real base.
pub fn positive_power(base: f64, z: Cx) -> Cx {
    debug_assert!(base > 0.0, "principal powers need a positive base");
    (z * base.ln()).exp()
}

pub fn approx_eq(x: Cx, y: Cx, cfg: &ToleranceCfg) -> bool {
    (x - y).norm() <= cfg.abs_tol
}

/// `|x - y| / max(1, |x|, |y|)`: absolute near the origin, relative for large values.
pub fn scaled_diff(x: Cx, y: Cx) -> f64 {
    let d = (x - y).norm();
    if d.is_nan() {
        return f64::INFINITY;
    }
    d / 1f64.max(x.norm()).max(y.norm())
}

/// Coordinatewise maximum of [`scaled_diff`].
pub fn scaled_residual(x: &[Cx], y: &[Cx]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| scaled_diff(*a, *b))
        .fold(0.0, f64::max)
}

/// Rejects NaN and infinities.
pub fn finite(x: Cx) -> Result<Cx, ScalarError> {
    if x.re.is_finite() && x.im.is_finite() {
        Ok(x)
    } else {
        Err(ScalarError::NonFinite(format!("{x}")))
    }
}

/// Exact integer power of a rational (negative exponents allowed for nonzero bases).
pub fn rational_pow(q: &Rational, n: i64) -> Rational {
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Cx {
        Cx::new(0.0, 1.0)
    }

    #[test]
    fn q_power_trivial_values() {
        let q = rat(1, 2);
        assert_eq!(q_power(&q, Cx::new(0.0, 0.0)).unwrap(), Cx::new(1.0, 0.0));
        assert!((q_power(&q, Cx::new(2.0, 0.0)).unwrap() - 0.25).norm() < 1e-15);
    }

    #[test]
    fn q_power_imaginary_unit() {
        // exp(i ln(1/2)) = cos(ln 2) - i sin(ln 2), from the Euler formula directly.
        let l2 = 2f64.ln();
        let expected = Cx::new(l2.cos(), -l2.sin());
        let got = q_power(&rat(1, 2), i()).unwrap();
        assert!((got - expected).norm() < 1e-15);
        assert!((got - Cx::new(0.769239, -0.638961)).norm() < 1e-6);
        let cfg = ToleranceCfg::with_abs_tol(1e-6);
        assert!(approx_eq(Cx::new(0.769239, -0.638961), got, &cfg));
    }

    #[test]
    fn q_power_rejects_out_of_range() {
        assert!(q_power(&rat(0, 1), i()).is_err());
        assert!(q_power(&rat(1, 1), i()).is_err());
        assert!(q_power(&rat(3, 2), i()).is_err());
        assert!(q_power(&rat(-1, 2), i()).is_err());
    }

    #[test]
    fn approx_eq_threshold() {
        let cfg = ToleranceCfg::default();
        assert!(approx_eq(Cx::new(1.0, 0.0), Cx::new(1.0, 0.0), &cfg));
        assert!(!approx_eq(Cx::new(1.0, 0.0), Cx::new(1.0, 2e-9), &cfg));
    }

    #[test]
    fn finite_rejects_nan() {
        assert!(finite(Cx::new(f64::NAN, 0.0)).is_err());
        assert!(finite(Cx::new(0.0, f64::INFINITY)).is_err());
        assert!(finite(Cx::new(1.0, 2.0)).is_ok());
    }

    #[test]
    fn gaussian_rationals() {
        let a = QI::new(rat(1, 2), rat(-3, 4));
        let b = a.inv().unwrap();
        assert_eq!(a.clone() * b, QI::int(1));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(format!("{a}"), "1/2-3/4i");
        assert!(QI::zero().inv().is_none());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn huge_rationals_convert() {
        let big = rational_pow(&rat(1, 3), 2000);
        assert_eq!(rational_to_f64(&big), 0.0);
        let r = Rational::new(
            num_traits::pow(BigInt::from(10), 400) + 1,
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((rational_to_f64(&r) - 1.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn grid() -> impl Strategy<Value = Cx> {
            (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Cx::new(a, b))
        }

        proptest! {
            #[test]
            fn q_power_is_a_homomorphism(y in grid(), z in grid(), n in 1i64..10, d in 11i64..20) {
                let q = rat(n, d);
                let lhs = q_power(&q, y + z).unwrap();
                let rhs = q_power(&q, y).unwrap() * q_power(&q, z).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
            }

            #[test]
            fn q_power_commutes_with_conjugation(z in grid()) {
                let q = rat(1, 3);
                let a = q_power(&q, z.conj()).unwrap();
                let b = q_power(&q, z).unwrap().conj();
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
            }

            #[test]
            fn rationals_are_exact(n in 1i64..100_000, d in 1i64..100_000) {
                let x = rat(n, d);
                prop_assert_eq!(x.clone() * x.recip(), <Rational as Scalar>::one());
            }
        }
    }
}

//! Exact arithmetic: rationals, polynomials, Laurent families and jets.

mod degree;
mod jet;
mod laurent;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use degree::FiltDegree;
pub use jet::{Jet, Valuation};
pub use laurent::Laurent;
pub use poly::{Exponents, Poly};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer power with negative exponents allowed; `base` must be nonzero when
/// `exp < 0`.
pub fn rpow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Writes a rational the way the script language reads it back.
pub(crate) fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Writes `coeff*body` with sign handling for a term that is not the first
/// in a sum. `body` is empty for constants.
pub(crate) fn fmt_signed_term(
    f: &mut fmt::Formatter<'_>,
    coeff: &Rational,
    body: &str,
    first: bool,
) -> fmt::Result {
    let neg = coeff.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let mag = coeff.abs();
    if body.is_empty() {
        fmt_rational(&mag, f)
    } else if mag.is_one() {
        write!(f, "{body}")
    } else {
        fmt_rational(&mag, f)?;
        write!(f, "*{body}")
    }
}

/// Coefficient ring interface used by generic substitution and by jets.
///
/// Elements carry their own shape (variable list, Clifford dimension), so
/// zero and one are produced from an existing element.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elt(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn try_inverse(&self) -> Option<Self> {
        None
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn pow(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.times(self);
        }
        acc
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elt(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

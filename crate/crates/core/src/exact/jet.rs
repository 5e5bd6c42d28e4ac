use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{Rational, Ring};
use crate::{Error, Result};

/// Truncated power series `Σ_{n ≤ N} c_n t^n` over a coefficient ring.
///
/// Arithmetic is exact modulo `t^{N+1}`: sums and products of jets with
/// different truncation orders are truncated to the smaller one. Queries
/// past the truncation order are refused rather than guessed.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<R> {
    coeffs: Vec<R>,
}

/// Order of vanishing of a jet, as far as its truncation can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    /// The first nonzero coefficient sits at this index.
    Exact(usize),
    /// All stored coefficients vanish; the true order is at least this.
    AtLeast(usize),
}

impl<R: Ring> Jet<R> {
    /// Jet with the given coefficients; truncation order is `len - 1`.
    pub fn new(coeffs: Vec<R>) -> Jet<R> {
        assert!(!coeffs.is_empty(), "a jet has at least one coefficient");
        Jet { coeffs }
    }

    pub fn constant(c: R, truncation: usize) -> Jet<R> {
        let z = c.zero_like();
        let mut coeffs = vec![z; truncation + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// Builds a jet from `(power, coefficient)` pairs; powers above the
    /// truncation order are dropped.
    pub fn from_terms<I>(zero: &R, truncation: usize, terms: I) -> Jet<R>
    where
        I: IntoIterator<Item = (usize, R)>,
    {
        let mut coeffs = vec![zero.zero_like(); truncation + 1];
        for (k, c) in terms {
            if k <= truncation {
                coeffs[k] = coeffs[k].plus(&c);
            }
        }
        Jet { coeffs }
    }

    /// The jet `c·t^k`.
    pub fn monomial(c: R, k: usize, truncation: usize) -> Jet<R> {
        let z = c.zero_like();
        Jet::from_terms(&z, truncation, [(k, c)])
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&R> {
        self.coeffs.get(n).ok_or(Error::BeyondTruncation {
            index: n,
            truncation: self.truncation(),
        })
    }

    pub fn truncate(&self, n: usize) -> Jet<R> {
        let n = n.min(self.truncation());
        Jet {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero_elt()) {
            Some(k) => Valuation::Exact(k),
            None => Valuation::AtLeast(self.coeffs.len()),
        }
    }

    /// Whether the jet is `O(t^k)`. Fails when every stored coefficient
    /// vanishes but the truncation is too short to reach `t^{k-1}`.
    pub fn vanishes_to_order(&self, k: usize) -> Result<bool> {
        match self.valuation() {
            Valuation::Exact(v) => Ok(v >= k),
            Valuation::AtLeast(v) if v >= k => Ok(true),
            Valuation::AtLeast(_) => Err(Error::Undecidable {
                truncation: self.truncation(),
                needed: k - 1,
            }),
        }
    }

    /// Coefficientwise equality up to and including `t^order`.
    pub fn agrees_with(&self, other: &Jet<R>, order: usize) -> Result<bool> {
        let trunc = self.truncation().min(other.truncation());
        if order > trunc {
            return Err(Error::BeyondTruncation {
                index: order,
                truncation: trunc,
            });
        }
        Ok(self.coeffs[..=order] == other.coeffs[..=order])
    }

    pub fn map<S: Ring, F: Fn(&R) -> S>(&self, f: F) -> Jet<S> {
        Jet {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Jet<R>) -> Jet<R> {
        let n = self.truncation().min(other.truncation());
        Jet {
            coeffs: (0..=n).map(|k| self.coeffs[k].plus(&other.coeffs[k])).collect(),
        }
    }

    pub fn sub(&self, other: &Jet<R>) -> Jet<R> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet<R> {
        Jet {
            coeffs: self.coeffs.iter().map(Ring::negated).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Jet<R> {
        Jet {
            coeffs: self.coeffs.iter().map(|x| x.scaled(c)).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order. Coefficient order is
    /// preserved, so noncommutative rings are handled correctly.
    pub fn mul(&self, other: &Jet<R>) -> Jet<R> {
        let n = self.truncation().min(other.truncation());
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(zero.clone(), |acc, p| {
                    let a = &self.coeffs[p];
                    let b = &other.coeffs[k - p];
                    if a.is_zero_elt() || b.is_zero_elt() {
                        acc
                    } else {
                        acc.plus(&a.times(b))
                    }
                })
            })
            .collect();
        Jet { coeffs }
    }

    /// `exp` of a jet with vanishing constant term. The series is finite
    /// modulo `t^{N+1}`.
    pub fn exp_nilpotent(&self) -> Result<Jet<R>> {
        if !self.coeffs[0].is_zero_elt() {
            return Err(Error::Precondition(
                "exp of a jet needs a vanishing constant term".into(),
            ));
        }
        let n = self.truncation();
        let one = self.coeffs[0].one_like();
        let mut acc = Jet::constant(one.clone(), n);
        let mut power = Jet::constant(one, n);
        let mut factorial = BigInt::one();
        for k in 1..=n {
            power = power.mul(self);
            factorial *= BigInt::from(k);
            let inv = Rational::new(BigInt::one(), factorial.clone());
            acc = acc.add(&power.scale(&inv));
        }
        Ok(acc)
    }

    /// Two-sided inverse, available when the constant term is invertible.
    pub fn inverse(&self) -> Result<Jet<R>> {
        let a0inv = self.coeffs[0].try_inverse().ok_or(Error::NonInvertible)?;
        let n = self.truncation();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(a0inv.clone());
        for k in 1..=n {
            let mut s = a0inv.zero_like();
            for p in 1..=k {
                s = s.plus(&self.coeffs[p].times(&out[k - p]));
            }
            out.push(a0inv.times(&s).negated());
        }
        Ok(Jet { coeffs: out })
    }
}

impl<R: Ring> Ring for Jet<R> {
    fn zero_like(&self) -> Self {
        Jet::constant(self.coeffs[0].zero_like(), self.truncation())
    }
    fn one_like(&self) -> Self {
        Jet::constant(self.coeffs[0].one_like(), self.truncation())
    }
    fn is_zero_elt(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero_elt)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Jet<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elt() {
                continue;
            }
            let s = c.to_string();
            let s = if k > 0 && s.contains(' ') {
                format!("({s})")
            } else {
                s
            };
            let s = match (first, s.strip_prefix('-')) {
                (true, _) => s,
                (false, Some(rest)) => {
                    write!(f, " - ")?;
                    rest.to_string()
                }
                (false, None) => {
                    write!(f, " + ")?;
                    s
                }
            };
            first = false;
            match (k, s.as_str()) {
                (0, _) => write!(f, "{s}")?,
                (1, "1") => write!(f, "t")?,
                (1, _) => write!(f, "{s}*t")?,
                (_, "1") => write!(f, "t^{k}")?,
                _ => write!(f, "{s}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.truncation() + 1)
    }
}

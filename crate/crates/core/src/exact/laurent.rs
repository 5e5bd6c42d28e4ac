use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::forward_owned;
use super::{fmt_signed_term, rpow, Poly, Rational, Ring};
use crate::{Error, Result};

/// Finite Laurent polynomial `Σ t^k p_k` in a distinguished parameter `t`
/// with polynomial coefficients.
///
/// Used for deformation families: the value at `t = 1` is the original
/// object, the value at `t = 0` (when no negative powers occur) is its
/// homogeneous limit.
#[derive(Clone, PartialEq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Poly>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn from_poly(p: Poly) -> Laurent {
        Laurent::monomial(0, p)
    }

    /// `t^k · p`.
    pub fn monomial(k: i64, p: Poly) -> Laurent {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(k, p);
        }
        Laurent { terms }
    }

    /// `t^k` with a constant coefficient over `vars`.
    pub fn t_power(k: i64, vars: Arc<[String]>) -> Laurent {
        Laurent::monomial(k, Poly::constant_in(vars, Rational::one()))
    }

    /// Reads a polynomial in which the variable `param` plays the role of `t`.
    pub fn from_poly_in(p: &Poly, param: &str) -> Laurent {
        let Some(ti) = p.var_index(param) else {
            return Laurent::from_poly(p.clone());
        };
        let rest: Arc<[String]> = p
            .vars()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ti)
            .map(|(_, v)| v.clone())
            .collect();
        let mut out = Laurent::zero();
        for (e, c) in p.terms() {
            let mut ne = e.clone();
            let k = ne.remove(ti) as i64;
            out.add_term(k, Poly::monomial_in(rest.clone(), ne, c.clone()));
        }
        out
    }

    fn add_term(&mut self, k: i64, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.remove(&k);
        let sum = match entry {
            Some(q) => &q + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i64) -> Option<&Poly> {
        self.terms.get(&k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_negative_powers(&self) -> bool {
        self.min_power().is_some_and(|k| k < 0)
    }

    /// Most negative exponent, if any.
    pub fn negative_power(&self) -> Option<i64> {
        self.min_power().filter(|&k| k < 0)
    }

    fn any_vars(&self) -> Arc<[String]> {
        self.terms
            .values()
            .next()
            .map(|p| p.vars().clone())
            .unwrap_or_else(|| Arc::from(Vec::<String>::new()))
    }

    /// Value at a rational `t`. At `t = 0` this is the `t^0` coefficient and
    /// fails when negative powers are present.
    pub fn eval(&self, t: &Rational) -> Result<Poly> {
        if t.is_zero() {
            if let Some(k) = self.negative_power() {
                return Err(Error::NegativePower { power: k });
            }
            return Ok(self
                .terms
                .get(&0)
                .cloned()
                .unwrap_or_else(|| Poly::zero_in(self.any_vars())));
        }
        let mut acc = Poly::zero_in(self.any_vars());
        for (k, p) in &self.terms {
            acc = &acc + &p.scale(&rpow(t, *k));
        }
        Ok(acc)
    }

    pub fn at_zero(&self) -> Result<Poly> {
        self.eval(&Rational::zero())
    }

    pub fn at_one(&self) -> Poly {
        self.eval(&Rational::one()).expect("t = 1 is always defined")
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(j, p)| (j + k, p.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        let mut out = Laurent::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }

    pub fn map_polys<F: Fn(&Poly) -> Poly>(&self, f: F) -> Laurent {
        let mut out = Laurent::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, f(p));
        }
        out
    }

    /// Substitutes `t ↦ c·t`.
    pub fn rescale_param(&self, c: &Rational) -> Laurent {
        let mut out = Laurent::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(&rpow(c, *k)));
        }
        out
    }

    pub fn derivative(&self, name: &str) -> Laurent {
        self.map_polys(|p| p.derivative(name))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, p) in &self.terms {
            let tpart = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            for (e, c) in p.sorted_terms() {
                let mono = Poly::monomial_body(p.vars(), e);
                let body = match (tpart.is_empty(), mono.is_empty()) {
                    (true, _) => mono,
                    (false, true) => tpart.clone(),
                    (false, false) => format!("{tpart}*{mono}"),
                };
                fmt_signed_term(f, c, &body, first)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.add_term(*k, p.clone());
        }
        out
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (i, p) in &self.terms {
            for (j, q) in &rhs.terms {
                out.add_term(i + j, p * q);
            }
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(k, p)| (*k, -p)).collect(),
        }
    }
}

forward_owned!(Add, add, Laurent);
forward_owned!(Sub, sub, Laurent);
forward_owned!(Mul, mul, Laurent);

impl Ring for Laurent {
    fn zero_like(&self) -> Self {
        Laurent::zero()
    }
    fn one_like(&self) -> Self {
        Laurent::t_power(0, self.any_vars())
    }
    fn is_zero_elt(&self) -> bool {
        self.terms.is_empty()
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
        self.scale(c)
    }
}

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{fmt_signed_term, Rational, Ring};
use crate::{Error, Result};

/// Dense exponent vector, one entry per variable of the owning polynomial.
pub type Exponents = Vec<u32>;

/// Multivariate polynomial with rational coefficients.
///
/// The variable list is ordered and shared; terms map exponent vectors to
/// nonzero coefficients. Binary operations on polynomials with different
/// variable lists work over the union of both lists (left operand's variables
/// first), and equality is semantic: two polynomials are equal when they have
/// the same terms after alignment.
#[derive(Clone)]
pub struct Poly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, Rational>,
}

pub(crate) fn make_vars<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl Poly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Poly {
        Poly::zero_in(make_vars(vars))
    }

    pub fn zero_in(vars: Arc<[String]>) -> Poly {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Poly {
        Poly::constant_in(make_vars(vars), c)
    }

    pub fn constant_in(vars: Arc<[String]>, c: Rational) -> Poly {
        let n = vars.len();
        Poly::monomial_in(vars, vec![0; n], c)
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Poly {
        Poly::constant(vars, Rational::one())
    }

    pub fn monomial_in(vars: Arc<[String]>, exps: Exponents, c: Rational) -> Poly {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars, terms }
    }

    /// The coordinate function `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Poly> {
        Poly::var_in(make_vars(vars), name)
    }

    pub fn var_in(vars: Arc<[String]>, name: &str) -> Result<Poly> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        Ok(Poly::monomial_in(vars, exps, Rational::one()))
    }

    pub fn from_terms<I>(vars: Arc<[String]>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Poly::zero_in(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, c: Rational) {
        debug_assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        let zero = vec![0; self.vars.len()];
        self.terms.get(&zero).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Variables that occur with a positive exponent in some term.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// used variable.
    pub fn reindex(&self, target: &Arc<[String]>) -> Result<Poly> {
        if Arc::ptr_eq(&self.vars, target) || self.vars[..] == target[..] {
            return Ok(Poly {
                vars: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => map.push(None),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        let mut out = Poly::zero_in(target.clone());
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] += x;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    fn union_vars(a: &Arc<[String]>, b: &Arc<[String]>) -> Arc<[String]> {
        if Arc::ptr_eq(a, b) || a[..] == b[..] {
            return a.clone();
        }
        let mut names: Vec<String> = a.to_vec();
        for v in b.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        names.into()
    }

    /// Both operands over a common variable list.
    pub fn align(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let vars = Poly::union_vars(&a.vars, &b.vars);
        (
            a.reindex(&vars).expect("union contains all variables"),
            b.reindex(&vars).expect("union contains all variables"),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant_in(self.vars.clone(), Rational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `name`; zero when the variable is
    /// absent.
    pub fn derivative(&self, name: &str) -> Poly {
        let Some(i) = self.var_index(name) else {
            return Poly::zero_in(self.vars.clone());
        };
        self.derivative_at(i, 1)
    }

    /// `order`-fold partial derivative in the variable at index `i`.
    pub fn derivative_at(&self, i: usize, order: u32) -> Poly {
        let mut out = Poly::zero_in(self.vars.clone());
        if order == 0 {
            return self.clone();
        }
        for (e, c) in &self.terms {
            if e[i] < order {
                continue;
            }
            let mut factor = Rational::one();
            for k in 0..order {
                factor *= Rational::from_integer((e[i] - k).into());
            }
            let mut ne = e.clone();
            ne[i] -= order;
            out.add_term(ne, c * factor);
        }
        out
    }

    /// Applies `∂^beta`, where `beta` is indexed like `names`.
    pub fn derivative_multi(&self, names: &[String], beta: &[u32]) -> Poly {
        let mut out = self.clone();
        for (name, &b) in names.iter().zip(beta) {
            if b == 0 {
                continue;
            }
            match out.var_index(name) {
                Some(i) => out = out.derivative_at(i, b),
                None => return Poly::zero_in(self.vars.clone()),
            }
        }
        out
    }

    /// Ring homomorphism sending each used variable to `lookup(name)`.
    /// `one` fixes the shape of the target ring.
    pub fn substitute<R, F>(&self, lookup: F, one: &R) -> Result<R>
    where
        R: Ring,
        F: Fn(&str) -> Option<R>,
    {
        let mut values: Vec<Option<R>> = vec![None; self.vars.len()];
        for name in self.used_vars() {
            let i = self.var_index(&name).unwrap();
            values[i] = Some(lookup(&name).ok_or(Error::MissingAssignment(name))?);
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<R>> = values
            .iter()
            .map(|v| match v {
                Some(_) => vec![one.clone()],
                None => Vec::new(),
            })
            .collect();
        let mut acc = one.zero_like();
        for (e, c) in &self.terms {
            let mut term = one.scaled(c);
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let base = values[i].as_ref().unwrap();
                while powers[i].len() <= x as usize {
                    let next = powers[i].last().unwrap().times(base);
                    powers[i].push(next);
                }
                term = term.times(&powers[i][x as usize]);
            }
            acc = acc.plus(&term);
        }
        Ok(acc)
    }

    /// Substitution of polynomials for variables.
    pub fn substitute_polys(&self, assignment: &HashMap<String, Poly>) -> Result<Poly> {
        let target = match assignment.values().next() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        let one = Poly::constant_in(target, Rational::one());
        self.substitute(|name| assignment.get(name).cloned(), &one)
    }

    pub fn eval(&self, assignment: &HashMap<String, Rational>) -> Result<Rational> {
        self.substitute(|name| assignment.get(name).cloned(), &Rational::one())
    }

    /// Sets the named variables to zero, keeping the variable list.
    pub fn set_zero(&self, names: &[String]) -> Poly {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| idx.iter().all(|&i| e[i] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops variables that no term uses.
    pub fn compact(&self) -> Poly {
        let used = self.used_vars();
        let vars: Arc<[String]> = used.into();
        self.reindex(&vars).expect("used variables retained")
    }

    pub fn rename<F: Fn(&str) -> String>(&self, f: F) -> Poly {
        Poly {
            vars: self.vars.iter().map(|v| f(v)).collect(),
            terms: self.terms.clone(),
        }
    }

    pub fn filter_terms<F: Fn(&Exponents) -> bool>(&self, keep: F) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms in display order: ascending total degree, then descending
    /// exponent vectors.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }

    pub(crate) fn monomial_body(vars: &[String], e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (v, &x) in vars.iter().zip(e) {
            match x {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{x}")),
            }
        }
        parts.join("*")
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        if self.vars[..] == other.vars[..] {
            return self.terms == other.terms;
        }
        let (a, b) = Poly::align(self, other);
        a.terms == b.terms
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} in {:?})", &self.vars[..])
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let body = Poly::monomial_body(&self.vars, e);
            fmt_signed_term(f, c, &body, k == 0)?;
        }
        Ok(())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut a, b) = Poly::align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let (mut a, b) = Poly::align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let (a, b) = Poly::align(self, rhs);
        let mut out = Poly::zero_in(a.vars.clone());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, Poly);
forward_owned!(Sub, sub, Poly);
forward_owned!(Mul, mul, Poly);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero_in(self.vars.clone())
    }
    fn one_like(&self) -> Self {
        Poly::constant_in(self.vars.clone(), Rational::one())
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
    fn try_inverse(&self) -> Option<Self> {
        let c = self.constant_value()?;
        (!c.is_zero()).then(|| Poly::constant_in(self.vars.clone(), c.recip()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn x() -> Poly {
        Poly::var(&["x", "y"], "x").unwrap()
    }
    fn y() -> Poly {
        Poly::var(&["x", "y"], "y").unwrap()
    }

    #[test]
    fn display_orders_by_degree() {
        let p = &(&x().pow(3) + &y()) + &x().pow(2);
        assert_eq!(p.to_string(), "y + x^2 + x^3");
        let q = &x().pow(2) - &y().pow(2);
        assert_eq!(q.to_string(), "x^2 - y^2");
        assert_eq!(x().scale(&rat(-1, 2)).to_string(), "-1/2*x");
        assert_eq!(Poly::zero(&["x"]).to_string(), "0");
        assert_eq!(Poly::constant(&["x"], int(-3)).to_string(), "-3");
    }

    #[test]
    fn substitute_monomial_and_constants() {
        // x^2 with x -> t*u gives t^2*u^2.
        let f = x().pow(2);
        let tu = Poly::var(&["t", "u"], "t").unwrap() * Poly::var(&["t", "u"], "u").unwrap();
        let mut a = HashMap::new();
        a.insert("x".to_string(), tu.clone());
        let g = f.substitute_polys(&a).unwrap();
        assert_eq!(g, tu.pow(2));

        let one = Poly::one(&["x"]);
        assert_eq!(one.substitute_polys(&a).unwrap(), Poly::one(&["t"]));

        let s = &x() + &y();
        let mut sw = HashMap::new();
        sw.insert("x".to_string(), y());
        sw.insert("y".to_string(), x());
        assert_eq!(s.substitute_polys(&sw).unwrap(), s);
    }

    #[test]
    fn substitute_reports_missing_variable() {
        let f = &x() * &y();
        let mut a = HashMap::new();
        a.insert("x".to_string(), y());
        assert_eq!(
            f.substitute_polys(&a),
            Err(Error::MissingAssignment("y".to_string()))
        );
    }

    #[test]
    fn derivatives() {
        let f = &x().pow(3) * &y();
        assert_eq!(f.derivative("x"), (&x().pow(2) * &y()).scale(&int(3)));
        assert_eq!(f.derivative("z"), Poly::zero(&["x", "y"]));
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(f.derivative_multi(&names, &[2, 1]), x().scale(&int(6)));
    }

    #[test]
    fn equality_is_semantic_across_variable_lists() {
        let a = Poly::var(&["x"], "x").unwrap();
        let b = Poly::var(&["y", "x"], "x").unwrap();
        assert_eq!(a, b);
        assert_eq!(Poly::zero(&["x"]), Poly::zero(&["q"]));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let vars: Arc<[String]> = make_vars(&["a", "b", "c", "d"]);
        prop::collection::vec((prop::collection::vec(0u32..3, 4), -9i64..=9), 0..5)
            .prop_map(move |ts| Poly::from_terms(vars.clone(), ts.into_iter().map(|(e, c)| (e, int(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn substitution_is_multiplicative(f in arb_poly(), g in arb_poly(), imgs in prop::collection::vec(arb_poly(), 4)) {
            let names = ["a", "b", "c", "d"];
            let assign: HashMap<String, Poly> =
                names.iter().map(|n| n.to_string()).zip(imgs).collect();
            let lhs = (&f * &g).substitute_polys(&assign).unwrap();
            let rhs = &f.substitute_polys(&assign).unwrap() * &g.substitute_polys(&assign).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f + &g) - &g, f);
        }
    }
}

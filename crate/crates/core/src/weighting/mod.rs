//! Weightings on a single chart.
//!
//! A chart assigns nonnegative weights `w_a` to coordinates `x_a`. The
//! filtration degree of a polynomial is the minimum of `α·w` over its
//! monomials `x^α`; the submanifold `N` is cut out by the coordinates of
//! positive weight.

mod gr;
mod morphism;
mod path;
mod rees;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exact::{FiltDegree, Laurent, Poly};
use crate::{Error, Result};

pub use gr::{gr_mul, GrClass};
pub(crate) use morphism::first_violation as morphism_violation;
pub use morphism::{is_weighted_morphism, pullback_function};
pub use path::{is_weighted_path, path_order, push_path, witness_path, WeightedPath};
pub use rees::ReesElement;

/// Name of the rescaled coordinate used in deformation families.
pub fn tilde(name: &str) -> String {
    format!("{name}~")
}

pub fn untilde(name: &str) -> String {
    name.strip_suffix('~').unwrap_or(name).to_string()
}

/// Integer weights attached to variable names. Weights may be negative
/// (fiber coordinates of a bundle carry `-v_a`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    names: Arc<[String]>,
    weights: Vec<i64>,
}

impl Grading {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[i64]) -> Result<Grading> {
        if names.len() != weights.len() {
            return Err(Error::ArityMismatch {
                expected: names.len(),
                found: weights.len(),
            });
        }
        let names: Arc<[String]> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        Ok(Grading {
            names,
            weights: weights.to_vec(),
        })
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight_of(&self, name: &str) -> Option<i64> {
        self.names.iter().position(|n| n == name).map(|i| self.weights[i])
    }

    /// Weight of each variable of `p`, in `p`'s variable order. Variables
    /// unknown to the grading are an error only when actually used.
    fn weights_for(&self, p: &Poly) -> Result<Vec<i64>> {
        let used = p.used_vars();
        p.vars()
            .iter()
            .map(|v| match self.weight_of(v) {
                Some(w) => Ok(w),
                None if used.contains(v) => Err(Error::UnknownVariable(v.clone())),
                None => Ok(0),
            })
            .collect()
    }

    fn dot(wv: &[i64], e: &[u32]) -> i64 {
        wv.iter().zip(e).map(|(w, &x)| w * x as i64).sum()
    }

    /// Minimum weighted degree over the monomials of `p`.
    pub fn degree(&self, p: &Poly) -> Result<FiltDegree> {
        let wv = self.weights_for(p)?;
        Ok(p.terms()
            .map(|(e, _)| Grading::dot(&wv, e))
            .min()
            .map_or(FiltDegree::Infinite, FiltDegree::Finite))
    }

    /// Sum of the monomials of `p` whose weighted degree is exactly `i`.
    pub fn homogeneous_part(&self, p: &Poly, i: i64) -> Result<Poly> {
        let wv = self.weights_for(p)?;
        Ok(p.filter_terms(|e| Grading::dot(&wv, e) == i))
    }

    /// All nonzero homogeneous parts keyed by degree.
    pub fn homogeneous_parts(&self, p: &Poly) -> Result<BTreeMap<i64, Poly>> {
        let wv = self.weights_for(p)?;
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (e, c) in p.terms() {
            let d = Grading::dot(&wv, e);
            let m = Poly::monomial_in(p.vars().clone(), e.clone(), c.clone());
            let slot = out.remove(&d);
            out.insert(d, slot.map_or(m.clone(), |q| &q + &m));
        }
        Ok(out)
    }

    /// `t^{-i} · p(t^{w} x̃)`: each monomial `c x^α` becomes
    /// `c t^{α·w - i} x̃^α`.
    pub fn zoom(&self, p: &Poly, i: i64) -> Result<Laurent> {
        let wv = self.weights_for(p)?;
        let tvars: Arc<[String]> = p.vars().iter().map(|v| tilde(v)).collect();
        let mut out = Laurent::zero();
        for (e, c) in p.terms() {
            let k = Grading::dot(&wv, e) - i;
            let m = Poly::monomial_in(tvars.clone(), e.clone(), c.clone());
            out = &out + &Laurent::monomial(k, m);
        }
        Ok(out)
    }

    pub fn is_homogeneous(&self, p: &Poly, i: i64) -> Result<bool> {
        let wv = self.weights_for(p)?;
        Ok(p.terms().all(|(e, _)| Grading::dot(&wv, e) == i))
    }
}

/// Coordinate chart with nonnegative weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedChart {
    grading: Grading,
}

impl WeightedChart {
    pub fn new<S: AsRef<str>>(coords: &[S], weights: &[u32]) -> Result<WeightedChart> {
        let w: Vec<i64> = weights.iter().map(|&x| x as i64).collect();
        Ok(WeightedChart {
            grading: Grading::new(coords, &w)?,
        })
    }

    /// Builds a chart from `(name, weight)` pairs, rejecting negative weights.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, i64)]) -> Result<WeightedChart> {
        let names: Vec<&str> = pairs.iter().map(|(n, _)| n.as_ref()).collect();
        let mut ws = Vec::with_capacity(pairs.len());
        for (n, w) in pairs {
            if *w < 0 {
                return Err(Error::Precondition(format!(
                    "coordinate `{}` has negative weight {w}",
                    n.as_ref()
                )));
            }
            ws.push(*w as u32);
        }
        WeightedChart::new(&names, &ws)
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn coords(&self) -> &Arc<[String]> {
        self.grading.names()
    }

    pub fn dim(&self) -> usize {
        self.grading.names.len()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.grading.weights.iter().map(|&w| w as u32).collect()
    }

    pub fn weight_of(&self, name: &str) -> Option<u32> {
        self.grading.weight_of(name).map(|w| w as u32)
    }

    /// The coordinate function `name` as a polynomial over the chart.
    pub fn coord(&self, name: &str) -> Result<Poly> {
        Poly::var_in(self.coords().clone(), name)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero_in(self.coords().clone())
    }

    pub fn constant(&self, c: crate::Rational) -> Poly {
        Poly::constant_in(self.coords().clone(), c)
    }

    /// Coordinates of positive weight; their vanishing defines `N`.
    pub fn normal_coords(&self) -> Vec<String> {
        self.coords()
            .iter()
            .zip(&self.grading.weights)
            .filter(|(_, &w)| w > 0)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Restriction of a function to `N`.
    pub fn restrict_to_n(&self, p: &Poly) -> Poly {
        p.set_zero(&self.normal_coords())
    }

    pub fn filtration_degree(&self, f: &Poly) -> Result<FiltDegree> {
        self.grading.degree(f)
    }

    pub fn homogeneous_part(&self, f: &Poly, i: i64) -> Result<Poly> {
        self.grading.homogeneous_part(f, i)
    }

    /// The leading class `f^{[deg f]}`, or `None` for `f = 0`.
    pub fn leading_class(&self, f: &Poly) -> Result<Option<GrClass>> {
        match self.filtration_degree(f)? {
            FiltDegree::Infinite => Ok(None),
            FiltDegree::Finite(d) => Ok(Some(GrClass::new_unchecked(d, self.homogeneous_part(f, d)?))),
        }
    }

    /// The class `f^{[i]}` of `f` in level `i`; zero when `deg f > i`.
    pub fn class_at(&self, f: &Poly, i: i64) -> Result<GrClass> {
        let d = self.filtration_degree(f)?;
        if !d.at_least(i) {
            return Err(Error::DegreeViolation {
                required: i,
                actual: d.to_string(),
            });
        }
        Ok(GrClass::new_unchecked(i, self.homogeneous_part(f, i)?))
    }

    /// Zoom rescaling `t^{-i} f(t^{w_1} x̃_1, …, t^{w_m} x̃_m)`. Negative
    /// powers appear exactly when `deg f < i`.
    pub fn zoom_rescale(&self, f: &Poly, i: i64) -> Result<Laurent> {
        self.grading.zoom(f, i)
    }

    pub fn rees_make(&self, f: &Poly, i: i64) -> Result<ReesElement> {
        ReesElement::single(self, f, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn chart12() -> WeightedChart {
        WeightedChart::new(&["x1", "x2"], &[1, 2]).unwrap()
    }

    #[test]
    fn filtration_degree_examples() {
        let c = chart12();
        let x1 = c.coord("x1").unwrap();
        let x2 = c.coord("x2").unwrap();
        assert_eq!(c.filtration_degree(&(&x1 * &x2)).unwrap(), FiltDegree::Finite(3));
        assert_eq!(
            c.filtration_degree(&(&x1.pow(3) + &x2)).unwrap(),
            FiltDegree::Finite(2)
        );
        assert_eq!(c.filtration_degree(&c.zero()).unwrap(), FiltDegree::Infinite);
        assert_eq!(
            c.filtration_degree(&c.constant(int(7))).unwrap(),
            FiltDegree::Finite(0)
        );
        let z = Poly::var(&["z"], "z").unwrap();
        assert_eq!(c.filtration_degree(&z), Err(Error::UnknownVariable("z".into())));
    }

    #[test]
    fn constants_have_degree_zero_on_trivial_chart() {
        let c = WeightedChart::new(&["u", "v"], &[0, 0]).unwrap();
        let u = c.coord("u").unwrap();
        assert_eq!(c.filtration_degree(&u.pow(4)).unwrap(), FiltDegree::Finite(0));
        assert_eq!(
            c.filtration_degree(&c.constant(int(1))).unwrap(),
            FiltDegree::Finite(0)
        );
        assert!(c.normal_coords().is_empty());
    }

    #[test]
    fn homogeneous_part_examples() {
        let c = chart12();
        let x1 = c.coord("x1").unwrap();
        let x2 = c.coord("x2").unwrap();
        let f = &(&x1.pow(2) + &x2) + &x1.pow(3);
        assert_eq!(c.homogeneous_part(&f, 2).unwrap(), &x1.pow(2) + &x2);
        assert_eq!(
            c.homogeneous_part(&c.constant(int(5)), 0).unwrap(),
            c.constant(int(5))
        );
        assert!(c.homogeneous_part(&x1, 2).unwrap().is_zero());
        let parts = c.grading().homogeneous_parts(&f).unwrap();
        let total = parts.values().fold(c.zero(), |acc, p| &acc + p);
        assert_eq!(total, f);
    }

    #[test]
    fn zoom_examples() {
        let c = WeightedChart::new(&["x"], &[1]).unwrap();
        let x = c.coord("x").unwrap();
        let xt = Poly::var(&["x~"], "x~").unwrap();
        assert_eq!(
            c.zoom_rescale(&x.pow(2), 2).unwrap(),
            Laurent::from_poly(xt.pow(2))
        );
        let z = c.zoom_rescale(&(&x.pow(2) + &x.pow(3)), 2).unwrap();
        // Oracle: substitute x = t·x̃ through the generic ring homomorphism.
        let t_x = Laurent::monomial(1, xt.clone());
        let via_subs = (&x.pow(2) + &x.pow(3))
            .substitute(|_| Some(t_x.clone()), &Laurent::t_power(0, xt.vars().clone()))
            .unwrap()
            .shift(-2);
        assert_eq!(z, via_subs);
        assert_eq!(z.to_string(), "x~^2 + t*x~^3");
        let neg = c.zoom_rescale(&x, 2).unwrap();
        assert_eq!(neg.negative_power(), Some(-1));
        assert_eq!(neg, Laurent::monomial(-1, xt));
    }

    #[test]
    fn class_at_rejects_low_degree() {
        let c = chart12();
        let x1 = c.coord("x1").unwrap();
        assert!(matches!(c.class_at(&x1, 2), Err(Error::DegreeViolation { .. })));
        assert!(c.class_at(&x1.pow(3), 2).unwrap().is_zero());
    }
}

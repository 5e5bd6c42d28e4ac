use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{GrClass, WeightedChart};
use crate::exact::{rpow, Poly, Rational};
use crate::{Error, Result};

/// Element `Σ_i f_i z^{-i}` of the Rees algebra, with `deg f_i ≥ i` for
/// every stored component.
#[derive(Debug, Clone, PartialEq)]
pub struct ReesElement {
    chart: WeightedChart,
    components: BTreeMap<i64, Poly>,
}

impl ReesElement {
    /// `f z^{-i}`; requires `deg f ≥ i`.
    pub fn single(chart: &WeightedChart, f: &Poly, i: i64) -> Result<ReesElement> {
        ReesElement::from_components(chart, [(i, f.clone())])
    }

    pub fn from_components<I>(chart: &WeightedChart, comps: I) -> Result<ReesElement>
    where
        I: IntoIterator<Item = (i64, Poly)>,
    {
        let mut out = ReesElement {
            chart: chart.clone(),
            components: BTreeMap::new(),
        };
        for (i, f) in comps {
            let d = chart.filtration_degree(&f)?;
            if !d.at_least(i) {
                return Err(Error::DegreeViolation {
                    required: i,
                    actual: d.to_string(),
                });
            }
            out.add_component(i, f);
        }
        Ok(out)
    }

    fn add_component(&mut self, i: i64, f: Poly) {
        let sum = match self.components.remove(&i) {
            Some(g) => &g + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.components.insert(i, sum);
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, Poly> {
        &self.components
    }

    /// The fiber over `t ≠ 0`: `Σ t^{-i} f_i`.
    pub fn eval(&self, t: &Rational) -> Result<Poly> {
        if t.is_zero() {
            return Err(Error::Precondition(
                "the fiber at t = 0 is the graded fiber; use fiber0".into(),
            ));
        }
        let mut acc = self.chart.zero();
        for (i, f) in &self.components {
            acc = &acc + &f.scale(&rpow(t, -i));
        }
        Ok(acc)
    }

    /// The fiber over `t = 0`: the formal sum of the classes `f_i^{[i]}`.
    pub fn fiber0(&self) -> Result<Vec<GrClass>> {
        self.components
            .iter()
            .map(|(i, f)| self.chart.class_at(f, *i))
            .filter(|c| !matches!(c, Ok(c) if c.is_zero()))
            .collect()
    }

    pub fn add(&self, other: &ReesElement) -> ReesElement {
        let mut out = self.clone();
        for (i, f) in &other.components {
            out.add_component(*i, f.clone());
        }
        out
    }

    /// `(f z^{-i})(g z^{-j}) = fg z^{-(i+j)}`.
    pub fn mul(&self, other: &ReesElement) -> ReesElement {
        let mut out = ReesElement {
            chart: self.chart.clone(),
            components: BTreeMap::new(),
        };
        for (i, f) in &self.components {
            for (j, g) in &other.components {
                out.add_component(i + j, f * g);
            }
        }
        out
    }
}

impl fmt::Display for ReesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, p)) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})*z^{}", -i)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn rees_examples() {
        let c = WeightedChart::new(&["x"], &[1]).unwrap();
        let x = c.coord("x").unwrap();
        let f = &x.pow(2) + &x.pow(3);
        let e = c.rees_make(&f, 2).unwrap();
        assert_eq!(e.eval(&int(1)).unwrap(), f);
        let fiber = e.fiber0().unwrap();
        assert_eq!(fiber.len(), 1);
        assert_eq!(fiber[0].degree(), 2);
        assert_eq!(fiber[0].rep(), &x.pow(2));

        let e0 = c.rees_make(&x, 0).unwrap();
        assert_eq!(e0.eval(&int(2)).unwrap(), x);
        // deg x = 1 > 0, so the class at level 0 vanishes.
        assert!(e0.fiber0().unwrap().is_empty());

        assert!(matches!(
            c.rees_make(&x, 2),
            Err(Error::DegreeViolation { required: 2, .. })
        ));
    }

    #[test]
    fn eval_scales_by_inverse_powers() {
        let c = WeightedChart::new(&["x"], &[1]).unwrap();
        let x = c.coord("x").unwrap();
        let e = c.rees_make(&x.pow(3), 2).unwrap();
        assert_eq!(e.eval(&int(2)).unwrap(), x.pow(3).scale(&crate::exact::rat(1, 4)));
        assert!(e.eval(&int(0)).is_err());
    }

    #[test]
    fn fiber_maps_are_multiplicative() {
        let c = WeightedChart::new(&["x", "y"], &[1, 2]).unwrap();
        let x = c.coord("x").unwrap();
        let y = c.coord("y").unwrap();
        let a = c.rees_make(&(&x.pow(2) + &y), 2).unwrap();
        let b = c.rees_make(&(&x + &(&x * &y)), 1).unwrap();
        let ab = a.mul(&b);
        let t = int(3);
        assert_eq!(ab.eval(&t).unwrap(), &a.eval(&t).unwrap() * &b.eval(&t).unwrap());
        let g = ab.fiber0().unwrap();
        let ga = &a.fiber0().unwrap()[0];
        let gb = &b.fiber0().unwrap()[0];
        assert_eq!(g, vec![crate::weighting::gr_mul(ga, gb)]);
    }
}

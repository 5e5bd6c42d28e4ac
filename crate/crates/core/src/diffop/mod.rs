//! Differential operators with polynomial coefficients on weighted bundles.
//!
//! A term `(a, b, β, c)` stands for `c·∂^β` mapping the `b`-th frame slot
//! to the `a`-th one. Its weighted order is `deg c - β·w + v_a - v_b`.

mod family;
mod recover;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::bundle::{GrSection, Section, WeightedBundle};
use crate::exact::{FiltDegree, Poly, Rational};
use crate::weighting::WeightedChart;
use crate::{Error, Result};

pub use family::OpFamily;
pub use recover::{recover_scalar_weighting, recover_section_weighting};

/// Key of a term: target slot, source slot, derivative multi-index.
pub type TermKey = (usize, usize, Vec<u32>);

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    bundle: WeightedBundle,
    terms: BTreeMap<TermKey, Poly>,
}

impl DiffOp {
    pub fn zero(bundle: &WeightedBundle) -> DiffOp {
        DiffOp {
            bundle: bundle.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Collects `(a, b, β, c)` terms into normal form.
    pub fn from_terms<I>(bundle: &WeightedBundle, terms: I) -> Result<DiffOp>
    where
        I: IntoIterator<Item = (usize, usize, Vec<u32>, Poly)>,
    {
        let mut out = DiffOp::zero(bundle);
        let m = bundle.base().dim();
        for (a, b, beta, c) in terms {
            let k = bundle.rank();
            if a >= k || b >= k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    found: a.max(b) + 1,
                });
            }
            if beta.len() != m {
                return Err(Error::ArityMismatch {
                    expected: m,
                    found: beta.len(),
                });
            }
            let c = c.reindex(bundle.base().coords())?;
            out.add_term((a, b, beta), c);
        }
        Ok(out)
    }

    /// Operator on functions of the chart.
    pub fn scalar<I>(chart: &WeightedChart, terms: I) -> Result<DiffOp>
    where
        I: IntoIterator<Item = (Vec<u32>, Poly)>,
    {
        let b = WeightedBundle::trivial(chart);
        DiffOp::from_terms(&b, terms.into_iter().map(|(beta, c)| (0, 0, beta, c)))
    }

    /// `∂/∂x` acting on every frame slot.
    pub fn partial(bundle: &WeightedBundle, coord: &str) -> Result<DiffOp> {
        let base = bundle.base();
        let j = base
            .coords()
            .iter()
            .position(|c| c == coord)
            .ok_or_else(|| Error::UnknownVariable(coord.to_string()))?;
        let mut beta = vec![0; base.dim()];
        beta[j] = 1;
        let one = base.constant(crate::exact::int(1));
        DiffOp::from_terms(
            bundle,
            (0..bundle.rank()).map(|a| (a, a, beta.clone(), one.clone())),
        )
    }

    /// Multiplication by a function on every frame slot.
    pub fn multiplication(bundle: &WeightedBundle, f: &Poly) -> Result<DiffOp> {
        let m = bundle.base().dim();
        DiffOp::from_terms(bundle, (0..bundle.rank()).map(|a| (a, a, vec![0; m], f.clone())))
    }

    fn add_term(&mut self, key: TermKey, c: Poly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(d) => &d + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn bundle(&self) -> &WeightedBundle {
        &self.bundle
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_bundle(&self, other: &DiffOp) -> Result<()> {
        if self.bundle != other.bundle {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.same_bundle(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(&self.bundle);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(r));
        }
        out
    }

    /// `self ∘ other` by the Leibniz rule
    /// `c∂^β ∘ e∂^γ = Σ_{δ ≤ β} C(β,δ) c (∂^δ e) ∂^{β-δ+γ}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.same_bundle(other)?;
        let coords = self.bundle.base().coords().to_vec();
        let mut out = DiffOp::zero(&self.bundle);
        for ((a, b, beta), c) in &self.terms {
            for ((b2, d, gamma), e) in &other.terms {
                if b != b2 {
                    continue;
                }
                for delta in sub_indices(beta) {
                    let coeff: BigInt = beta
                        .iter()
                        .zip(&delta)
                        .map(|(&n, &k)| binomial(BigInt::from(n), BigInt::from(k)))
                        .product();
                    let de = e.derivative_multi(&coords, &delta);
                    if de.is_zero() {
                        continue;
                    }
                    let key: Vec<u32> = beta
                        .iter()
                        .zip(&delta)
                        .zip(gamma)
                        .map(|((&bj, &dj), &gj)| bj - dj + gj)
                        .collect();
                    let term = (c * &de).scale(&Rational::from_integer(coeff));
                    out.add_term((*a, *d, key), term);
                }
            }
        }
        Ok(out)
    }

    /// `(Dσ)_a = Σ_b c ∂^β f_b`.
    pub fn apply(&self, sigma: &Section) -> Result<Section> {
        if sigma.bundle() != &self.bundle {
            return Err(Error::BaseMismatch);
        }
        let coords = self.bundle.base().coords().to_vec();
        let mut comps = vec![self.bundle.base().zero(); self.bundle.rank()];
        for ((a, b, beta), c) in &self.terms {
            let d = sigma.components()[*b].derivative_multi(&coords, beta);
            comps[*a] = &comps[*a] + &(c * &d);
        }
        Section::new(&self.bundle, comps)
    }

    /// Action on a function, for operators on the trivial line bundle.
    pub fn apply_scalar(&self, f: &Poly) -> Result<Poly> {
        if self.bundle.rank() != 1 {
            return Err(Error::Precondition("operator is not scalar".into()));
        }
        let s = Section::new(&self.bundle, vec![f.clone()])?;
        Ok(self.apply(&s)?.components()[0].clone())
    }

    fn beta_weight(&self, beta: &[u32]) -> i64 {
        self.bundle
            .base()
            .weights()
            .iter()
            .zip(beta)
            .map(|(&w, &b)| w as i64 * b as i64)
            .sum()
    }

    /// `deg c - β·w + v_a - v_b` for one term.
    pub fn term_order(&self, key: &TermKey, c: &Poly) -> FiltDegree {
        let (a, b, beta) = key;
        let v = self.bundle.vweights();
        self.bundle
            .base()
            .filtration_degree(c)
            .expect("coefficients live over the base")
            .shift(v[*a] - v[*b] - self.beta_weight(beta))
    }

    /// Weighted order: the minimum of the term orders.
    pub fn order(&self) -> FiltDegree {
        self.terms
            .iter()
            .map(|(k, c)| self.term_order(k, c))
            .min()
            .unwrap_or(FiltDegree::Infinite)
    }

    fn check_order(&self, q: i64) -> Result<()> {
        let d = self.order();
        if !d.at_least(q) {
            return Err(Error::DegreeViolation {
                required: q,
                actual: d.to_string(),
            });
        }
        Ok(())
    }

    /// Degree the coefficient of a term must have for the term to be of
    /// order exactly `q`.
    fn coefficient_level(&self, key: &TermKey, q: i64) -> i64 {
        let (a, b, beta) = key;
        let v = self.bundle.vweights();
        q + self.beta_weight(beta) - v[*a] + v[*b]
    }

    /// `D^{[q]}`: each coefficient is cut down to its homogeneous part of
    /// the degree that makes the term of order exactly `q`.
    pub fn linearize(&self, q: i64) -> Result<DiffOp> {
        self.check_order(q)?;
        let base = self.bundle.base();
        let mut out = DiffOp::zero(&self.bundle);
        for (k, c) in &self.terms {
            let h = base.homogeneous_part(c, self.coefficient_level(k, q))?;
            out.add_term(k.clone(), h);
        }
        Ok(out)
    }

    /// `D^{[q]} σ^{[i]}`, a class at level `i + q`.
    pub fn apply_graded(&self, q: i64, sigma: &GrSection) -> Result<GrSection> {
        let lin = self.linearize(q)?;
        let s = Section::new(&self.bundle, sigma.components().to_vec())?;
        Ok(GrSection::new(
            sigma.degree() + q,
            lin.apply(&s)?.components().to_vec(),
        ))
    }

    /// Deformation family `D̃^{[q]}`.
    pub fn interpolate(&self, q: i64) -> Result<OpFamily> {
        OpFamily::new(self, q)
    }
}

/// All `δ` with `0 ≤ δ ≤ β` componentwise.
pub(crate) fn sub_indices(beta: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(beta.len())];
    for &b in beta {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

pub(crate) fn fmt_derivatives(coords: &[String], beta: &[u32]) -> String {
    let mut parts = Vec::new();
    for (c, &k) in coords.iter().zip(beta) {
        match k {
            0 => {}
            1 => parts.push(format!("d[{c}]")),
            _ => parts.push(format!("d[{c}]^{k}")),
        }
    }
    parts.join("*")
}

/// `coeff*body` with parentheses around multi-term coefficients.
pub(crate) fn fmt_term(coeff: &str, body: &str, multi: bool) -> String {
    match (body.is_empty(), multi) {
        (true, _) => coeff.to_string(),
        (false, true) => format!("({coeff})*{body}"),
        (false, false) if coeff == "1" => body.to_string(),
        (false, false) if coeff == "-1" => format!("-{body}"),
        (false, false) => format!("{coeff}*{body}"),
    }
}

/// Joins rendered terms with ` + ` and ` - `.
pub(crate) fn join_terms(parts: &[String]) -> String {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let coords = self.bundle.base().coords();
        let scalar = self.bundle.is_trivial_line();
        let mut parts = Vec::new();
        for ((a, b, beta), c) in &self.terms {
            let mut body = Vec::new();
            if !scalar {
                body.push(self.bundle.frame_names()[*a].clone());
                body.push(self.bundle.fiber_coords()[*b].clone());
            }
            let d = fmt_derivatives(coords, beta);
            if !d.is_empty() {
                body.push(d);
            }
            parts.push(fmt_term(&c.to_string(), &body.join("*"), c.num_terms() > 1));
        }
        write!(f, "{}", join_terms(&parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn line() -> WeightedChart {
        WeightedChart::new(&["x"], &[1]).unwrap()
    }

    fn x() -> Poly {
        line().coord("x").unwrap()
    }

    fn dx() -> DiffOp {
        DiffOp::partial(&WeightedBundle::trivial(&line()), "x").unwrap()
    }

    fn mul(f: &Poly) -> DiffOp {
        DiffOp::multiplication(&WeightedBundle::trivial(&line()), f).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(dx().order(), FiltDegree::Finite(-1));
        assert_eq!(
            mul(&x().pow(2)).compose(&dx()).unwrap().order(),
            FiltDegree::Finite(1)
        );
        let c = WeightedChart::new(&["x1", "x2"], &[1, 2]).unwrap();
        let d2 = DiffOp::partial(&WeightedBundle::trivial(&c), "x2").unwrap();
        assert_eq!(d2.order(), FiltDegree::Finite(-2));
        let z = dx().add(&dx().scale(&int(-1))).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.order(), FiltDegree::Infinite);
    }

    #[test]
    fn leibniz() {
        // ∂ ∘ x = x∂ + 1
        let d = dx().compose(&mul(&x())).unwrap();
        let expect = mul(&x())
            .compose(&dx())
            .unwrap()
            .add(&mul(&line().constant(int(1))))
            .unwrap();
        assert_eq!(d, expect);
        let dd = dx().compose(&dx()).unwrap();
        assert_eq!(dd.apply_scalar(&x().pow(3)).unwrap(), x().scale(&int(6)));
        assert_eq!(d.to_string(), "1 + x*d[x]");
    }

    #[test]
    fn linearization_examples() {
        let d = dx().add(&mul(&x()).compose(&dx()).unwrap()).unwrap();
        assert_eq!(d.linearize(-1).unwrap(), dx());
        assert_eq!(dx().linearize(-1).unwrap(), dx());
        let e = mul(&(&x().pow(2) + &x().pow(3))).compose(&dx()).unwrap();
        assert_eq!(e.linearize(1).unwrap(), mul(&x().pow(2)).compose(&dx()).unwrap());
        assert!(matches!(
            e.linearize(2),
            Err(Error::DegreeViolation { required: 2, .. })
        ));
    }

    #[test]
    fn interpolation_examples() {
        let d = dx().add(&mul(&x()).compose(&dx()).unwrap()).unwrap();
        let fam = d.interpolate(-1).unwrap();
        assert_eq!(fam.to_string(), "(1 + t*x~)*d[x~]");
        assert_eq!(fam.slice(&int(0)).unwrap(), dx());
        assert_eq!(fam.slice(&int(1)).unwrap(), d);
        assert_eq!(d.interpolate(0), Err(Error::NegativePower { power: -1 }));
        let h = dx().interpolate(-1).unwrap();
        assert_eq!(h.slice(&int(5)).unwrap(), dx());
    }

    #[test]
    fn intertwining_example() {
        let d = dx().add(&mul(&x()).compose(&dx()).unwrap()).unwrap();
        let b = WeightedBundle::trivial(&line());
        let s = Section::new(&b, vec![&x().pow(2) + &x().pow(4)]).unwrap();
        let left = d
            .interpolate(-1)
            .unwrap()
            .apply(&s.interpolate(2).unwrap())
            .unwrap();
        let right = d.apply(&s).unwrap().interpolate(1).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn bundle_operator_order() {
        let b = WeightedBundle::new(&line(), &["s1", "s2"], &[0, -2]).unwrap();
        let d = DiffOp::from_terms(&b, [(0, 1, vec![0], x())]).unwrap();
        assert_eq!(d.order(), FiltDegree::Finite(3));
        assert_eq!(d.to_string(), "x*s1*y2");
        let s = Section::frame(&b, 1);
        assert_eq!(d.apply(&s).unwrap().components()[0], x());
    }

    #[test]
    fn defining_relation_example() {
        let b = WeightedBundle::new(&line(), &["s1", "s2"], &[0, -2]).unwrap();
        let d = DiffOp::from_terms(&b, [(1, 0, vec![1], x().pow(2)), (0, 0, vec![1], x())]).unwrap();
        let s = Section::new(&b, vec![&x().pow(2) + &x().pow(3), x()]).unwrap();
        let q = d.order().finite().unwrap();
        let i = s.degree().finite().unwrap();
        let left = d.apply_graded(q, &s.homogeneous_approx(i).unwrap()).unwrap();
        let right = d.apply(&s).unwrap().homogeneous_approx(i + q).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn recovery_examples() {
        let c = WeightedChart::new(&["x1", "x2"], &[1, 2]).unwrap();
        let x2 = c.coord("x2").unwrap();
        assert!(recover_scalar_weighting(&c, &x2, 2).unwrap());
        assert!(!recover_scalar_weighting(&c, &x2, 3).unwrap());
        assert!(recover_scalar_weighting(&c, &c.zero(), 9).unwrap());
        assert!(!recover_scalar_weighting(&c, &c.constant(int(1)), 1).unwrap());

        let b = WeightedBundle::new(&line(), &["s1", "s2"], &[0, -2]).unwrap();
        let s = Section::new(&b, vec![line().constant(int(1)), x()]).unwrap();
        assert!(recover_section_weighting(&s, -1));
        assert!(!recover_section_weighting(&s, 0));
        assert!(recover_section_weighting(&Section::zero(&b), 7));
        assert!(recover_section_weighting(&Section::frame(&b, 0), 0));
        for i in -4..=4 {
            assert_eq!(recover_section_weighting(&s, i), s.degree().at_least(i));
        }
    }
}

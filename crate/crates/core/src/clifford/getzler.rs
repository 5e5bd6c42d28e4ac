use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;

use super::{blade_body, blade_sign, word_length, CliffordElt, ExteriorElt, ExteriorOp};
use crate::bundle::WeightedBundle;
use crate::diffop::{fmt_derivatives, fmt_term, join_terms, sub_indices, DiffOp};
use crate::exact::{FiltDegree, Poly, Rational};
use crate::weighting::WeightedChart;
use crate::{Error, Result};

/// Blade mask and derivative multi-index.
pub type Key = (u32, Vec<u32>);

pub(crate) fn insert_term(terms: &mut BTreeMap<Key, Poly>, key: Key, c: Poly) {
    if c.is_zero() {
        return;
    }
    let sum = match terms.remove(&key) {
        Some(d) => &d + &c,
        None => c,
    };
    if !sum.is_zero() {
        terms.insert(key, sum);
    }
}

fn repad(from: &[String], to: &[String], beta: &[u32]) -> Vec<u32> {
    to.iter()
        .map(|v| from.iter().position(|u| u == v).map_or(0, |i| beta[i]))
        .collect()
}

/// Re-expresses two term maps over the union of their derivative variables.
type Terms = BTreeMap<Key, Poly>;

pub(crate) fn align_keys(
    dv1: &Arc<[String]>,
    t1: &Terms,
    dv2: &Arc<[String]>,
    t2: &Terms,
) -> (Arc<[String]>, Terms, Terms) {
    let mut names = dv1.to_vec();
    for v in dv2.iter() {
        if !names.contains(v) {
            names.push(v.clone());
        }
    }
    let conv = |dv: &Arc<[String]>, t: &BTreeMap<Key, Poly>| {
        t.iter()
            .map(|((m, b), c)| ((*m, repad(dv, &names, b)), c.clone()))
            .collect::<BTreeMap<_, _>>()
    };
    let a = conv(dv1, t1);
    let b = conv(dv2, t2);
    (names.into(), a, b)
}

/// Terms of `c∂^β ∘ e∂^γ`.
pub(crate) fn leibniz(
    dvars: &[String],
    beta: &[u32],
    gamma: &[u32],
    c: &Poly,
    e: &Poly,
) -> Vec<(Vec<u32>, Poly)> {
    let mut out = Vec::new();
    for delta in sub_indices(beta) {
        let de = e.derivative_multi(dvars, &delta);
        if de.is_zero() {
            continue;
        }
        let coeff: BigInt = beta
            .iter()
            .zip(&delta)
            .map(|(&n, &k)| binomial(BigInt::from(n), BigInt::from(k)))
            .product();
        let key = beta
            .iter()
            .zip(&delta)
            .zip(gamma)
            .map(|((&b, &d), &g)| b - d + g)
            .collect();
        out.push((key, (c * &de).scale(&Rational::from_integer(coeff))));
    }
    out
}

/// A derivative multi-index over `dvars`, re-expressed over the chart.
pub(crate) fn beta_on_chart(chart: &WeightedChart, dvars: &[String], beta: &[u32]) -> Result<Vec<u32>> {
    for (v, &b) in dvars.iter().zip(beta) {
        if b > 0 && !chart.coords().contains(v) {
            return Err(Error::UnknownVariable(v.clone()));
        }
    }
    Ok(repad(dvars, chart.coords(), beta))
}

fn beta_weight(chart: &WeightedChart, dvars: &[String], beta: &[u32]) -> Result<i64> {
    let b = beta_on_chart(chart, dvars, beta)?;
    Ok(chart
        .weights()
        .iter()
        .zip(&b)
        .map(|(&w, &k)| w as i64 * k as i64)
        .sum())
}

/// Frame name of the blade `e_I` in the bundle of blades.
pub fn blade_frame_name(mask: u32) -> String {
    if mask == 0 {
        "1".to_string()
    } else {
        blade_body(mask, "")
    }
}

/// Trivial bundle with fiber `Cl(ℝᵏ)`: frame `e_I` of weight `-|I|`,
/// indexed by the mask of `I`.
pub(crate) fn blade_bundle(chart: &WeightedChart, dim: usize) -> Result<WeightedBundle> {
    let n = 1u32 << dim;
    let names: Vec<String> = (0..n).map(blade_frame_name).collect();
    let ws: Vec<i64> = (0..n).map(|m| -(word_length(m) as i64)).collect();
    let ys: Vec<String> = (0..n).map(|m| format!("y{}", blade_frame_name(m))).collect();
    WeightedBundle::with_fiber_coords(chart, &names, &ws, &ys)
}

/// Operator `Σ c·e_I·∂^β` on `Cl(ℝᵏ)`-valued polynomials, with Clifford
/// factors acting by left multiplication. Coefficients may involve any
/// variables; a chart is supplied when weights are needed.
#[derive(Debug, Clone, PartialEq)]
pub struct GetzlerOp {
    dim: usize,
    dvars: Arc<[String]>,
    terms: BTreeMap<Key, Poly>,
}

fn no_vars() -> Arc<[String]> {
    Arc::from(Vec::<String>::new())
}

impl GetzlerOp {
    pub fn zero(dim: usize) -> GetzlerOp {
        GetzlerOp {
            dim,
            dvars: no_vars(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(dim: usize, dvars: &[String], terms: I) -> Result<GetzlerOp>
    where
        I: IntoIterator<Item = (u32, Vec<u32>, Poly)>,
    {
        let mut out = GetzlerOp {
            dim,
            dvars: dvars.to_vec().into(),
            terms: BTreeMap::new(),
        };
        for (m, beta, c) in terms {
            if beta.len() != dvars.len() {
                return Err(Error::ArityMismatch {
                    expected: dvars.len(),
                    found: beta.len(),
                });
            }
            if m >> dim != 0 {
                return Err(Error::GeneratorOutOfRange {
                    index: 32 - m.leading_zeros() as usize,
                    dim,
                });
            }
            insert_term(&mut out.terms, (m, beta), c);
        }
        Ok(out)
    }

    /// Multiplication by a scalar function.
    pub fn function(dim: usize, f: &Poly) -> GetzlerOp {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, (0, vec![]), f.clone());
        GetzlerOp {
            dim,
            dvars: no_vars(),
            terms,
        }
    }

    /// Left Clifford multiplication `c(a)`.
    pub fn clifford(a: &CliffordElt) -> GetzlerOp {
        let mut terms = BTreeMap::new();
        for (&m, c) in a.terms() {
            insert_term(&mut terms, (m, vec![]), Poly::constant_in(no_vars(), c.clone()));
        }
        GetzlerOp {
            dim: a.dim(),
            dvars: no_vars(),
            terms,
        }
    }

    pub fn partial(dim: usize, var: &str) -> GetzlerOp {
        let mut terms = BTreeMap::new();
        insert_term(
            &mut terms,
            (0, vec![1]),
            Poly::constant_in(no_vars(), Rational::from_integer(1.into())),
        );
        GetzlerOp {
            dim,
            dvars: vec![var.to_string()].into(),
            terms,
        }
    }

    /// Flat Dirac operator `Σ_a c(e_a) ∂_{u_a}`.
    pub fn dirac<S: AsRef<str>>(dim: usize, coords: &[S]) -> Result<GetzlerOp> {
        if coords.len() != dim {
            return Err(Error::ArityMismatch {
                expected: dim,
                found: coords.len(),
            });
        }
        let mut d = GetzlerOp::zero(dim);
        for (a, u) in coords.iter().enumerate() {
            let e = GetzlerOp::clifford(&CliffordElt::generator(dim, a + 1)?);
            d = d.add(&e.compose(&GetzlerOp::partial(dim, u.as_ref())));
        }
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dvars(&self) -> &Arc<[String]> {
        &self.dvars
    }

    pub fn terms(&self) -> &BTreeMap<Key, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether no term differentiates.
    pub fn is_multiplication(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.iter().all(|&k| k == 0))
    }

    /// The operator as a scalar function, when it is one.
    pub fn as_function(&self) -> Option<Poly> {
        if !self.is_multiplication() || self.terms.keys().any(|(m, _)| *m != 0) {
            return None;
        }
        Some(
            self.terms
                .values()
                .fold(Poly::zero_in(no_vars()), |acc, c| &acc + c),
        )
    }

    /// The operator as a constant Clifford element, when it is one.
    pub fn as_clifford(&self) -> Option<CliffordElt> {
        if !self.is_multiplication() {
            return None;
        }
        let mut terms = Vec::new();
        for ((m, _), c) in &self.terms {
            terms.push((*m, c.constant_value()?));
        }
        Some(CliffordElt::from_terms(self.dim, terms))
    }

    pub fn add(&self, other: &GetzlerOp) -> GetzlerOp {
        let (dvars, mut a, b) = align_keys(&self.dvars, &self.terms, &other.dvars, &other.terms);
        for (k, c) in b {
            insert_term(&mut a, k, c);
        }
        GetzlerOp {
            dim: self.dim.max(other.dim),
            dvars,
            terms: a,
        }
    }

    pub fn scale(&self, r: &Rational) -> GetzlerOp {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            insert_term(&mut terms, k.clone(), c.scale(r));
        }
        GetzlerOp {
            dim: self.dim,
            dvars: self.dvars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> GetzlerOp {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn sub(&self, other: &GetzlerOp) -> GetzlerOp {
        self.add(&other.neg())
    }

    /// `self ∘ other`. Clifford constants commute with functions and
    /// derivatives, so only the Leibniz rule and blade signs enter.
    pub fn compose(&self, other: &GetzlerOp) -> GetzlerOp {
        let (dvars, a, b) = align_keys(&self.dvars, &self.terms, &other.dvars, &other.terms);
        let mut terms = BTreeMap::new();
        for ((i, beta), c) in &a {
            for ((j, gamma), e) in &b {
                let neg = blade_sign(*i, *j) < 0;
                for (key, coeff) in leibniz(&dvars, beta, gamma, c, e) {
                    insert_term(&mut terms, (i ^ j, key), if neg { -coeff } else { coeff });
                }
            }
        }
        GetzlerOp {
            dim: self.dim.max(other.dim),
            dvars,
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> GetzlerOp {
        let one = GetzlerOp::clifford(&CliffordElt::one(self.dim));
        (0..n).fold(one, |acc, _| acc.compose(self))
    }

    /// `D f` for a multiplication operator `f`, a `Cl`-valued function.
    pub fn apply_to(&self, f: &GetzlerOp) -> Result<GetzlerOp> {
        if !f.is_multiplication() {
            return Err(Error::Precondition(
                "operand is not a Clifford-valued function".into(),
            ));
        }
        let comp = self.compose(f);
        let mut terms = BTreeMap::new();
        for ((m, beta), c) in &comp.terms {
            if beta.iter().all(|&k| k == 0) {
                insert_term(&mut terms, (*m, vec![0; beta.len()]), c.clone());
            }
        }
        Ok(GetzlerOp {
            dim: comp.dim,
            dvars: comp.dvars,
            terms,
        })
    }

    fn term_order(&self, chart: &WeightedChart, key: &Key, c: &Poly) -> Result<FiltDegree> {
        let (m, beta) = key;
        let bw = beta_weight(chart, &self.dvars, beta)?;
        Ok(chart.filtration_degree(c)?.shift(-(word_length(*m) as i64) - bw))
    }

    /// Getzler order over `chart`: `deg c - |I| - β·w` minimized over
    /// terms. With all weights one this is `deg_u c - |I| - |β|`.
    pub fn order(&self, chart: &WeightedChart) -> Result<FiltDegree> {
        let mut best = FiltDegree::Infinite;
        for (k, c) in &self.terms {
            best = best.min(self.term_order(chart, k, c)?);
        }
        Ok(best)
    }

    /// Symbol at order `q`: terms of order exactly `q`, Clifford factors
    /// replaced by exterior multiplication.
    pub fn symbol(&self, chart: &WeightedChart, q: i64) -> Result<ExteriorOp> {
        let d = self.order(chart)?;
        if !d.at_least(q) {
            return Err(Error::DegreeViolation {
                required: q,
                actual: d.to_string(),
            });
        }
        let mut terms = BTreeMap::new();
        for ((m, beta), c) in &self.terms {
            let level = q + word_length(*m) as i64 + beta_weight(chart, &self.dvars, beta)?;
            insert_term(&mut terms, (*m, beta.clone()), chart.homogeneous_part(c, level)?);
        }
        Ok(ExteriorOp::from_parts(self.dim, self.dvars.clone(), terms))
    }

    /// The operator as a differential operator on the bundle of blades
    /// over `chart`: `c·e_J·∂^β` sends the slot `e_I` to `±e_{J△I}`.
    pub fn to_diffop(&self, chart: &WeightedChart) -> Result<DiffOp> {
        let bundle = blade_bundle(chart, self.dim)?;
        let mut terms = Vec::new();
        for ((j, beta), c) in &self.terms {
            let b = beta_on_chart(chart, &self.dvars, beta)?;
            for i in 0..(1u32 << self.dim) {
                let c = if blade_sign(*j, i) < 0 { -c } else { c.clone() };
                terms.push(((j ^ i) as usize, i as usize, b.clone(), c));
            }
        }
        DiffOp::from_terms(&bundle, terms)
    }
}

/// Left exterior multiplication `ε(e_I)` as a zeroth-order operator.
pub fn exterior_mult(a: &ExteriorElt, dvars: &[String]) -> ExteriorOp {
    let mut terms = BTreeMap::new();
    for (&m, c) in a.terms() {
        insert_term(
            &mut terms,
            (m, vec![0; dvars.len()]),
            Poly::constant_in(no_vars(), c.clone()),
        );
    }
    ExteriorOp::from_parts(a.dim(), dvars.to_vec().into(), terms)
}

impl fmt::Display for GetzlerOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Key> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.1.iter().sum();
            let db: u32 = b.1.iter().sum();
            da.cmp(&db)
                .then_with(|| super::blade_order(a.0, b.0))
                .then_with(|| b.1.cmp(&a.1))
        });
        let mut parts = Vec::new();
        for key in keys {
            let (m, beta) = key;
            let c = &self.terms[key];
            let mut body = Vec::new();
            if *m != 0 {
                body.push(blade_body(*m, "*"));
            }
            let d = fmt_derivatives(&self.dvars, beta);
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

    fn chart(k: usize) -> WeightedChart {
        let names: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
        WeightedChart::new(&names, &vec![1; k]).unwrap()
    }

    fn e(k: usize, i: usize) -> GetzlerOp {
        GetzlerOp::clifford(&CliffordElt::generator(k, i).unwrap())
    }

    #[test]
    fn orders() {
        let c = chart(3);
        assert_eq!(e(3, 1).order(&c).unwrap(), FiltDegree::Finite(-1));
        let d = GetzlerOp::dirac(3, &["u1", "u2", "u3"]).unwrap();
        assert_eq!(d.order(&c).unwrap(), FiltDegree::Finite(-2));
        let u1 = GetzlerOp::function(3, &c.coord("u1").unwrap());
        let t = u1.compose(&e(3, 1)).compose(&GetzlerOp::partial(3, "u1"));
        assert_eq!(t.order(&c).unwrap(), FiltDegree::Finite(-1));
        assert_eq!(t.to_string(), "u1*e1*d[u1]");
    }

    #[test]
    fn symbols() {
        let c = chart(2);
        let s = e(2, 1).symbol(&c, -1).unwrap();
        let lam = |m: u32| BTreeMap::from([(m, c.constant(int(1)))]);
        // ε(e1) on the basis 1, e1, e2, e1e2.
        assert_eq!(s.apply(&lam(0)), lam(1));
        assert!(s.apply(&lam(1)).is_empty());
        assert_eq!(s.apply(&lam(2)), lam(3));
        assert!(s.apply(&lam(3)).is_empty());

        let d = GetzlerOp::dirac(2, &["u1", "u2"]).unwrap();
        let sd = d.symbol(&c, -2).unwrap();
        assert_eq!(sd.to_string(), "ext(e1)*d[u1] + ext(e2)*d[u2]");
        let d2 = d.compose(&d);
        let lap = GetzlerOp::partial(2, "u1")
            .pow(2)
            .add(&GetzlerOp::partial(2, "u2").pow(2))
            .neg();
        assert_eq!(d2, lap);
        let s2 = d2.symbol(&c, -2).unwrap();
        assert_eq!(s2, lap.symbol(&c, -2).unwrap());
        assert!(d2.symbol(&c, -4).unwrap().is_zero());
        assert!(sd.compose(&sd).is_zero());
        assert!(matches!(d.symbol(&c, -1), Err(Error::DegreeViolation { .. })));
    }

    #[test]
    fn embedding_agrees() {
        let c = chart(2);
        let u2 = GetzlerOp::function(2, &c.coord("u2").unwrap());
        let d = GetzlerOp::dirac(2, &["u1", "u2"])
            .unwrap()
            .add(&u2.compose(&e(2, 1)).compose(&e(2, 2)));
        let q = d.order(&c).unwrap().finite().unwrap();
        let dd = d.to_diffop(&c).unwrap();
        assert_eq!(dd.order(), FiltDegree::Finite(q));
        assert_eq!(
            dd.linearize(q).unwrap(),
            d.symbol(&c, q).unwrap().to_diffop(&c).unwrap()
        );
    }

    #[test]
    fn application() {
        let c = chart(2);
        let d = GetzlerOp::dirac(2, &["u1", "u2"]).unwrap();
        let f = GetzlerOp::function(2, &c.coord("u1").unwrap().pow(2));
        let r = d.apply_to(&f).unwrap();
        assert_eq!(r.to_string(), "2*u1*e1");
        assert!(d.apply_to(&d).is_err());
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::getzler::{align_keys, beta_on_chart, Key};
use super::{blade_body, blade_order, blade_sign};
use crate::diffop::{fmt_derivatives, fmt_term, join_terms, DiffOp};
use crate::exact::{fmt_signed_term, Poly, Rational};
use crate::weighting::WeightedChart;
use crate::{Error, Result};

/// Element of the exterior algebra `Λ(ℝᵏ)` on blade masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElt {
    dim: usize,
    terms: BTreeMap<u32, Rational>,
}

/// Sign of `e_I ∧ e_J` relative to `e_{I∪J}`, zero on overlap.
pub(crate) fn wedge_sign(i: u32, j: u32) -> i32 {
    if i & j != 0 {
        0
    } else {
        blade_sign(i, j)
    }
}

impl ExteriorElt {
    pub fn zero(dim: usize) -> ExteriorElt {
        ExteriorElt {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(dim: usize, i: usize) -> Result<ExteriorElt> {
        if i == 0 || i > dim {
            return Err(Error::GeneratorOutOfRange { index: i, dim });
        }
        Ok(ExteriorElt::from_terms(
            dim,
            [(1 << (i - 1), Rational::from_integer(1.into()))],
        ))
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(dim: usize, terms: I) -> ExteriorElt {
        let mut out = ExteriorElt::zero(dim);
        for (m, c) in terms {
            let e = out.terms.entry(m).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(&m);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExteriorElt) -> ExteriorElt {
        ExteriorElt::from_terms(
            self.dim.max(other.dim),
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(&m, c)| (m, c.clone())),
        )
    }

    pub fn wedge(&self, other: &ExteriorElt) -> ExteriorElt {
        let mut out = Vec::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                match wedge_sign(i, j) {
                    0 => {}
                    1 => out.push((i | j, a * b)),
                    _ => out.push((i | j, -(a * b))),
                }
            }
        }
        ExteriorElt::from_terms(self.dim.max(other.dim), out)
    }
}

impl fmt::Display for ExteriorElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut masks: Vec<u32> = self.terms.keys().copied().collect();
        masks.sort_by(|&a, &b| blade_order(a, b));
        for (n, m) in masks.into_iter().enumerate() {
            fmt_signed_term(f, &self.terms[&m], &blade_body(m, "^"), n == 0)?;
        }
        Ok(())
    }
}

/// Operator on `Λ`-valued polynomials: sums of `c·ε(e_I)·∂^β`, with
/// `ε(e_I)` left exterior multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorOp {
    dim: usize,
    dvars: Arc<[String]>,
    terms: BTreeMap<Key, Poly>,
}

impl ExteriorOp {
    pub(crate) fn from_parts(dim: usize, dvars: Arc<[String]>, terms: BTreeMap<Key, Poly>) -> ExteriorOp {
        ExteriorOp { dim, dvars, terms }
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

    /// Composition; used to compare symbols of products with products of
    /// symbols.
    pub fn compose(&self, other: &ExteriorOp) -> ExteriorOp {
        let (dvars, a, b) = align_keys(&self.dvars, &self.terms, &other.dvars, &other.terms);
        let mut out: BTreeMap<Key, Poly> = BTreeMap::new();
        for ((i, beta), c) in &a {
            for ((j, gamma), e) in &b {
                let sign = wedge_sign(*i, *j);
                if sign == 0 {
                    continue;
                }
                for (key_beta, coeff) in super::getzler::leibniz(&dvars, beta, gamma, c, e) {
                    let coeff = if sign < 0 { -coeff } else { coeff };
                    super::getzler::insert_term(&mut out, (i | j, key_beta), coeff);
                }
            }
        }
        ExteriorOp {
            dim: self.dim.max(other.dim),
            dvars,
            terms: out,
        }
    }

    /// Action on `Σ_J f_J e_J`.
    pub fn apply(&self, f: &BTreeMap<u32, Poly>) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for ((i, beta), c) in &self.terms {
            for (&j, g) in f {
                let sign = wedge_sign(*i, j);
                if sign == 0 {
                    continue;
                }
                let d = c * &g.derivative_multi(&self.dvars, beta);
                let d = if sign < 0 { -d } else { d };
                let slot = out.remove(&(i | j));
                let sum = slot.map_or(d.clone(), |s| &s + &d);
                if !sum.is_zero() {
                    out.insert(i | j, sum);
                }
            }
        }
        out
    }

    /// The same operator on the bundle of blades over `chart`, each blade
    /// `e_I` a frame element of weight `-|I|`.
    pub fn to_diffop(&self, chart: &WeightedChart) -> Result<DiffOp> {
        let bundle = super::getzler::blade_bundle(chart, self.dim)?;
        let mut terms = Vec::new();
        for ((j, beta), c) in &self.terms {
            let b = beta_on_chart(chart, &self.dvars, beta)?;
            for i in 0..(1u32 << self.dim) {
                let sign = wedge_sign(*j, i);
                if sign == 0 {
                    continue;
                }
                let c = if sign < 0 { -c } else { c.clone() };
                terms.push(((j | i) as usize, i as usize, b.clone(), c));
            }
        }
        DiffOp::from_terms(&bundle, terms)
    }
}

impl fmt::Display for ExteriorOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((m, beta), c) in &self.terms {
            let mut body = Vec::new();
            if *m != 0 {
                body.push(format!("ext({})", blade_body(*m, "^")));
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

use std::collections::BTreeMap;
use std::fmt;

use super::{fmt_derivatives, fmt_term, join_terms, DiffOp, TermKey};
use crate::bundle::{SectionFamily, WeightedBundle};
use crate::exact::{Laurent, Rational};
use crate::weighting::{tilde, untilde};
use crate::{Error, Result};

/// Deformation family `D̃^{[q]}` of an operator: each coefficient `c` of a
/// term `(a, b, β)` becomes `t^{v_a - v_b - q - β·w} c(t^w x̃)` in front of
/// `∂̃^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpFamily {
    bundle: WeightedBundle,
    q: i64,
    terms: BTreeMap<TermKey, Laurent>,
}

impl OpFamily {
    pub(super) fn new(d: &DiffOp, q: i64) -> Result<OpFamily> {
        let g = d.bundle.base().grading();
        let mut terms = BTreeMap::new();
        for (k, c) in &d.terms {
            let l = g.zoom(c, d.coefficient_level(k, q))?;
            terms.insert(k.clone(), l);
        }
        if let Some(p) = terms.values().filter_map(Laurent::negative_power).min() {
            return Err(Error::NegativePower { power: p });
        }
        Ok(OpFamily {
            bundle: d.bundle.clone(),
            q,
            terms,
        })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Laurent> {
        &self.terms
    }

    /// The operator on the slice over `t`, in chart coordinates.
    pub fn slice(&self, t: &Rational) -> Result<DiffOp> {
        let coords = self.bundle.base().coords();
        let mut terms = Vec::new();
        for ((a, b, beta), l) in &self.terms {
            let p = l.eval(t)?.rename(untilde);
            let p = if p.is_zero() {
                self.bundle.base().zero()
            } else {
                p.reindex(coords)?
            };
            terms.push((*a, *b, beta.clone(), p));
        }
        DiffOp::from_terms(&self.bundle, terms)
    }

    /// Applies the family to a section family, fiberwise over `t`.
    pub fn apply(&self, sigma: &SectionFamily) -> Result<SectionFamily> {
        if sigma.bundle() != &self.bundle {
            return Err(Error::BaseMismatch);
        }
        let tcoords: Vec<String> = self.bundle.base().coords().iter().map(|c| tilde(c)).collect();
        let mut comps = vec![Laurent::zero(); self.bundle.rank()];
        for ((a, b, beta), l) in &self.terms {
            let mut d = sigma.components()[*b].clone();
            for (name, &k) in tcoords.iter().zip(beta) {
                for _ in 0..k {
                    d = d.derivative(name);
                }
            }
            comps[*a] = &comps[*a] + &(l * &d);
        }
        Ok(SectionFamily::from_parts(
            &self.bundle,
            sigma.degree() + self.q,
            comps,
        ))
    }
}

impl fmt::Display for OpFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let tcoords: Vec<String> = self.bundle.base().coords().iter().map(|c| tilde(c)).collect();
        let scalar = self.bundle.is_trivial_line();
        let mut parts = Vec::new();
        for ((a, b, beta), l) in &self.terms {
            let mut body = Vec::new();
            if !scalar {
                body.push(self.bundle.frame_names()[*a].clone());
                body.push(self.bundle.fiber_coords()[*b].clone());
            }
            let d = fmt_derivatives(&tcoords, beta);
            if !d.is_empty() {
                body.push(d);
            }
            let n: usize = l.terms().map(|(_, p)| p.num_terms()).sum();
            parts.push(fmt_term(&l.to_string(), &body.join("*"), n > 1));
        }
        write!(f, "{}", join_terms(&parts))
    }
}

use std::collections::BTreeMap;

use super::{GrSection, Section, WeightedBundle};
use crate::exact::{FiltDegree, Poly, Rational};
use crate::weighting::GrClass;
use crate::{Error, Result};

/// Polynomial function on the total space, in base coordinates `x` and
/// fiber coordinates `y`. The part of `y`-degree `n` is a section of
/// `Symⁿ V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPoly {
    bundle: WeightedBundle,
    poly: Poly,
}

impl FiberPoly {
    pub fn new(bundle: &WeightedBundle, poly: &Poly) -> Result<FiberPoly> {
        Ok(FiberPoly {
            bundle: bundle.clone(),
            poly: poly.reindex(&bundle.total_vars())?,
        })
    }

    pub fn bundle(&self) -> &WeightedBundle {
        &self.bundle
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// `min (α·w - β·v)` over monomials `x^α y^β`.
    pub fn degree(&self) -> FiltDegree {
        self.bundle
            .fiber_grading()
            .degree(&self.poly)
            .expect("reindexed to the total variables")
    }

    fn y_degree(&self, e: &[u32]) -> u32 {
        e[self.bundle.base().dim()..].iter().sum()
    }

    /// Parts of fixed `y`-degree.
    pub fn y_homogeneous_parts(&self) -> BTreeMap<u32, FiberPoly> {
        let mut degrees: Vec<u32> = self.poly.terms().map(|(e, _)| self.y_degree(e)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        degrees
            .into_iter()
            .map(|n| {
                let part = self.poly.filter_terms(|e| self.y_degree(e) == n);
                (
                    n,
                    FiberPoly {
                        bundle: self.bundle.clone(),
                        poly: part,
                    },
                )
            })
            .collect()
    }

    /// The `y`-degree when the polynomial is `y`-homogeneous and nonzero.
    pub fn y_homogeneous_degree(&self) -> Option<u32> {
        let parts = self.y_homogeneous_parts();
        if parts.len() == 1 {
            parts.keys().next().copied()
        } else {
            None
        }
    }

    fn substitute_components(&self, comps: &[Poly]) -> Result<Poly> {
        let base = self.bundle.base();
        let ys = self.bundle.fiber_coords();
        let one = base.constant(Rational::from_integer(1.into()));
        self.poly.substitute(
            |name| {
                if let Some(a) = ys.iter().position(|y| y == name) {
                    return Some(comps[a].clone());
                }
                base.coord(name).ok()
            },
            &one,
        )
    }

    /// `F ∘ σ`: substitute `y_a ↦ f_a`.
    pub fn compose(&self, sigma: &Section) -> Result<Poly> {
        if sigma.bundle() != &self.bundle {
            return Err(Error::BaseMismatch);
        }
        self.substitute_components(sigma.components())
    }

    /// `F^{[j]} ∘ σ^{[i]}` at level `j + n·i` for `y`-homogeneous `F` of
    /// `y`-degree `n`.
    pub fn compose_graded(&self, j: i64, sigma: &GrSection) -> Result<GrClass> {
        let n = self.y_homogeneous_degree().ok_or_else(|| {
            Error::Precondition("graded composition needs a y-homogeneous fiber polynomial".into())
        })?;
        if sigma.components().len() != self.bundle.rank() {
            return Err(Error::ArityMismatch {
                expected: self.bundle.rank(),
                found: sigma.components().len(),
            });
        }
        let head = FiberPoly {
            bundle: self.bundle.clone(),
            poly: self.bundle.fiber_grading().homogeneous_part(&self.poly, j)?,
        };
        let rep = head.substitute_components(sigma.components())?;
        GrClass::new(self.bundle.base(), j + n as i64 * sigma.degree(), rep)
    }

    /// Restriction to a weighted subbundle: killed coordinates are set to
    /// zero.
    pub fn restrict_to(&self, sub: &WeightedBundle) -> Result<FiberPoly> {
        let target = sub.total_vars();
        let killed: Vec<String> = self
            .poly
            .vars()
            .iter()
            .filter(|v| !target.contains(v))
            .cloned()
            .collect();
        FiberPoly::new(sub, &self.poly.set_zero(&killed))
    }
}

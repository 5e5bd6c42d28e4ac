use std::fmt;

use num_traits::Zero;

use super::WeightedBundle;
use crate::exact::{rpow, FiltDegree, Laurent, Poly, Rational};
use crate::weighting::{pullback_function, untilde, GrClass, WeightedChart};
use crate::{Error, Result};

/// Section `Σ f_a σ_a` with polynomial components over the base chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    bundle: WeightedBundle,
    components: Vec<Poly>,
}

impl Section {
    pub fn new(bundle: &WeightedBundle, components: Vec<Poly>) -> Result<Section> {
        if components.len() != bundle.rank() {
            return Err(Error::ArityMismatch {
                expected: bundle.rank(),
                found: components.len(),
            });
        }
        let coords = bundle.base().coords();
        let components = components
            .iter()
            .map(|p| p.reindex(coords))
            .collect::<Result<_>>()?;
        Ok(Section {
            bundle: bundle.clone(),
            components,
        })
    }

    pub fn zero(bundle: &WeightedBundle) -> Section {
        Section {
            bundle: bundle.clone(),
            components: vec![bundle.base().zero(); bundle.rank()],
        }
    }

    /// The frame element `σ_a`.
    pub fn frame(bundle: &WeightedBundle, a: usize) -> Section {
        let mut s = Section::zero(bundle);
        s.components[a] = bundle.base().constant(crate::exact::int(1));
        s
    }

    pub fn bundle(&self) -> &WeightedBundle {
        &self.bundle
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// `min_a (deg f_a + v_a)`.
    pub fn degree(&self) -> FiltDegree {
        let base = self.bundle.base();
        self.components
            .iter()
            .zip(self.bundle.vweights())
            .map(|(f, &v)| {
                base.filtration_degree(f)
                    .expect("components live over the base")
                    .shift(v)
            })
            .min()
            .unwrap_or(FiltDegree::Infinite)
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        if self.bundle != other.bundle {
            return Err(Error::BaseMismatch);
        }
        Ok(Section {
            bundle: self.bundle.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `g·σ` for a function `g` on the base.
    pub fn mul_function(&self, g: &Poly) -> Result<Section> {
        let g = g.reindex(self.bundle.base().coords())?;
        Ok(Section {
            bundle: self.bundle.clone(),
            components: self.components.iter().map(|f| f * &g).collect(),
        })
    }

    /// `φ*σ` on the pulled-back bundle.
    pub fn pullback(&self, src: &WeightedChart, phi: &[Poly]) -> Result<Section> {
        let bundle = self.bundle.pullback(src, phi)?;
        let comps = self
            .components
            .iter()
            .map(|f| pullback_function(src, self.bundle.base(), phi, f))
            .collect::<Result<Vec<_>>>()?;
        Section::new(&bundle, comps)
    }

    fn check_degree(&self, i: i64) -> Result<()> {
        let d = self.degree();
        if !d.at_least(i) {
            return Err(Error::DegreeViolation {
                required: i,
                actual: d.to_string(),
            });
        }
        Ok(())
    }

    fn homogeneous_components(&self, i: i64) -> Vec<Poly> {
        let base = self.bundle.base();
        self.components
            .iter()
            .zip(self.bundle.vweights())
            .map(|(f, &v)| {
                base.homogeneous_part(f, i - v)
                    .expect("components live over the base")
            })
            .collect()
    }

    /// `σ^{[i]}`: component `a` is the homogeneous part of `f_a` of degree
    /// `i - v_a`. Zero exactly when `deg σ > i`.
    pub fn homogeneous_approx(&self, i: i64) -> Result<GrSection> {
        self.check_degree(i)?;
        Ok(GrSection::new(i, self.homogeneous_components(i)))
    }

    fn raw_family(&self, i: i64) -> Vec<Laurent> {
        let g = self.bundle.base().grading();
        self.components
            .iter()
            .zip(self.bundle.vweights())
            .map(|(f, &v)| g.zoom(f, i - v).expect("components live over the base"))
            .collect()
    }

    /// Deformation family `σ̃^{[i]}`: component `a` is
    /// `t^{v_a - i} f_a(t^w x̃)`.
    pub fn interpolate(&self, i: i64) -> Result<SectionFamily> {
        let components = self.raw_family(i);
        if let Some(k) = components.iter().filter_map(Laurent::negative_power).min() {
            return Err(Error::NegativePower { power: k });
        }
        Ok(SectionFamily {
            bundle: self.bundle.clone(),
            degree: i,
            components,
        })
    }

    /// Checks `α_λ ∘ σ^{[i]} = (λ^{-i} σ^{[i]}) ∘ α_λ` on the deformation
    /// family and on the homogeneous approximation.
    pub fn zoom_equivariance_check(&self, i: i64, lambda: &Rational) -> Result<bool> {
        self.zoom_equivariance_with_exponent(i, lambda, -i)
    }

    /// Same identity with the right-hand scalar `λ^e`.
    pub fn zoom_equivariance_with_exponent(&self, i: i64, lambda: &Rational, e: i64) -> Result<bool> {
        if lambda.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let base = self.bundle.base();
        let inv = lambda.recip();
        let right = rpow(lambda, e);
        for ((s, g), &v) in self
            .raw_family(i)
            .iter()
            .zip(self.homogeneous_components(i))
            .zip(self.bundle.vweights())
        {
            let left = rpow(lambda, -v);
            let moved = s.map_polys(|p| dilate(base, p, lambda)).rescale_param(&inv);
            if s.scale(&left) != moved.scale(&right) {
                return Ok(false);
            }
            if g.scale(&left) != dilate(base, &g, lambda).scale(&right) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `p(λ^w x)`, reading weights through tilde names as well.
fn dilate(base: &WeightedChart, p: &Poly, lambda: &Rational) -> Poly {
    let ws: Vec<i64> = p
        .vars()
        .iter()
        .map(|v| base.weight_of(&untilde(v)).unwrap_or(0) as i64)
        .collect();
    Poly::from_terms(
        p.vars().clone(),
        p.terms().map(|(e, c)| {
            let d: i64 = e.iter().zip(&ws).map(|(&x, w)| x as i64 * w).sum();
            (e.clone(), c * rpow(lambda, d))
        }),
    )
}

/// `⟨τ, σ⟩ = Σ τ_a f_a` for `τ` a section of the dual bundle.
pub fn pairing(tau: &Section, sigma: &Section) -> Result<Poly> {
    let dual = sigma.bundle.dual();
    if tau.bundle.base() != dual.base() || tau.bundle.vweights() != dual.vweights() {
        return Err(Error::BaseMismatch);
    }
    Ok(tau
        .components
        .iter()
        .zip(&sigma.components)
        .fold(sigma.bundle.base().zero(), |acc, (a, b)| &acc + &(a * b)))
}

/// Class `σ^{[i]}` in the normal model, written in the frame
/// `σ_a^{[v_a]}`; component `a` is homogeneous of degree `i - v_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrSection {
    degree: i64,
    components: Vec<Poly>,
}

impl GrSection {
    pub fn new(degree: i64, components: Vec<Poly>) -> GrSection {
        GrSection { degree, components }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Action `g^{[k]} σ^{[i]}` of a graded function.
    pub fn act(&self, g: &GrClass) -> GrSection {
        GrSection {
            degree: self.degree + g.degree(),
            components: self.components.iter().map(|f| f * g.rep()).collect(),
        }
    }
}

impl fmt::Display for GrSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})^[{}]", parts.join(", "), self.degree)
    }
}

/// Deformation family of a section, one Laurent polynomial in `t` per
/// frame element, in tilde coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionFamily {
    bundle: WeightedBundle,
    degree: i64,
    components: Vec<Laurent>,
}

impl SectionFamily {
    pub(crate) fn from_parts(
        bundle: &WeightedBundle,
        degree: i64,
        components: Vec<Laurent>,
    ) -> SectionFamily {
        SectionFamily {
            bundle: bundle.clone(),
            degree,
            components,
        }
    }

    pub fn bundle(&self) -> &WeightedBundle {
        &self.bundle
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn components(&self) -> &[Laurent] {
        &self.components
    }

    /// Components of the slice at `t`, renamed back to chart coordinates.
    pub fn slice(&self, t: &Rational) -> Result<Vec<Poly>> {
        let coords = self.bundle.base().coords();
        self.components
            .iter()
            .map(|l| {
                let p = l.eval(t)?.rename(untilde);
                if p.is_zero() {
                    Ok(self.bundle.base().zero())
                } else {
                    p.reindex(coords)
                }
            })
            .collect()
    }
}

impl fmt::Display for SectionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

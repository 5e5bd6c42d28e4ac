//! Clifford algebra `Cl(ℝᵏ)` with `e_i² = -1` and its word-length
//! filtration, exterior symbols, the Getzler calculus on the flat model and
//! jet computations for rotor paths.
//!
//! A basis blade `e_I = e_{i_1}⋯e_{i_r}` with `i_1 < … < i_r` is stored as
//! the bitmask of `I`; generator `e_i` is bit `i - 1`.

mod exterior;
mod getzler;
mod series;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{fmt_signed_term, FiltDegree, Rational, Ring};
use crate::{Error, Result};

pub use exterior::{ExteriorElt, ExteriorOp};
pub use getzler::{blade_frame_name, exterior_mult, GetzlerOp};
pub use series::{
    exp_bivector_jet, is_weighted_cl_jet, left_only_check, pair_path_check, severa_action_check, ClJet,
};

/// Sign of `e_I e_J` relative to `e_{I△J}`: one factor `-1` per transposition
/// needed to sort the word and one per repeated generator.
pub fn blade_sign(i: u32, j: u32) -> i32 {
    let mut swaps = 0u32;
    let mut bits = j;
    // For each generator of J, count generators of I with a larger index.
    while bits != 0 {
        let low = bits.trailing_zeros();
        swaps += (i >> (low + 1)).count_ones();
        bits &= bits - 1;
    }
    let squares = (i & j).count_ones();
    if (swaps + squares).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn word_length(mask: u32) -> u32 {
    mask.count_ones()
}

/// Generator indices (1-based) of a blade.
pub fn blade_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub(crate) fn blade_body(mask: u32, sep: &str) -> String {
    blade_indices(mask)
        .iter()
        .map(|i| format!("e{i}"))
        .collect::<Vec<_>>()
        .join(sep)
}

/// Blades ordered by word length, then by their index lists.
pub(crate) fn blade_order(a: u32, b: u32) -> std::cmp::Ordering {
    word_length(a)
        .cmp(&word_length(b))
        .then_with(|| blade_indices(a).cmp(&blade_indices(b)))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElt {
    dim: usize,
    terms: BTreeMap<u32, Rational>,
}

impl CliffordElt {
    pub fn zero(dim: usize) -> CliffordElt {
        CliffordElt {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Rational) -> CliffordElt {
        CliffordElt::blade(dim, 0, c)
    }

    pub fn one(dim: usize) -> CliffordElt {
        CliffordElt::scalar(dim, Rational::one())
    }

    /// `c·e_I`; bits of `mask` beyond the dimension are not checked.
    pub fn blade(dim: usize, mask: u32, c: Rational) -> CliffordElt {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        CliffordElt { dim, terms }
    }

    /// The generator `e_i`, `1 ≤ i ≤ dim`.
    pub fn generator(dim: usize, i: usize) -> Result<CliffordElt> {
        if i == 0 || i > dim {
            return Err(Error::GeneratorOutOfRange { index: i, dim });
        }
        Ok(CliffordElt::blade(dim, 1 << (i - 1), Rational::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(dim: usize, terms: I) -> CliffordElt {
        let mut out = CliffordElt::zero(dim);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
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

    pub fn coefficient(&self, mask: u32) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scalar_part(&self) -> Rational {
        self.coefficient(0)
    }

    /// Same element viewed in a larger algebra.
    pub fn with_dim(&self, dim: usize) -> CliffordElt {
        CliffordElt {
            dim: dim.max(self.dim),
            terms: self.terms.clone(),
        }
    }

    /// Longest word among nonzero terms, `None` for zero.
    pub fn max_word_length(&self) -> Option<u32> {
        self.terms.keys().map(|&m| word_length(m)).max()
    }

    /// `-(max word length)`; `0` on scalars and infinite on zero.
    pub fn degree(&self) -> FiltDegree {
        self.max_word_length()
            .map_or(FiltDegree::Infinite, |l| FiltDegree::Finite(-(l as i64)))
    }

    pub fn grade_part(&self, l: u32) -> CliffordElt {
        CliffordElt {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(&m, _)| word_length(m) == l)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|&m| word_length(m).is_multiple_of(2))
    }

    pub fn is_bivector(&self) -> bool {
        self.terms.keys().all(|&m| word_length(m) == 2)
    }

    /// Reversion `e_{i_1}⋯e_{i_r} ↦ e_{i_r}⋯e_{i_1}`, sign `(-1)^{r(r-1)/2}`.
    pub fn reverse(&self) -> CliffordElt {
        CliffordElt {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(&m, c)| {
                    let r = word_length(m);
                    if (r * r.saturating_sub(1) / 2) % 2 == 1 {
                        (m, -c)
                    } else {
                        (m, c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Word-length-`l` part read in the exterior algebra.
    pub fn gr_symbol(&self, l: u32) -> ExteriorElt {
        ExteriorElt::from_terms(self.dim, self.grade_part(l).terms)
    }

    pub fn add(&self, other: &CliffordElt) -> CliffordElt {
        let mut out = self.with_dim(other.dim);
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CliffordElt) -> CliffordElt {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CliffordElt {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, r: &Rational) -> CliffordElt {
        CliffordElt::from_terms(self.dim, self.terms.iter().map(|(&m, c)| (m, c * r)))
    }

    /// Product in the larger of the two algebras.
    pub fn mul(&self, other: &CliffordElt) -> CliffordElt {
        let mut out = CliffordElt::zero(self.dim.max(other.dim));
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                let p = a * b;
                out.add_term(i ^ j, if blade_sign(i, j) < 0 { -p } else { p });
            }
        }
        out
    }

    /// Inverse of a versor-like element whose norm `a·rev(a)` is a nonzero
    /// scalar; `None` otherwise.
    pub fn inverse(&self) -> Option<CliffordElt> {
        let rev = self.reverse();
        let n = self.mul(&rev);
        if n.terms.keys().any(|&m| m != 0) || n.is_zero() || rev.mul(self) != n {
            return None;
        }
        Some(rev.scale(&n.scalar_part().recip()))
    }
}

/// Product in `Cl(ℝᵏ)`; both factors must live in the same dimension.
pub fn cl_mul(a: &CliffordElt, b: &CliffordElt) -> Result<CliffordElt> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.mul(b))
}

pub fn cl_degree(a: &CliffordElt) -> FiltDegree {
    a.degree()
}

pub fn gr_symbol(a: &CliffordElt, l: u32) -> ExteriorElt {
    a.gr_symbol(l)
}

impl Ring for CliffordElt {
    fn zero_like(&self) -> Self {
        CliffordElt::zero(self.dim)
    }
    fn one_like(&self) -> Self {
        CliffordElt::one(self.dim)
    }
    fn is_zero_elt(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

impl fmt::Display for CliffordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut masks: Vec<u32> = self.terms.keys().copied().collect();
        masks.sort_by(|&a, &b| blade_order(a, b));
        for (n, m) in masks.into_iter().enumerate() {
            fmt_signed_term(f, &self.terms[&m], &blade_body(m, "*"), n == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl{}({self})", self.dim)
    }
}

/// Even unit `g` with `g·rev(g) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotor(CliffordElt);

impl Rotor {
    pub fn new(g: CliffordElt) -> Result<Rotor> {
        if !g.is_even() {
            return Err(Error::NotUnit(format!("{g} (odd part)")));
        }
        if g.mul(&g.reverse()) != CliffordElt::one(g.dim) {
            return Err(Error::NotUnit(g.to_string()));
        }
        Ok(Rotor(g))
    }

    pub fn identity(dim: usize) -> Rotor {
        Rotor(CliffordElt::one(dim))
    }

    /// `c + s·e_i e_j` for a rational point `(c, s)` on the unit circle.
    pub fn from_pythagorean(dim: usize, c: Rational, s: Rational, i: usize, j: usize) -> Result<Rotor> {
        if &c * &c + &s * &s != Rational::one() {
            return Err(Error::NotUnit(format!("({c}, {s})")));
        }
        let ei = CliffordElt::generator(dim, i)?;
        let ej = CliffordElt::generator(dim, j)?;
        if i == j {
            return Err(Error::Precondition(
                "rotation plane needs two distinct axes".into(),
            ));
        }
        let g = CliffordElt::scalar(dim, c).add(&ei.mul(&ej).scale(&s));
        Rotor::new(g)
    }

    /// Rotor from the rational parameter `m`: `c = (1-m²)/(1+m²)`,
    /// `s = 2m/(1+m²)`.
    pub fn from_parameter(dim: usize, m: &Rational, i: usize, j: usize) -> Result<Rotor> {
        let d = Rational::one() + m * m;
        let c = (Rational::one() - m * m) / &d;
        let s = (m + m) / d;
        Rotor::from_pythagorean(dim, c, s, i, j)
    }

    pub fn elt(&self) -> &CliffordElt {
        &self.0
    }

    pub fn mul(&self, other: &Rotor) -> Rotor {
        Rotor(self.0.mul(&other.0))
    }

    pub fn inverse(&self) -> Rotor {
        Rotor(self.0.reverse())
    }

    /// `g a g⁻¹`.
    pub fn conjugate(&self, a: &CliffordElt) -> CliffordElt {
        self.0.mul(a).mul(&self.0.reverse())
    }
}

pub fn rotor_from_pythagorean(dim: usize, c: Rational, s: Rational, plane: (usize, usize)) -> Result<Rotor> {
    Rotor::from_pythagorean(dim, c, s, plane.0, plane.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn e(dim: usize, i: usize) -> CliffordElt {
        CliffordElt::generator(dim, i).unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(e(2, 1).mul(&e(2, 1)), CliffordElt::scalar(2, int(-1)));
        let e12 = e(2, 1).mul(&e(2, 2));
        assert_eq!(e12, CliffordElt::blade(2, 0b11, int(1)));
        assert_eq!(e(2, 2).mul(&e(2, 1)), e12.neg());
        let one = CliffordElt::one(2);
        assert_eq!(one.add(&e12).mul(&one.sub(&e12)), CliffordElt::scalar(2, int(2)));
        assert_eq!(cl_mul(&e(2, 1), &e(3, 1)), Err(Error::DimensionMismatch(2, 3)));
        assert!(matches!(
            CliffordElt::generator(2, 3),
            Err(Error::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn degrees_and_symbols() {
        let e123 = e(3, 1).mul(&e(3, 2)).mul(&e(3, 3));
        assert_eq!(e123.degree(), FiltDegree::Finite(-3));
        let a = CliffordElt::one(3).add(&e(3, 1).mul(&e(3, 2)));
        assert_eq!(a.degree(), FiltDegree::Finite(-2));
        assert_eq!(CliffordElt::one(3).degree(), FiltDegree::Finite(0));
        assert_eq!(CliffordElt::zero(3).degree(), FiltDegree::Infinite);
        let s = gr_symbol(&e(3, 1).mul(&e(3, 2)), 2);
        assert_eq!(
            s,
            ExteriorElt::generator(3, 1)
                .unwrap()
                .wedge(&ExteriorElt::generator(3, 2).unwrap())
        );
        assert!(gr_symbol(&e(3, 1).mul(&e(3, 1)), 2).is_zero());
    }

    #[test]
    fn reverse_and_display() {
        let e12 = e(3, 1).mul(&e(3, 2));
        assert_eq!(e12.reverse(), e12.neg());
        let a = CliffordElt::scalar(3, rat(3, 5)).add(&e12.scale(&rat(4, 5)));
        assert_eq!(a.to_string(), "3/5 + 4/5*e1*e2");
        assert_eq!(e12.neg().add(&e(3, 3)).to_string(), "e3 - e1*e2");
    }

    #[test]
    fn rotors() {
        let g = rotor_from_pythagorean(3, rat(3, 5), rat(4, 5), (1, 2)).unwrap();
        assert_eq!(g.elt().mul(&g.elt().reverse()), CliffordElt::one(3));
        assert!(matches!(
            rotor_from_pythagorean(3, rat(1, 2), rat(1, 2), (1, 2)),
            Err(Error::NotUnit(_))
        ));
        let h = Rotor::from_parameter(3, &rat(2, 7), 2, 3).unwrap();
        let a = e(3, 1).add(&e(3, 2).mul(&e(3, 3)));
        assert_eq!(g.mul(&h).conjugate(&a).degree(), a.degree());
        assert_eq!(g.elt().inverse().unwrap(), g.inverse().elt().clone());
    }
}

use num_bigint::BigInt;
use num_traits::One;

use super::{CliffordElt, Rotor};
use crate::exact::{Jet, Rational, Valuation};
use crate::{Error, Result};

/// Jet in `t` with Clifford coefficients.
pub type ClJet = Jet<CliffordElt>;

/// `exp(ξt) = Σ_{n ≤ N} ξⁿ tⁿ / n!` for a bivector `ξ`.
pub fn exp_bivector_jet(xi: &CliffordElt, truncation: usize) -> Result<ClJet> {
    if !xi.is_bivector() {
        return Err(Error::NotBivector);
    }
    let mut coeffs = Vec::with_capacity(truncation + 1);
    let mut power = CliffordElt::one(xi.dim());
    let mut factorial = BigInt::one();
    for n in 0..=truncation {
        if n > 0 {
            power = power.mul(xi);
            factorial *= BigInt::from(n);
        }
        coeffs.push(power.scale(&Rational::new(BigInt::one(), factorial.clone())));
    }
    Ok(Jet::new(coeffs))
}

fn jet_dim(c: &ClJet) -> usize {
    c.coeffs().iter().map(CliffordElt::dim).max().unwrap_or(0)
}

/// Whether the coefficient of `t^j` has word length at most `j` for every
/// `j`. Coefficients from `t^k` on (`k` the dimension) always qualify, so a
/// truncation below `k` can only certify failure.
pub fn is_weighted_cl_jet(c: &ClJet) -> Result<bool> {
    for (j, a) in c.coeffs().iter().enumerate() {
        if a.max_word_length().is_some_and(|l| l as usize > j) {
            return Ok(false);
        }
    }
    let k = jet_dim(c);
    if c.truncation() + 1 < k {
        return Err(Error::Undecidable {
            truncation: c.truncation(),
            needed: k - 1,
        });
    }
    Ok(true)
}

fn check_small_bivector_jet(name: &str, x: &ClJet) -> Result<()> {
    if x.coeffs().iter().any(|a| !a.is_bivector()) {
        return Err(Error::Precondition(format!("{name} is not bivector-valued")));
    }
    if !x.vanishes_to_order(2)? {
        return Err(Error::Precondition(format!("{name} does not vanish to order 2")));
    }
    Ok(())
}

/// Checks that `A(t) = g·exp(ξt)·exp(ξ₁(t))·c(t)·exp(-ξ₂(t))·exp(-ξt)·g⁻¹`
/// is again a weighted path when `c` is.
pub fn severa_action_check(
    g: &Rotor,
    xi: &CliffordElt,
    xi1: &ClJet,
    xi2: &ClJet,
    c: &ClJet,
    truncation: usize,
) -> Result<bool> {
    if !xi.is_bivector() {
        return Err(Error::NotBivector);
    }
    check_small_bivector_jet("xi1", xi1)?;
    check_small_bivector_jet("xi2", xi2)?;
    if !is_weighted_cl_jet(c)? {
        return Err(Error::Precondition("c is not a weighted path".into()));
    }
    let n = truncation
        .min(xi1.truncation())
        .min(xi2.truncation())
        .min(c.truncation());
    let dim = [xi.dim(), g.elt().dim(), jet_dim(xi1), jet_dim(xi2), jet_dim(c)]
        .into_iter()
        .max()
        .unwrap_or(0);
    let konst = |a: &CliffordElt| Jet::constant(a.with_dim(dim), n);
    let e_plus = exp_bivector_jet(&xi.with_dim(dim), n)?;
    let e_minus = exp_bivector_jet(&xi.with_dim(dim).neg(), n)?;
    let e1 = xi1.truncate(n).exp_nilpotent()?;
    let e2 = xi2.truncate(n).neg().exp_nilpotent()?;
    let a = konst(g.elt())
        .mul(&e_plus)
        .mul(&e1)
        .mul(&c.truncate(n))
        .mul(&e2)
        .mul(&e_minus)
        .mul(&konst(&g.elt().reverse()));
    is_weighted_cl_jet(&a)
}

/// Control for the action check: left multiplication `g·c(t)` alone, which
/// does not preserve weighted paths.
pub fn left_only_check(g: &Rotor, c: &ClJet) -> Result<bool> {
    let gc = Jet::constant(g.elt().clone(), c.truncation()).mul(c);
    is_weighted_cl_jet(&gc)
}

/// `g₁(t)·g₂(t)⁻¹ - g₁(0)·g₂(0)⁻¹ = O(t²)`.
pub fn pair_path_check(g1: &ClJet, g2: &ClJet) -> Result<bool> {
    let inv = g2.inverse()?;
    let prod = g1.mul(&inv);
    let base = prod.coeff(0)?.clone();
    let diff = prod.sub(&Jet::constant(base, prod.truncation()));
    match diff.valuation() {
        Valuation::Exact(k) => Ok(k >= 2),
        Valuation::AtLeast(_) => diff.vanishes_to_order(2),
    }
}

use super::WeightedChart;
use crate::exact::{Poly, Rational};
use crate::{Error, Result};

/// Whether the chart map `φ: src → dst`, given by one polynomial in the
/// source coordinates per target coordinate, pulls the filtration back into
/// itself. Since the filtration is generated by the coordinates, it is
/// enough that `deg_src(φ_a) ≥ w'_a` for every target coordinate.
pub fn is_weighted_morphism(src: &WeightedChart, dst: &WeightedChart, phi: &[Poly]) -> Result<bool> {
    Ok(first_violation(src, dst, phi)?.is_none())
}

/// Index and degree of the first component that breaks the weighted
/// morphism condition.
pub(crate) fn first_violation(
    src: &WeightedChart,
    dst: &WeightedChart,
    phi: &[Poly],
) -> Result<Option<(usize, crate::FiltDegree, i64)>> {
    if phi.len() != dst.dim() {
        return Err(Error::ArityMismatch {
            expected: dst.dim(),
            found: phi.len(),
        });
    }
    for (a, (comp, w)) in phi.iter().zip(dst.weights()).enumerate() {
        let d = src.filtration_degree(comp)?;
        if !d.at_least(w as i64) {
            return Ok(Some((a, d, w as i64)));
        }
    }
    Ok(None)
}

/// `f ∘ φ` for `f` a function on `dst`.
pub fn pullback_function(src: &WeightedChart, dst: &WeightedChart, phi: &[Poly], f: &Poly) -> Result<Poly> {
    if phi.len() != dst.dim() {
        return Err(Error::ArityMismatch {
            expected: dst.dim(),
            found: phi.len(),
        });
    }
    let one = src.constant(Rational::from_integer(1.into()));
    let images: Vec<Poly> = phi
        .iter()
        .map(|p| p.reindex(src.coords()))
        .collect::<Result<_>>()?;
    f.substitute(
        |name| {
            dst.coords()
                .iter()
                .position(|c| c == name)
                .map(|a| images[a].clone())
        },
        &one,
    )
}

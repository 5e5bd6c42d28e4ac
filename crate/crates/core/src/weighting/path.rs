use super::WeightedChart;
use crate::exact::{FiltDegree, Jet, Poly, Rational, Valuation};
use crate::{Error, Result};

/// A path through the chart, one jet in `t` per coordinate.
pub type WeightedPath = Vec<Jet<Rational>>;

fn check_arity(chart: &WeightedChart, gamma: &[Jet<Rational>]) -> Result<()> {
    if gamma.len() != chart.dim() {
        return Err(Error::ArityMismatch {
            expected: chart.dim(),
            found: gamma.len(),
        });
    }
    Ok(())
}

/// Whether each component `γ_a` vanishes to order at least `w_a`.
pub fn is_weighted_path(chart: &WeightedChart, gamma: &[Jet<Rational>]) -> Result<bool> {
    check_arity(chart, gamma)?;
    let mut undecided = None;
    for (g, w) in gamma.iter().zip(chart.weights()) {
        match g.vanishes_to_order(w as usize) {
            Ok(true) => {}
            Ok(false) => return Ok(false),
            Err(e) => undecided = Some(e),
        }
    }
    match undecided {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// `ord_t (f ∘ γ)`. Infinite for `f = 0`; an error when `f ∘ γ` vanishes to
/// the full truncation order, since the true order is then not visible.
pub fn path_order(chart: &WeightedChart, f: &Poly, gamma: &[Jet<Rational>]) -> Result<FiltDegree> {
    check_arity(chart, gamma)?;
    if f.is_zero() {
        return Ok(FiltDegree::Infinite);
    }
    let n = gamma.iter().map(Jet::truncation).min().unwrap_or(0);
    let one = Jet::constant(Rational::from_integer(1.into()), n);
    let comp = f.substitute(
        |name| {
            chart
                .coords()
                .iter()
                .position(|c| c == name)
                .map(|a| gamma[a].truncate(n))
        },
        &one,
    )?;
    match comp.valuation() {
        Valuation::Exact(k) => Ok(FiltDegree::Finite(k as i64)),
        Valuation::AtLeast(_) => Err(Error::Undecidable {
            truncation: n,
            needed: n + 1,
        }),
    }
}

/// The path `γ(t) = (λ_1 t^{w_1}, …, λ_m t^{w_m})`.
pub fn witness_path(chart: &WeightedChart, lambda: &[Rational], truncation: usize) -> Result<WeightedPath> {
    if lambda.len() != chart.dim() {
        return Err(Error::ArityMismatch {
            expected: chart.dim(),
            found: lambda.len(),
        });
    }
    Ok(lambda
        .iter()
        .zip(chart.weights())
        .map(|(l, w)| Jet::monomial(l.clone(), w as usize, truncation))
        .collect())
}

/// Image `φ ∘ γ` of a path under a chart map `src → dst`.
pub fn push_path(src: &WeightedChart, phi: &[Poly], gamma: &[Jet<Rational>]) -> Result<WeightedPath> {
    check_arity(src, gamma)?;
    let n = gamma.iter().map(Jet::truncation).min().unwrap_or(0);
    let one = Jet::constant(Rational::from_integer(1.into()), n);
    phi.iter()
        .map(|p| {
            p.substitute(
                |name| {
                    src.coords()
                        .iter()
                        .position(|c| c == name)
                        .map(|a| gamma[a].truncate(n))
                },
                &one,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn chart12() -> WeightedChart {
        WeightedChart::new(&["x1", "x2"], &[1, 2]).unwrap()
    }

    fn t_pow(k: usize, n: usize) -> Jet<Rational> {
        Jet::monomial(int(1), k, n)
    }

    #[test]
    fn weighted_path_examples() {
        let c = chart12();
        assert!(is_weighted_path(&c, &[t_pow(1, 4), t_pow(2, 4)]).unwrap());
        assert!(!is_weighted_path(&c, &[t_pow(1, 4), t_pow(1, 4)]).unwrap());
        // Zero to order 0 cannot certify vanishing to order 2.
        let zero0 = Jet::constant(int(0), 0);
        assert!(matches!(
            is_weighted_path(&c, &[t_pow(1, 1), zero0]),
            Err(Error::Undecidable { .. })
        ));
    }

    #[test]
    fn witness_path_attains_degree() {
        let c = chart12();
        let f = &c.coord("x1").unwrap() * &c.coord("x2").unwrap();
        let gamma = witness_path(&c, &[int(2), int(3)], 6).unwrap();
        assert!(is_weighted_path(&c, &gamma).unwrap());
        assert_eq!(path_order(&c, &f, &gamma).unwrap(), FiltDegree::Finite(3));
        assert_eq!(path_order(&c, &c.zero(), &gamma).unwrap(), FiltDegree::Infinite);
    }

    #[test]
    fn cancellation_to_truncation_is_undecidable() {
        let c = chart12();
        let x1 = c.coord("x1").unwrap();
        let x2 = c.coord("x2").unwrap();
        let f = &x2 - &x1.pow(2);
        let gamma = vec![t_pow(1, 5), t_pow(2, 5)];
        assert!(matches!(
            path_order(&c, &f, &gamma),
            Err(Error::Undecidable { truncation: 5, .. })
        ));
    }

    #[test]
    fn push_path_through_morphism() {
        let c = chart12();
        let x1 = c.coord("x1").unwrap();
        let x2 = c.coord("x2").unwrap();
        let dst = WeightedChart::new(&["y1", "y2"], &[1, 1]).unwrap();
        let phi = [x1.clone(), &x1.pow(2) + &x2];
        let gamma = witness_path(&c, &[int(2), int(5)], 5).unwrap();
        let img = push_path(&c, &phi, &gamma).unwrap();
        assert!(is_weighted_path(&dst, &img).unwrap());
        assert_eq!(img[1].coeff(2).unwrap(), &int(9));
    }
}

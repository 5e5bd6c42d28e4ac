use crate::bundle::Section;
use crate::exact::Poly;
use crate::weighting::WeightedChart;
use crate::Result;

/// Multi-indices with `β_j ≤ bound_j`.
fn boxes(bounds: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let total: usize = bounds.iter().map(|&b| b as usize + 1).product();
    (0..total).map(move |mut n| {
        bounds
            .iter()
            .map(|&b| {
                let r = (n % (b as usize + 1)) as u32;
                n /= b as usize + 1;
                r
            })
            .collect()
    })
}

fn beta_weight(chart: &WeightedChart, beta: &[u32]) -> i64 {
    chart
        .weights()
        .iter()
        .zip(beta)
        .map(|(&w, &b)| w as i64 * b as i64)
        .sum()
}

/// Whether `∂^β f` vanishes on `N` for every `β` with `β·w < i`. Higher
/// derivatives than the degree of `f` in each variable vanish, so the
/// enumeration is finite.
pub fn recover_scalar_weighting(chart: &WeightedChart, f: &Poly, i: i64) -> Result<bool> {
    let f = f.reindex(chart.coords())?;
    let coords = chart.coords().to_vec();
    let bounds: Vec<u32> = coords.iter().map(|c| f.degree_in(c)).collect();
    for beta in boxes(&bounds) {
        if beta_weight(chart, &beta) >= i {
            continue;
        }
        if !chart.restrict_to_n(&f.derivative_multi(&coords, &beta)).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `(∂^β σ)|_N` lies in `(V|_N)_{i - β·w}` for every lifted
/// coordinate derivative: component `a` must vanish on `N` whenever
/// `v_a < i - β·w`.
pub fn recover_section_weighting(sigma: &Section, i: i64) -> bool {
    let bundle = sigma.bundle();
    let chart = bundle.base();
    let coords = chart.coords().to_vec();
    let bounds: Vec<u32> = coords
        .iter()
        .map(|c| {
            sigma
                .components()
                .iter()
                .map(|f| f.degree_in(c))
                .max()
                .unwrap_or(0)
        })
        .collect();
    for beta in boxes(&bounds) {
        let level = i - beta_weight(chart, &beta);
        for (f, &v) in sigma.components().iter().zip(bundle.vweights()) {
            if v < level && !chart.restrict_to_n(&f.derivative_multi(&coords, &beta)).is_zero() {
                return false;
            }
        }
    }
    true
}

use super::{Section, WeightedBundle};
use crate::exact::{Poly, Rational};
use crate::{Error, Result};

/// Change of weighted frame. The new frame element `σ'_a = Σ_b M_{ba} σ_b`
/// is declared to have degree `v'_a`, which defines a possibly different
/// weighting on the same bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChange {
    old: WeightedBundle,
    new: WeightedBundle,
    matrix: Vec<Vec<Poly>>,
    inverse: Vec<Vec<Poly>>,
}

impl FrameChange {
    /// `new_frame[a]` is `σ'_a` written in the old frame. The matrix must
    /// have constant nonzero determinant.
    pub fn new<S: AsRef<str>>(
        old: &WeightedBundle,
        new_frame: &[Section],
        names: &[S],
        vweights: &[i64],
    ) -> Result<FrameChange> {
        let k = old.rank();
        if new_frame.len() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                found: new_frame.len(),
            });
        }
        if new_frame.iter().any(|s| s.bundle() != old) {
            return Err(Error::BaseMismatch);
        }
        let matrix: Vec<Vec<Poly>> = (0..k)
            .map(|b| new_frame.iter().map(|s| s.components()[b].clone()).collect())
            .collect();
        let zero = old.base().zero();
        let det = determinant(&matrix, &zero);
        let d = match det.constant_value() {
            Some(d) if d != Rational::from_integer(0.into()) => d,
            _ => return Err(Error::NonInvertible),
        };
        let dinv = d.recip();
        let inverse = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        // adj(M)_{ij} = (-1)^{i+j} det(M without row j, column i)
                        let c = determinant(&minor(&matrix, j, i), &zero).scale(&dinv);
                        if (i + j) % 2 == 1 {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        let new = WeightedBundle::with_fiber_coords(old.base(), names, vweights, old.fiber_coords())?;
        Ok(FrameChange {
            old: old.clone(),
            new,
            matrix,
            inverse,
        })
    }

    pub fn old(&self) -> &WeightedBundle {
        &self.old
    }

    pub fn new_bundle(&self) -> &WeightedBundle {
        &self.new
    }

    fn apply(m: &[Vec<Poly>], comps: &[Poly], zero: &Poly) -> Vec<Poly> {
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(comps)
                    .fold(zero.clone(), |acc, (a, f)| &acc + &(a * f))
            })
            .collect()
    }

    /// Components of an old-frame section in the new frame.
    pub fn express(&self, sigma: &Section) -> Result<Section> {
        if sigma.bundle() != &self.old {
            return Err(Error::BaseMismatch);
        }
        let zero = self.old.base().zero();
        Section::new(
            &self.new,
            FrameChange::apply(&self.inverse, sigma.components(), &zero),
        )
    }

    /// Components of a new-frame section in the old frame.
    pub fn restore(&self, sigma: &Section) -> Result<Section> {
        if sigma.bundle() != &self.new {
            return Err(Error::BaseMismatch);
        }
        let zero = self.old.base().zero();
        Section::new(
            &self.old,
            FrameChange::apply(&self.matrix, sigma.components(), &zero),
        )
    }
}

fn minor(m: &[Vec<Poly>], row: usize, col: usize) -> Vec<Vec<Poly>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first row.
fn determinant(m: &[Vec<Poly>], zero: &Poly) -> Poly {
    match m.len() {
        0 => zero + &Poly::constant_in(zero.vars().clone(), Rational::from_integer(1.into())),
        1 => m[0][0].clone(),
        n => (0..n).fold(zero.clone(), |acc, j| {
            let term = &m[0][j] * &determinant(&minor(m, 0, j), zero);
            if j % 2 == 1 {
                &acc - &term
            } else {
                &acc + &term
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{line, v02};
    use super::*;
    use crate::exact::{int, FiltDegree};

    #[test]
    fn primed_weighting() {
        let b = v02();
        let x = line().coord("x").unwrap();
        let one = line().constant(int(1));
        let s = Section::new(&b, vec![one.clone(), x.clone()]).unwrap();
        let fc = FrameChange::new(&b, &[s.clone(), Section::frame(&b, 1)], &["t1", "t2"], &[0, -2]).unwrap();
        let e = fc.express(&s).unwrap();
        assert_eq!(s.degree(), FiltDegree::Finite(-1));
        assert_eq!(e.degree(), FiltDegree::Finite(0));
        assert_eq!(fc.restore(&e).unwrap(), s);
        // σ_1 = σ'_1 - x σ'_2 drops to degree -1 in the new weighting.
        let s1 = fc.express(&Section::frame(&b, 0)).unwrap();
        assert_eq!(s1.components()[1], -&x);
        assert_eq!(s1.degree(), FiltDegree::Finite(-1));
    }

    #[test]
    fn singular_change_rejected() {
        let b = v02();
        let x = line().coord("x").unwrap();
        let xs1 = Section::new(&b, vec![x, line().zero()]).unwrap();
        assert_eq!(
            FrameChange::new(&b, &[xs1, Section::frame(&b, 1)], &["t1", "t2"], &[0, -2]),
            Err(Error::NonInvertible)
        );
    }
}

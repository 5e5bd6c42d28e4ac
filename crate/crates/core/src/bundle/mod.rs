//! Linearly weighted bundles trivialized over a weighted chart.
//!
//! A bundle carries a frame `σ_1, …, σ_k` with vertical weights `v_a`. The
//! frame element `σ_a` has section degree `v_a`, and the dual fiber
//! coordinate `y_a` has weight `-v_a`, so a fiber monomial `x^α y^β` has
//! degree `α·w - β·v`.

mod fiber;
mod frame;
mod section;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::weighting::{morphism_violation, Grading, WeightedChart};
use crate::{Error, Poly, Result};

pub use fiber::FiberPoly;
pub use frame::FrameChange;
pub use section::{pairing, GrSection, Section, SectionFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBundle {
    base: WeightedChart,
    frame: Arc<[String]>,
    vweights: Vec<i64>,
    fiber_coords: Arc<[String]>,
}

fn owned<S: AsRef<str>>(names: &[S]) -> Vec<String> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// `y1, y2, …` skipping names already used by the base chart.
fn fresh_fiber_names(base: &WeightedChart, k: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(k);
    let mut n = 1;
    while out.len() < k {
        let name = format!("y{n}");
        if !base.coords().contains(&name) {
            out.push(name);
        }
        n += 1;
    }
    out
}

impl WeightedBundle {
    /// Bundle with fiber coordinates `y1, …, yk`.
    pub fn new<S: AsRef<str>>(base: &WeightedChart, frame: &[S], vweights: &[i64]) -> Result<WeightedBundle> {
        let ys: Vec<String> = (1..=frame.len()).map(|n| format!("y{n}")).collect();
        WeightedBundle::with_fiber_coords(base, frame, vweights, &ys)
    }

    pub fn with_fiber_coords<S: AsRef<str>, T: AsRef<str>>(
        base: &WeightedChart,
        frame: &[S],
        vweights: &[i64],
        fiber_coords: &[T],
    ) -> Result<WeightedBundle> {
        if frame.len() != vweights.len() {
            return Err(Error::ArityMismatch {
                expected: frame.len(),
                found: vweights.len(),
            });
        }
        if fiber_coords.len() != frame.len() {
            return Err(Error::ArityMismatch {
                expected: frame.len(),
                found: fiber_coords.len(),
            });
        }
        let frame = owned(frame);
        let ys = owned(fiber_coords);
        let mut seen: Vec<&String> = base.coords().iter().collect();
        for n in frame.iter().chain(&ys) {
            if seen.contains(&n) {
                return Err(Error::DuplicateName(n.clone()));
            }
            seen.push(n);
        }
        Ok(WeightedBundle {
            base: base.clone(),
            frame: frame.into(),
            vweights: vweights.to_vec(),
            fiber_coords: ys.into(),
        })
    }

    fn derived(base: &WeightedChart, frame: Vec<String>, vweights: Vec<i64>) -> WeightedBundle {
        let ys = fresh_fiber_names(base, frame.len());
        WeightedBundle {
            base: base.clone(),
            frame: frame.into(),
            vweights,
            fiber_coords: ys.into(),
        }
    }

    /// Trivial line bundle with frame `1` of weight 0; scalar operators act
    /// on its sections.
    pub fn trivial(base: &WeightedChart) -> WeightedBundle {
        WeightedBundle::derived(base, vec!["1".to_string()], vec![0])
    }

    pub fn is_trivial_line(&self) -> bool {
        self.rank() == 1 && self.vweights[0] == 0 && &*self.frame[0] == "1"
    }

    pub fn base(&self) -> &WeightedChart {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.vweights.len()
    }

    pub fn frame_names(&self) -> &Arc<[String]> {
        &self.frame
    }

    pub fn vweights(&self) -> &[i64] {
        &self.vweights
    }

    pub fn fiber_coords(&self) -> &Arc<[String]> {
        &self.fiber_coords
    }

    pub fn frame_index(&self, name: &str) -> Option<usize> {
        self.frame.iter().position(|n| n == name)
    }

    /// Base and fiber coordinates, base first.
    pub fn total_vars(&self) -> Arc<[String]> {
        self.base
            .coords()
            .iter()
            .chain(self.fiber_coords.iter())
            .cloned()
            .collect()
    }

    /// Grading on fiber polynomials: `w` on the base, `-v` on the fiber.
    pub fn fiber_grading(&self) -> Grading {
        let mut ws: Vec<i64> = self.base.weights().iter().map(|&w| w as i64).collect();
        ws.extend(self.vweights.iter().map(|v| -v));
        Grading::new(&self.total_vars(), &ws).expect("names checked at construction")
    }

    fn same_base(&self, other: &WeightedBundle) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// Dual bundle, weights `-v_a`, frame the dual frame.
    pub fn dual(&self) -> WeightedBundle {
        WeightedBundle::derived(
            &self.base,
            self.frame.iter().map(|n| format!("{n}*")).collect(),
            self.vweights.iter().map(|v| -v).collect(),
        )
    }

    /// Tensor product, weights `v_a + u_b` on the product frame `σ_a ⊗ τ_b`.
    pub fn tensor(&self, other: &WeightedBundle) -> Result<WeightedBundle> {
        self.same_base(other)?;
        let mut names = Vec::new();
        let mut ws = Vec::new();
        for (a, va) in self.frame.iter().zip(&self.vweights) {
            for (b, ub) in other.frame.iter().zip(&other.vweights) {
                names.push(format!("{a}.{b}"));
                ws.push(va + ub);
            }
        }
        Ok(WeightedBundle::derived(&self.base, names, ws))
    }

    /// `Hom(V, W) = V* ⊗ W`, weights `u_b - v_a`.
    pub fn hom(&self, target: &WeightedBundle) -> Result<WeightedBundle> {
        self.dual().tensor(target)
    }

    /// `n`-th symmetric power on monomials `σ_{a_1}⋯σ_{a_n}`, `a_1 ≤ … ≤ a_n`.
    pub fn sym(&self, n: usize) -> WeightedBundle {
        self.power(n, true)
    }

    /// `n`-th exterior power on `σ_{a_1}∧…∧σ_{a_n}`, `a_1 < … < a_n`.
    pub fn wedge(&self, n: usize) -> WeightedBundle {
        self.power(n, false)
    }

    fn power(&self, n: usize, repeat: bool) -> WeightedBundle {
        let sep = if repeat { "." } else { "^" };
        let mut names = Vec::new();
        let mut ws = Vec::new();
        for idx in index_tuples(self.rank(), n, repeat) {
            if idx.is_empty() {
                names.push("1".to_string());
            } else {
                let parts: Vec<&str> = idx.iter().map(|&a| self.frame[a].as_str()).collect();
                names.push(parts.join(sep));
            }
            ws.push(idx.iter().map(|&a| self.vweights[a]).sum());
        }
        WeightedBundle::derived(&self.base, names, ws)
    }

    /// `Γ(V[k])_(i) = Γ(V)_(i+k)`, so the weights become `v_a - k`.
    pub fn shift(&self, k: i64) -> WeightedBundle {
        WeightedBundle {
            vweights: self.vweights.iter().map(|v| v - k).collect(),
            ..self.clone()
        }
    }

    /// Pullback along a weighted morphism `φ: src → base`. The pulled-back
    /// frame keeps its weights.
    pub fn pullback(&self, src: &WeightedChart, phi: &[Poly]) -> Result<WeightedBundle> {
        if let Some((component, degree, required)) = morphism_violation(src, &self.base, phi)? {
            return Err(Error::NotWeightedMorphism {
                component,
                degree: degree.to_string(),
                required,
            });
        }
        let mut ys = self.fiber_coords.to_vec();
        if ys.iter().any(|y| src.coords().contains(y)) {
            ys = fresh_fiber_names(src, self.rank());
        }
        WeightedBundle::with_fiber_coords(src, &self.frame, &self.vweights, &ys)
    }

    /// Rank `k_i = #{a : v_a ≥ i}` of the `i`-th level of the filtration
    /// of `V|_N`.
    pub fn rank_at(&self, i: i64) -> usize {
        self.vweights.iter().filter(|&&v| v >= i).count()
    }

    /// `i ↦ k_i` for `min v ≤ i ≤ max v + 1`; outside this range the rank
    /// is `k` below and `0` above.
    pub fn fiber_filtration_ranks(&self) -> BTreeMap<i64, usize> {
        let (Some(&lo), Some(&hi)) = (self.vweights.iter().min(), self.vweights.iter().max()) else {
            return BTreeMap::new();
        };
        (lo..=hi + 1).map(|i| (i, self.rank_at(i))).collect()
    }

    /// Dimension of `gr_i(V|_N)`, that is `k_i - k_{i+1}`.
    pub fn graded_rank(&self, i: i64) -> usize {
        self.rank_at(i) - self.rank_at(i + 1)
    }

    /// Weighted subbundle cut out by the vanishing of some base and fiber
    /// coordinates. Killing the fiber coordinate `y_a` drops `σ_a`.
    pub fn restrict_to_subbundle<S: AsRef<str>, T: AsRef<str>>(
        &self,
        base_coords_to_kill: &[S],
        fiber_coords_to_kill: &[T],
    ) -> Result<WeightedBundle> {
        let kill_x = owned(base_coords_to_kill);
        let kill_y = owned(fiber_coords_to_kill);
        for x in &kill_x {
            if !self.base.coords().contains(x) {
                return Err(Error::UnknownVariable(x.clone()));
            }
        }
        for y in &kill_y {
            if !self.fiber_coords.contains(y) {
                return Err(Error::UnknownVariable(y.clone()));
            }
        }
        let (names, ws): (Vec<String>, Vec<u32>) = self
            .base
            .coords()
            .iter()
            .zip(self.base.weights())
            .filter(|(n, _)| !kill_x.contains(n))
            .map(|(n, w)| (n.clone(), w))
            .unzip();
        let base = WeightedChart::new(&names, &ws)?;
        let keep: Vec<usize> = (0..self.rank())
            .filter(|&a| !kill_y.contains(&self.fiber_coords[a]))
            .collect();
        WeightedBundle::with_fiber_coords(
            &base,
            &keep.iter().map(|&a| self.frame[a].clone()).collect::<Vec<_>>(),
            &keep.iter().map(|&a| self.vweights[a]).collect::<Vec<_>>(),
            &keep
                .iter()
                .map(|&a| self.fiber_coords[a].clone())
                .collect::<Vec<_>>(),
        )
    }

    /// `V|_N`: kill every base coordinate of positive weight.
    pub fn restrict_to_n(&self) -> Result<WeightedBundle> {
        self.restrict_to_subbundle(&self.base.normal_coords(), &[] as &[&str])
    }

    /// Frame classes `σ_a^{[v_a]}` of the normal model.
    pub fn normal_model_frame(&self) -> Vec<GrSection> {
        (0..self.rank())
            .map(|a| {
                let comps = (0..self.rank())
                    .map(|b| {
                        if a == b {
                            self.base.constant(crate::exact::int(1))
                        } else {
                            self.base.zero()
                        }
                    })
                    .collect();
                GrSection::new(self.vweights[a], comps)
            })
            .collect()
    }
}

/// Increasing index tuples of length `n` from `0..k`, weakly increasing
/// when `repeat` is set.
fn index_tuples(k: usize, n: usize, repeat: bool) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, start: usize, repeat: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in start..k {
            cur.push(a);
            go(k, n, if repeat { a } else { a + 1 }, repeat, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 0, repeat, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn line() -> WeightedChart {
        WeightedChart::new(&["x"], &[1]).unwrap()
    }

    pub(super) fn v02() -> WeightedBundle {
        WeightedBundle::new(&line(), &["s1", "s2"], &[0, -2]).unwrap()
    }

    #[test]
    fn induced_weights() {
        let b = v02();
        assert_eq!(b.dual().vweights(), &[0, 2]);
        assert_eq!(b.tensor(&b).unwrap().vweights(), &[0, -2, -2, -4]);
        assert_eq!(b.hom(&b).unwrap().vweights(), &[0, -2, 2, 0]);
        assert_eq!(b.shift(3).dual().vweights(), &[3, 5]);
        assert_eq!(b.dual().shift(-3).vweights(), &[3, 5]);
        assert_eq!(b.sym(2).vweights(), &[0, -2, -4]);
        assert_eq!(b.wedge(2).vweights(), &[-2]);
        assert_eq!(b.wedge(3).rank(), 0);
        assert_eq!(b.sym(0).vweights(), &[0]);
        assert_eq!(b.tensor(&b).unwrap().frame_names()[1], "s1.s2");
    }

    #[test]
    fn base_mismatch() {
        let other = WeightedChart::new(&["x"], &[2]).unwrap();
        let c = WeightedBundle::new(&other, &["s"], &[0]).unwrap();
        assert_eq!(v02().tensor(&c), Err(Error::BaseMismatch));
    }

    #[test]
    fn name_collisions_rejected() {
        let c = WeightedChart::new(&["y1"], &[1]).unwrap();
        assert_eq!(
            WeightedBundle::new(&c, &["s"], &[0]),
            Err(Error::DuplicateName("y1".into()))
        );
        assert_eq!(c.coords().len(), 1);
        let b = WeightedBundle::with_fiber_coords(&c, &["s"], &[0], &["u"]).unwrap();
        assert_eq!(b.dual().fiber_coords()[0], "y2");
    }

    #[test]
    fn ranks() {
        let b = v02();
        let r = b.fiber_filtration_ranks();
        assert_eq!(r[&-2], 2);
        assert_eq!(r[&0], 1);
        assert_eq!(r[&1], 0);
        assert_eq!(b.rank_at(-7), 2);
        let d = b.dual();
        for i in -5..5 {
            assert_eq!(d.rank_at(i), b.rank() - b.rank_at(-i + 1));
        }
        let total: usize = (-3..=1).map(|i| b.graded_rank(i)).sum();
        assert_eq!(total, b.rank());
        assert_eq!(b.normal_model_frame().len(), 2);
    }

    #[test]
    fn restriction() {
        let b = v02();
        assert_eq!(
            b.restrict_to_subbundle(&[] as &[&str], &[] as &[&str]).unwrap(),
            b
        );
        let s = b.restrict_to_subbundle(&[] as &[&str], &["y1"]).unwrap();
        assert_eq!(s.vweights(), &[-2]);
        let n = b.restrict_to_n().unwrap();
        assert_eq!(n.base().dim(), 0);
        assert_eq!(n.vweights(), &[0, -2]);
        assert!(matches!(
            b.restrict_to_subbundle(&["z"], &[] as &[&str]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn pullback_keeps_weights() {
        let src = WeightedChart::new(&["x1", "x2"], &[1, 1]).unwrap();
        let phi = [&src.coord("x1").unwrap() + &src.coord("x2").unwrap()];
        let p = v02().pullback(&src, &phi).unwrap();
        assert_eq!(p.vweights(), &[0, -2]);
        assert_eq!(p.base(), &src);
        let id = [line().coord("x").unwrap()];
        assert_eq!(v02().pullback(&line(), &id).unwrap(), v02());
        let bad = [src.constant(crate::exact::int(1))];
        assert!(matches!(
            v02().pullback(&src, &bad),
            Err(Error::NotWeightedMorphism { component: 0, .. })
        ));
    }
}

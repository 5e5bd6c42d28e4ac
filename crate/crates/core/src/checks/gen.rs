use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{Section, WeightedBundle};
use crate::clifford::{ClJet, CliffordElt, GetzlerOp, Rotor};
use crate::diffop::DiffOp;
use crate::exact::{int, rat, Jet, Poly, Rational};
use crate::weighting::{WeightedChart, WeightedPath};

/// Seeded generator of random test objects. Coefficients are small
/// integers so that exact arithmetic stays cheap.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn usize(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let c = self.int(-bound, bound);
            if c != 0 {
                return c;
            }
        }
    }

    /// A rational different from `0`, `1` and `-1`.
    pub fn scale_factor(&mut self) -> Rational {
        loop {
            let r = rat(self.nonzero_int(5), self.int(1, 4));
            if r != int(1) && r != int(-1) {
                return r;
            }
        }
    }

    pub fn chart_with(&mut self, weights: &[u32]) -> WeightedChart {
        let names: Vec<String> = (1..=weights.len()).map(|i| format!("x{i}")).collect();
        WeightedChart::new(&names, weights).expect("distinct names")
    }

    /// Chart with `1..=max_dim` coordinates of weight `0..=3`.
    pub fn chart(&mut self, max_dim: usize) -> WeightedChart {
        let n = self.usize(1, max_dim);
        let ws: Vec<u32> = (0..n).map(|_| self.int(0, 3) as u32).collect();
        self.chart_with(&ws)
    }

    pub fn poly(&mut self, vars: &Arc<[String]>, max_terms: usize, max_deg: u32) -> Poly {
        let n = self.usize(0, max_terms);
        let terms: Vec<(Vec<u32>, Rational)> = (0..n)
            .map(|_| {
                let e = (0..vars.len())
                    .map(|_| self.int(0, max_deg as i64) as u32)
                    .collect();
                (e, int(self.int(-9, 9)))
            })
            .collect();
        Poly::from_terms(vars.clone(), terms)
    }

    pub fn nonzero_poly(&mut self, vars: &Arc<[String]>, max_terms: usize, max_deg: u32) -> Poly {
        loop {
            let p = self.poly(vars, max_terms.max(1), max_deg);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Bundle of rank `1..=max_rank` with vertical weights in `-3..=2`.
    pub fn bundle(&mut self, base: &WeightedChart, max_rank: usize) -> WeightedBundle {
        let k = self.usize(1, max_rank);
        let names: Vec<String> = (1..=k).map(|a| format!("s{a}")).collect();
        let vs: Vec<i64> = (0..k).map(|_| self.int(-3, 2)).collect();
        WeightedBundle::new(base, &names, &vs).expect("fresh names")
    }

    pub fn section(&mut self, b: &WeightedBundle) -> Section {
        let vars = b.base().coords().clone();
        let comps = (0..b.rank()).map(|_| self.poly(&vars, 3, 3)).collect();
        Section::new(b, comps).expect("components over the base")
    }

    pub fn nonzero_section(&mut self, b: &WeightedBundle) -> Section {
        loop {
            let s = self.section(b);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Operator with up to `max_terms` terms and derivatives of total
    /// order at most 2.
    pub fn diffop(&mut self, b: &WeightedBundle, max_terms: usize) -> DiffOp {
        let vars = b.base().coords().clone();
        let m = vars.len();
        let n = self.usize(1, max_terms);
        let terms: Vec<_> = (0..n)
            .map(|_| {
                let a = self.usize(0, b.rank() - 1);
                let c = self.usize(0, b.rank() - 1);
                let mut beta = vec![0u32; m];
                for _ in 0..self.usize(0, 2) {
                    let j = self.usize(0, m - 1);
                    beta[j] += 1;
                }
                (a, c, beta, self.poly(&vars, 2, 2))
            })
            .collect();
        DiffOp::from_terms(b, terms).expect("indices in range")
    }

    pub fn clifford(&mut self, dim: usize, max_terms: usize) -> CliffordElt {
        let n = self.usize(0, max_terms);
        let terms: Vec<(u32, Rational)> = (0..n)
            .map(|_| (self.rng.gen_range(0..(1u32 << dim)), int(self.int(-5, 5))))
            .collect();
        CliffordElt::from_terms(dim, terms)
    }

    pub fn bivector(&mut self, dim: usize) -> CliffordElt {
        let mut out = CliffordElt::zero(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                if self.coin() {
                    let c = rat(self.int(-3, 3), self.int(1, 2));
                    out = out.add(&CliffordElt::blade(dim, (1 << i) | (1 << j), c));
                }
            }
        }
        out
    }

    /// Product of up to three rotors from rational points on the circle.
    pub fn rotor(&mut self, dim: usize) -> Rotor {
        let mut g = Rotor::identity(dim);
        for _ in 0..self.usize(1, 3) {
            let i = self.usize(1, dim);
            let mut j = self.usize(1, dim);
            while j == i {
                j = self.usize(1, dim);
            }
            let m = rat(self.int(-4, 4), self.int(1, 5));
            g = g.mul(&Rotor::from_parameter(dim, &m, i, j).expect("unit by construction"));
        }
        g
    }

    /// Bivector-valued jet vanishing to order two.
    pub fn small_bivector_jet(&mut self, dim: usize, n: usize) -> ClJet {
        let coeffs = (0..=n)
            .map(|k| {
                if k < 2 || self.int(0, 2) == 0 {
                    CliffordElt::zero(dim)
                } else {
                    self.bivector(dim)
                }
            })
            .collect();
        Jet::new(coeffs)
    }

    /// Jet whose `t^j` coefficient has word length at most `j`.
    pub fn weighted_cl_jet(&mut self, dim: usize, n: usize) -> ClJet {
        let coeffs = (0..=n)
            .map(|j| {
                let mut a = self.clifford(dim, 3);
                for l in (j as u32 + 1)..=dim as u32 {
                    a = a.sub(&a.grade_part(l));
                }
                a
            })
            .collect();
        Jet::new(coeffs)
    }

    /// Getzler operator over `chart` in dimension `dim`, derivatives of
    /// total order at most 2.
    pub fn getzler(&mut self, chart: &WeightedChart, dim: usize) -> GetzlerOp {
        let vars = chart.coords().clone();
        let m = vars.len();
        let n = self.usize(1, 4);
        let terms: Vec<_> = (0..n)
            .map(|_| {
                let mask = self.rng.gen_range(0..(1u32 << dim));
                let mut beta = vec![0u32; m];
                for _ in 0..self.usize(0, 2) {
                    let j = self.usize(0, m - 1);
                    beta[j] += 1;
                }
                (mask, beta, self.poly(&vars, 2, 2))
            })
            .collect();
        GetzlerOp::from_terms(dim, &vars, terms).expect("masks in range")
    }

    /// Polynomial path with `γ_a = O(t^{w_a})`.
    pub fn weighted_path(&mut self, chart: &WeightedChart, n: usize) -> WeightedPath {
        chart
            .weights()
            .iter()
            .map(|&w| {
                let coeffs = (0..=n)
                    .map(|k| {
                        if k < w as usize {
                            int(0)
                        } else {
                            int(self.int(-4, 4))
                        }
                    })
                    .collect();
                Jet::new(coeffs)
            })
            .collect()
    }
}

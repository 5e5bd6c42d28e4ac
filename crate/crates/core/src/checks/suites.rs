use std::collections::HashMap;
use std::sync::Arc;

use super::{CaseFailure, CaseResult, Gen, Suite};
use crate::bundle::{pairing, FiberPoly, Section, WeightedBundle};
use crate::clifford::{exp_bivector_jet, pair_path_check, severa_action_check, CliffordElt, ExteriorElt};
use crate::diffop::{recover_scalar_weighting, recover_section_weighting, DiffOp};
use crate::exact::{int, FiltDegree, Jet, Poly, Rational};
use crate::weighting::{
    is_weighted_morphism, is_weighted_path, path_order, pullback_function, push_path, untilde, witness_path,
    WeightedChart,
};
use crate::Error;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(CaseFailure(format!($($arg)+)));
        }
    };
}

fn vars(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}

fn finite(d: FiltDegree) -> Result<i64, CaseFailure> {
    d.finite()
        .ok_or_else(|| CaseFailure("expected a finite degree".into()))
}

pub fn all_suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "ring_axioms",
            area: "exact",
            cases: 500,
            run: ring_axioms,
        },
        Suite {
            name: "substitution_multiplicative",
            area: "exact",
            cases: 200,
            run: substitution_multiplicative,
        },
        Suite {
            name: "jet_matches_poly",
            area: "exact",
            cases: 200,
            run: jet_matches_poly,
        },
        Suite {
            name: "degree_multiplicative",
            area: "weighting",
            cases: 300,
            run: degree_multiplicative,
        },
        Suite {
            name: "homogeneous_decomposition",
            area: "weighting",
            cases: 200,
            run: homogeneous_decomposition,
        },
        Suite {
            name: "zoom_limits",
            area: "weighting",
            cases: 200,
            run: zoom_limits,
        },
        Suite {
            name: "path_order",
            area: "weighting",
            cases: 200,
            run: path_order_bound,
        },
        Suite {
            name: "morphism_pullback",
            area: "weighting",
            cases: 200,
            run: morphism_pullback,
        },
        Suite {
            name: "pairing_additivity",
            area: "bundle",
            cases: 200,
            run: pairing_additivity,
        },
        Suite {
            name: "pairing_characterization",
            area: "bundle",
            cases: 200,
            run: pairing_characterization,
        },
        Suite {
            name: "induced_weights",
            area: "bundle",
            cases: 200,
            run: induced_weights,
        },
        Suite {
            name: "approx_module_action",
            area: "bundle",
            cases: 200,
            run: approx_module_action,
        },
        Suite {
            name: "compose_graded",
            area: "bundle",
            cases: 200,
            run: compose_graded,
        },
        Suite {
            name: "shift_invariance",
            area: "bundle",
            cases: 100,
            run: shift_invariance,
        },
        Suite {
            name: "section_interpolation",
            area: "bundle",
            cases: 200,
            run: section_interpolation,
        },
        Suite {
            name: "normal_model_rank",
            area: "bundle",
            cases: 100,
            run: normal_model_rank,
        },
        Suite {
            name: "composition_order",
            area: "diffop",
            cases: 200,
            run: composition_order,
        },
        Suite {
            name: "linearization_relation",
            area: "diffop",
            cases: 200,
            run: linearization_relation,
        },
        Suite {
            name: "operator_intertwining",
            area: "diffop",
            cases: 100,
            run: operator_intertwining,
        },
        Suite {
            name: "recover_scalar",
            area: "diffop",
            cases: scalar_recovery_cases().len(),
            run: recover_scalar,
        },
        Suite {
            name: "recover_section",
            area: "diffop",
            cases: 36,
            run: recover_section,
        },
        Suite {
            name: "gr_is_exterior",
            area: "clifford",
            cases: 1364,
            run: gr_is_exterior,
        },
        Suite {
            name: "cl_degree_subadditive",
            area: "clifford",
            cases: 300,
            run: cl_degree_subadditive,
        },
        Suite {
            name: "rotor_conjugation",
            area: "clifford",
            cases: 100,
            run: rotor_conjugation,
        },
        Suite {
            name: "severa_action",
            area: "clifford",
            cases: 100,
            run: severa_action,
        },
        Suite {
            name: "getzler_embedding",
            area: "clifford",
            cases: 100,
            run: getzler_embedding,
        },
        Suite {
            name: "pair_path",
            area: "clifford",
            cases: 50,
            run: pair_path,
        },
    ]
}

// exact

#[allow(clippy::eq_op)]
fn ring_axioms(_: usize, g: &mut Gen) -> CaseResult {
    let n = g.usize(1, 4);
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let v: Arc<[String]> = names.into();
    let (a, b, c) = (g.poly(&v, 4, 3), g.poly(&v, 4, 3), g.poly(&v, 4, 3));
    ensure!(&(&a + &b) + &c == &a + &(&b + &c), "addition not associative");
    ensure!(&(&a * &b) * &c == &a * &(&b * &c), "product not associative");
    ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "not distributive");
    ensure!(&a * &b == &b * &a, "product not commutative");
    ensure!(&a - &a == Poly::zero_in(v.clone()), "a - a is not zero");
    ensure!(&a * &Poly::one(&v) == a, "one is not a unit");
    Ok(())
}

fn substitution_multiplicative(_: usize, g: &mut Gen) -> CaseResult {
    let src = vars(&["x1", "x2", "x3"]);
    let dst = vars(&["y1", "y2"]);
    let f = g.poly(&src, 4, 3);
    let h = g.poly(&src, 4, 3);
    let assign: HashMap<String, Poly> = src.iter().map(|x| (x.clone(), g.poly(&dst, 3, 2))).collect();
    let sub = |p: &Poly| p.substitute_polys(&assign);
    ensure!(
        sub(&(&f * &h))? == &sub(&f)? * &sub(&h)?,
        "substitution not multiplicative"
    );
    ensure!(
        sub(&(&f + &h))? == &sub(&f)? + &sub(&h)?,
        "substitution not additive"
    );
    Ok(())
}

fn jet_matches_poly(_: usize, g: &mut Gen) -> CaseResult {
    let tv = vars(&["t"]);
    let a = g.poly(&tv, 5, 6);
    let b = g.poly(&tv, 5, 6);
    let n = g.usize(0, 8);
    let to_jet = |p: &Poly| Jet::from_terms(&int(0), n, p.terms().map(|(e, c)| (e[0] as usize, c.clone())));
    let prod = to_jet(&a).mul(&to_jet(&b));
    ensure!(
        prod == to_jet(&(&a * &b)),
        "jet product differs from truncated product"
    );
    ensure!(
        to_jet(&a).add(&to_jet(&b)) == to_jet(&(&a + &b)),
        "jet sum differs"
    );
    Ok(())
}

// weighting

fn degree_multiplicative(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(4);
    let f = g.nonzero_poly(c.coords(), 4, 3);
    let h = g.nonzero_poly(c.coords(), 4, 3);
    let (df, dh) = (c.filtration_degree(&f)?, c.filtration_degree(&h)?);
    let dp = c.filtration_degree(&(&f * &h))?;
    ensure!(dp >= df + dh, "deg(fg) = {dp} < {df} + {dh}");
    ensure!(dp == df + dh, "deg(fg) = {dp} != {df} + {dh}");
    ensure!(
        c.filtration_degree(&(&f + &h))? >= df.min(dh),
        "sum below minimum"
    );
    Ok(())
}

fn homogeneous_decomposition(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(4);
    let f = g.poly(c.coords(), 5, 3);
    let parts = c.grading().homogeneous_parts(&f)?;
    let sum = parts.values().fold(c.zero(), |acc, p| &acc + p);
    ensure!(sum == f, "parts do not sum to f");
    for (i, p) in &parts {
        ensure!(c.grading().is_homogeneous(p, *i)?, "part {i} not homogeneous");
    }
    ensure!(
        parts
            .keys()
            .next()
            .copied()
            .map_or(FiltDegree::Infinite, FiltDegree::Finite)
            == c.filtration_degree(&f)?,
        "lowest part is not at the filtration degree"
    );
    Ok(())
}

fn zoom_limits(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(3);
    let f = g.nonzero_poly(c.coords(), 4, 3);
    let d = finite(c.filtration_degree(&f)?)?;
    let z = c.zoom_rescale(&f, d)?;
    ensure!(!z.has_negative_powers(), "negative powers at i = deg f");
    let lead = c.leading_class(&f)?.expect("nonzero");
    ensure!(
        z.at_zero()?.rename(untilde) == *lead.rep(),
        "t = 0 is not the leading part"
    );
    ensure!(z.at_one().rename(untilde) == f, "t = 1 is not f");
    if d > i64::MIN {
        ensure!(
            c.zoom_rescale(&f, d + 1)?.has_negative_powers(),
            "no negative power above deg f"
        );
    }
    Ok(())
}

const PRIMES: [i64; 6] = [1009, 1013, 1019, 1021, 1031, 1033];

fn path_order_bound(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(4);
    let f = g.nonzero_poly(c.coords(), 4, 3);
    let d = finite(c.filtration_degree(&f)?)?;
    let n = d as usize + 2;
    let gamma = g.weighted_path(&c, n);
    ensure!(is_weighted_path(&c, &gamma)?, "generated path is not weighted");
    match path_order(&c, &f, &gamma) {
        Ok(o) => ensure!(o >= FiltDegree::Finite(d), "path order {o} below degree {d}"),
        Err(Error::Undecidable { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    let lambda: Vec<Rational> = PRIMES[..c.dim()].iter().map(|&p| int(p)).collect();
    let w = witness_path(&c, &lambda, n)?;
    ensure!(
        path_order(&c, &f, &w)? == FiltDegree::Finite(d),
        "witness path misses degree {d}"
    );
    Ok(())
}

fn morphism_pullback(_: usize, g: &mut Gen) -> CaseResult {
    let src = g.chart(3);
    let dst_w: Vec<u32> = (0..g.usize(1, 3)).map(|_| g.int(0, 3) as u32).collect();
    let names: Vec<String> = (1..=dst_w.len()).map(|i| format!("y{i}")).collect();
    let dst = WeightedChart::new(&names, &dst_w)?;
    let filter = g.coin();
    let phi: Vec<Poly> = dst_w
        .iter()
        .map(|&w| {
            let p = g.poly(src.coords(), 4, 3);
            if filter {
                let ws = src.weights();
                p.filter_terms(|e| e.iter().zip(&ws).map(|(&a, &b)| a * b).sum::<u32>() >= w)
            } else {
                p
            }
        })
        .collect();
    let weighted = is_weighted_morphism(&src, &dst, &phi)?;
    if filter {
        ensure!(weighted, "degree-filtered map rejected");
    }
    if !weighted {
        return Ok(());
    }
    let f = g.poly(dst.coords(), 4, 3);
    let back = pullback_function(&src, &dst, &phi, &f)?;
    ensure!(
        src.filtration_degree(&back)? >= dst.filtration_degree(&f)?,
        "pullback lowers degree"
    );
    let gamma = g.weighted_path(&src, 6);
    let pushed = push_path(&src, &phi, &gamma)?;
    ensure!(is_weighted_path(&dst, &pushed)?, "image path is not weighted");
    Ok(())
}

// bundle

fn pairing_additivity(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(3);
    let b = g.bundle(&c, 3);
    let d = b.dual();
    let s = g.section(&b);
    let t = g.section(&d);
    let p = pairing(&t, &s)?;
    ensure!(
        c.filtration_degree(&p)? >= t.degree() + s.degree(),
        "pairing below deg τ + deg σ"
    );
    for a in 0..b.rank() {
        let (ta, sa) = (Section::frame(&d, a), Section::frame(&b, a));
        ensure!(
            pairing(&ta, &sa)? == c.constant(int(1)),
            "dual frame does not pair to 1"
        );
        ensure!(
            ta.degree() + sa.degree() == FiltDegree::Finite(0),
            "frame degrees do not cancel"
        );
    }
    Ok(())
}

fn pairing_characterization(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 3);
    let d = b.dual();
    let s = g.section(&b);
    // Generators x^α τ_a with |α| ≤ 1.
    let mut gens: Vec<Section> = Vec::new();
    for a in 0..b.rank() {
        gens.push(Section::frame(&d, a));
        for x in c.coords().iter() {
            gens.push(Section::frame(&d, a).mul_function(&c.coord(x)?)?);
        }
    }
    let holds = |i: i64| -> Result<bool, CaseFailure> {
        for t in &gens {
            let j = finite(t.degree())?;
            if !c.filtration_degree(&pairing(t, &s)?)?.at_least(i + j) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut best = None;
    for i in -30..=30 {
        if holds(i)? {
            best = Some(i);
        } else {
            break;
        }
    }
    let expect = match s.degree() {
        FiltDegree::Infinite => Some(30),
        FiltDegree::Finite(k) => Some(k),
    };
    ensure!(
        best == expect,
        "pairing test gives {best:?}, section degree {}",
        s.degree()
    );
    Ok(())
}

fn induced_weights(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 3);
    let e = g.bundle(&c, 2);
    let n = g.usize(0, 3);
    for bundle in [b.tensor(&e)?, b.hom(&e)?, b.sym(n), b.wedge(n), b.dual()] {
        let ranks: Vec<usize> = bundle.fiber_filtration_ranks().into_values().collect();
        ensure!(ranks.windows(2).all(|w| w[0] >= w[1]), "ranks not decreasing");
        for a in 0..bundle.rank() {
            let v = bundle.vweights()[a];
            ensure!(
                Section::frame(&bundle, a).degree() == FiltDegree::Finite(v),
                "frame degree"
            );
        }
    }
    let s = g.nonzero_section(&b);
    let t = g.nonzero_section(&e);
    let te = b.tensor(&e)?;
    let comps: Vec<Poly> = s
        .components()
        .iter()
        .flat_map(|f| t.components().iter().map(move |h| f * h))
        .collect();
    let st = Section::new(&te, comps)?;
    ensure!(
        st.degree() == s.degree() + t.degree(),
        "σ⊗τ has degree {} not {} + {}",
        st.degree(),
        s.degree(),
        t.degree()
    );
    Ok(())
}

fn approx_module_action(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(3);
    let b = g.bundle(&c, 3);
    let s = g.nonzero_section(&b);
    let f = g.nonzero_poly(c.coords(), 3, 2);
    let i = finite(s.degree())? - g.int(0, 1);
    let k = finite(c.filtration_degree(&f)?)? - g.int(0, 1);
    let left = s.mul_function(&f)?.homogeneous_approx(i + k)?;
    let right = s.homogeneous_approx(i)?.act(&c.class_at(&f, k)?);
    ensure!(left == right, "(gσ)^[i+k] = {left} but g^[k]σ^[i] = {right}");
    Ok(())
}

fn compose_graded(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 2);
    let s = g.nonzero_section(&b);
    let n = g.usize(1, 2) as u32;
    let tv = b.total_vars();
    let m = c.dim();
    let mut poly = Poly::zero_in(tv.clone());
    for _ in 0..g.usize(1, 3) {
        let mut e: Vec<u32> = (0..m).map(|_| g.int(0, 2) as u32).collect();
        let mut ys = vec![0u32; b.rank()];
        for _ in 0..n {
            let a = g.usize(0, b.rank() - 1);
            ys[a] += 1;
        }
        e.extend(ys);
        poly = &poly + &Poly::monomial_in(tv.clone(), e, int(g.nonzero_int(5)));
    }
    let fp = FiberPoly::new(&b, &poly)?;
    let Some(df) = fp.degree().finite() else {
        return Ok(());
    };
    let j = df - g.int(0, 1);
    let i = finite(s.degree())? - g.int(0, 1);
    let left = c.class_at(&fp.compose(&s)?, j + n as i64 * i)?;
    let right = fp.compose_graded(j, &s.homogeneous_approx(i)?)?;
    ensure!(left == right, "(F∘σ)^[j+ni] = {left} but F^[j]∘σ^[i] = {right}");
    Ok(())
}

fn shift_invariance(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 3);
    let k = g.int(-3, 3);
    let sb = b.shift(k);
    let s = g.nonzero_section(&b);
    let t = Section::new(&sb, s.components().to_vec())?;
    let i = finite(s.degree())?;
    ensure!(t.degree() == FiltDegree::Finite(i - k), "shifted degree");
    ensure!(
        s.homogeneous_approx(i)?.components() == t.homogeneous_approx(i - k)?.components(),
        "approximations differ under shift"
    );
    ensure!(
        s.interpolate(i)?.components() == t.interpolate(i - k)?.components(),
        "families differ under shift"
    );
    let lambda = g.scale_factor();
    ensure!(t.zoom_equivariance_check(i - k, &lambda)?, "shifted zoom fails");
    if k != 0 {
        ensure!(
            !t.zoom_equivariance_with_exponent(i - k, &lambda, -i)?,
            "zoom factor insensitive to the shift"
        );
    }
    Ok(())
}

fn section_interpolation(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(3);
    let b = g.bundle(&c, 3);
    let s = g.nonzero_section(&b);
    let i = finite(s.degree())? - g.int(0, 2);
    let fam = s.interpolate(i)?;
    ensure!(
        fam.slice(&int(0))? == s.homogeneous_approx(i)?.components(),
        "t = 0 slice"
    );
    ensure!(fam.slice(&int(1))? == s.components(), "t = 1 slice");
    let lambda = g.scale_factor();
    ensure!(s.zoom_equivariance_check(i, &lambda)?, "zoom equivariance fails");
    ensure!(
        !s.zoom_equivariance_with_exponent(i, &lambda, -i + 1)?,
        "wrong exponent accepted"
    );
    ensure!(
        matches!(
            s.interpolate(finite(s.degree())? + 1),
            Err(Error::NegativePower { .. })
        ),
        "no negative power above the degree"
    );
    Ok(())
}

fn normal_model_rank(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 5);
    let lo = *b.vweights().iter().min().unwrap();
    let hi = *b.vweights().iter().max().unwrap();
    let total: usize = (lo..=hi).map(|i| b.graded_rank(i)).sum();
    ensure!(total == b.rank(), "graded ranks sum to {total}");
    let frames = b.normal_model_frame();
    for i in lo..=hi {
        let n = frames.iter().filter(|f| f.degree() == i).count();
        ensure!(n == b.graded_rank(i), "frame classes at level {i}");
    }
    let d = b.dual();
    for i in lo - 2..=hi + 2 {
        ensure!(
            d.rank_at(i) == b.rank() - b.rank_at(-i + 1),
            "annihilator rank at {i}"
        );
    }
    Ok(())
}

// diffop

fn composition_order(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 2);
    let d = g.diffop(&b, 3);
    let e = g.diffop(&b, 3);
    let de = d.compose(&e)?;
    ensure!(
        de.order() >= d.order() + e.order(),
        "composition order below the sum"
    );
    // Single monomial terms compose with exactly additive order.
    let m = c.dim();
    let mono = |g: &mut Gen| -> Vec<u32> { (0..m).map(|_| g.int(0, 2) as u32).collect() };
    let (a, x, y) = (
        g.usize(0, b.rank() - 1),
        g.usize(0, b.rank() - 1),
        g.usize(0, b.rank() - 1),
    );
    let p = Poly::monomial_in(c.coords().clone(), mono(g), int(g.nonzero_int(3)));
    let q = Poly::monomial_in(c.coords().clone(), mono(g), int(g.nonzero_int(3)));
    let d1 = DiffOp::from_terms(&b, [(a, x, mono(g), p)])?;
    let e1 = DiffOp::from_terms(&b, [(x, y, mono(g), q)])?;
    ensure!(
        d1.compose(&e1)?.order() == d1.order() + e1.order(),
        "monomial composition order not additive"
    );
    Ok(())
}

fn linearization_relation(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 2);
    let d = g.diffop(&b, 3);
    if d.is_zero() {
        return Ok(());
    }
    let s = g.nonzero_section(&b);
    let q = finite(d.order())? - g.int(0, 1);
    let i = finite(s.degree())? - g.int(0, 1);
    let left = d.apply_graded(q, &s.homogeneous_approx(i)?)?;
    let right = d.apply(&s)?.homogeneous_approx(i + q)?;
    ensure!(left == right, "D^[q]σ^[i] = {left} but (Dσ)^[i+q] = {right}");
    let lin = d.linearize(q)?;
    ensure!(lin.linearize(q)? == lin, "linearization not idempotent");
    Ok(())
}

fn operator_intertwining(_: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart(2);
    let b = g.bundle(&c, 2);
    let d = g.diffop(&b, 3);
    if d.is_zero() {
        return Ok(());
    }
    let s = g.nonzero_section(&b);
    let q = finite(d.order())?;
    let i = finite(s.degree())? - g.int(0, 1);
    let fam = d.interpolate(q)?;
    let left = fam.apply(&s.interpolate(i)?)?;
    let right = d.apply(&s)?.interpolate(i + q)?;
    ensure!(left == right, "D̃σ̃ = {left} but (Dσ)~ = {right}");
    ensure!(
        fam.slice(&int(0))? == d.linearize(q)?,
        "t = 0 slice is not the linearization"
    );
    ensure!(fam.slice(&int(1))? == d, "t = 1 slice is not D");
    Ok(())
}

fn scalar_recovery_cases() -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for ws in [vec![1], vec![1, 2], vec![2, 3, 1]] {
        let m = ws.len();
        let mut e = vec![0u32; m];
        loop {
            if e.iter().sum::<u32>() <= 6 {
                out.push((ws.clone(), e.clone()));
            }
            let mut j = 0;
            while j < m {
                e[j] += 1;
                if e[j] <= 6 {
                    break;
                }
                e[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
    }
    out
}

fn recover_scalar(n: usize, g: &mut Gen) -> CaseResult {
    let (ws, e) = &scalar_recovery_cases()[n];
    let c = g.chart_with(ws);
    let f = Poly::monomial_in(c.coords().clone(), e.clone(), int(1));
    let d = c.filtration_degree(&f)?;
    for i in -2..=20 {
        ensure!(
            recover_scalar_weighting(&c, &f, i)? == d.at_least(i),
            "recovery disagrees with degree {d} at level {i}"
        );
    }
    ensure!(
        recover_scalar_weighting(&c, &c.zero(), 20)?,
        "zero not in every level"
    );
    Ok(())
}

fn recover_section(n: usize, g: &mut Gen) -> CaseResult {
    let c = g.chart_with(&[1]);
    let b = WeightedBundle::new(&c, &["s1", "s2"], &[0, -2])?;
    // Components x^a or 0, a in 0..=4, for both slots: 6 × 6 sections.
    let comp = |k: usize| -> Poly {
        if k == 5 {
            c.zero()
        } else {
            Poly::monomial_in(c.coords().clone(), vec![k as u32], int(1))
        }
    };
    let s = Section::new(&b, vec![comp(n % 6), comp(n / 6)])?;
    for i in -4..=4 {
        ensure!(
            recover_section_weighting(&s, i) == s.degree().at_least(i),
            "recovery disagrees with degree {} at level {i}",
            s.degree()
        );
    }
    Ok(())
}

// clifford

fn gr_is_exterior(n: usize, _: &mut Gen) -> CaseResult {
    let mut n = n;
    let mut k = 1;
    while n >= 1 << (2 * k) {
        n -= 1 << (2 * k);
        k += 1;
    }
    let (i, j) = ((n >> k) as u32, (n & ((1 << k) - 1)) as u32);
    let one = int(1);
    let prod = CliffordElt::blade(k, i, one.clone()).mul(&CliffordElt::blade(k, j, one.clone()));
    let sym = prod.gr_symbol(i.count_ones() + j.count_ones());
    let wedge = ExteriorElt::from_terms(k, [(i, one.clone())]).wedge(&ExteriorElt::from_terms(k, [(j, one)]));
    ensure!(
        sym == wedge,
        "gr(e_I e_J) = {sym} but e_I ∧ e_J = {wedge} (k = {k})"
    );
    Ok(())
}

fn cl_degree_subadditive(_: usize, g: &mut Gen) -> CaseResult {
    let a = g.clifford(4, 4);
    let b = g.clifford(4, 4);
    let p = a.mul(&b);
    ensure!(
        p.degree() >= a.degree() + b.degree(),
        "deg(ab) below deg a + deg b"
    );
    if let (Some(la), Some(lb)) = (a.max_word_length(), b.max_word_length()) {
        let supp = |x: &CliffordElt, l| x.grade_part(l).terms().keys().fold(0u32, |acc, m| acc | m);
        if supp(&a, la) & supp(&b, lb) == 0 {
            ensure!(
                p.degree() == a.degree() + b.degree(),
                "disjoint tops but degree drops"
            );
        }
    }
    Ok(())
}

fn rotor_conjugation(_: usize, g: &mut Gen) -> CaseResult {
    let k = g.usize(2, 4);
    let r = g.rotor(k);
    ensure!(
        r.elt().mul(&r.elt().reverse()) == CliffordElt::one(k),
        "rotor is not a unit"
    );
    let a = g.clifford(k, 4);
    ensure!(
        r.conjugate(&a).degree() == a.degree(),
        "conjugation changes the degree"
    );
    Ok(())
}

fn severa_action(n: usize, g: &mut Gen) -> CaseResult {
    let k = 3 + n % 2;
    let nt = 8;
    let r = g.rotor(k);
    let xi = g.bivector(k);
    let xi1 = g.small_bivector_jet(k, nt);
    let xi2 = g.small_bivector_jet(k, nt);
    let c = g.weighted_cl_jet(k, nt);
    ensure!(
        severa_action_check(&r, &xi, &xi1, &xi2, &c, nt)?,
        "action leaves weighted paths"
    );
    let direct = exp_bivector_jet(&xi, nt)?;
    let series = Jet::monomial(xi.clone(), 1, nt).exp_nilpotent()?;
    ensure!(direct == series, "exponential routes disagree");
    Ok(())
}

fn getzler_embedding(_: usize, g: &mut Gen) -> CaseResult {
    let k = g.usize(1, 3);
    let c = g.chart_with(&[1, 1]);
    let d = g.getzler(&c, k);
    let q = d.order(&c)?;
    let dd = d.to_diffop(&c)?;
    ensure!(dd.order() == q, "embedded order {} differs from {q}", dd.order());
    if let FiltDegree::Finite(q) = q {
        let lin = dd.linearize(q)?;
        let sym = d.symbol(&c, q)?.to_diffop(&c)?;
        ensure!(lin == sym, "embedded linearization differs from the symbol");
    }
    Ok(())
}

fn pair_path(_: usize, g: &mut Gen) -> CaseResult {
    let k = g.usize(2, 4);
    let nt = 6;
    let r = Jet::constant(g.rotor(k).elt().clone(), nt);
    let xi = g.bivector(k);
    let g1 = r.mul(&exp_bivector_jet(&xi, nt)?);
    let g2 = g1.mul(&g.small_bivector_jet(k, nt).exp_nilpotent()?);
    ensure!(pair_path_check(&g1, &g2)?, "O(t²) perturbation rejected");
    if !xi.is_zero() {
        let g3 = r.mul(&exp_bivector_jet(&xi.scale(&int(2)), nt)?);
        ensure!(!pair_path_check(&g1, &g3)?, "first-order discrepancy accepted");
    }
    Ok(())
}

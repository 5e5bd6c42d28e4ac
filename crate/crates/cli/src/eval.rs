use std::collections::HashMap;
use std::sync::Arc;

use gradedgeom_core::bundle::{FiberPoly, Section, WeightedBundle};
use gradedgeom_core::clifford::{
    cl_degree, cl_mul, exp_bivector_jet, gr_symbol, is_weighted_cl_jet, pair_path_check,
    rotor_from_pythagorean, severa_action_check, ClJet, CliffordElt, GetzlerOp, Rotor,
};
use gradedgeom_core::diffop::{recover_scalar_weighting, recover_section_weighting, DiffOp};
use gradedgeom_core::weighting::{
    gr_mul, is_weighted_morphism, is_weighted_path, path_order, pullback_function, WeightedChart,
};
use gradedgeom_core::{Error, Jet, Poly, Rational};
use num_traits::Zero;

use crate::ast::{Arg, BinOp, Command, Expr, Item, SExpr, Spanned};
use crate::diag::{Diagnostic, Span};
use crate::dispatch::lookup;
use crate::value::Value;

type EResult<T> = Result<T, Diagnostic>;

const MAX_CL_DIM: i64 = 10;

/// Declared charts, bundles and Clifford dimension, built up as the
/// script runs.
#[derive(Debug, Clone)]
pub struct Env {
    charts: HashMap<String, WeightedChart>,
    bundles: HashMap<String, WeightedBundle>,
    cl: Option<usize>,
    truncation: usize,
}

enum Target<'a> {
    Chart(&'a WeightedChart),
    Bundle(&'a WeightedBundle),
}

/// Names an expression may use.
struct Scope {
    vars: Arc<[String]>,
    dvars: Vec<String>,
    cl: Option<usize>,
}

fn at(span: Span) -> impl Fn(Error) -> Diagnostic {
    move |e| Diagnostic::error(span, e.to_string())
}

fn names(list: &[String]) -> Arc<[String]> {
    list.to_vec().into()
}

impl Env {
    pub fn new(truncation: usize) -> Env {
        Env {
            charts: HashMap::new(),
            bundles: HashMap::new(),
            cl: None,
            truncation,
        }
    }

    /// Applies a declaration, or evaluates a command.
    pub fn item(&mut self, item: &Item) -> EResult<Option<Value>> {
        match item {
            Item::Chart { name, coords } => {
                self.fresh(name)?;
                let mut ns = Vec::new();
                let mut ws = Vec::new();
                for (n, w) in coords {
                    if w.node < 0 {
                        return Err(Diagnostic::error(w.span, "coordinate weights are nonnegative"));
                    }
                    ns.push(n.node.clone());
                    ws.push(w.node as u32);
                }
                let c = WeightedChart::new(&ns, &ws).map_err(at(name.span))?;
                self.charts.insert(name.node.clone(), c);
                Ok(None)
            }
            Item::Bundle { name, base, frame } => {
                self.fresh(name)?;
                let chart = self.chart(base)?;
                let ns: Vec<&str> = frame.iter().map(|(n, _)| n.node.as_str()).collect();
                let ws: Vec<i64> = frame.iter().map(|(_, w)| w.node).collect();
                let b = WeightedBundle::new(chart, &ns, &ws).map_err(at(name.span))?;
                self.bundles.insert(name.node.clone(), b);
                Ok(None)
            }
            Item::Cl(k) => {
                if !(0..=MAX_CL_DIM).contains(&k.node) {
                    return Err(Diagnostic::error(
                        k.span,
                        format!("Clifford dimension must lie in 0..={MAX_CL_DIM}"),
                    ));
                }
                self.cl = Some(k.node as usize);
                Ok(None)
            }
            Item::Command(c) => self.command(c).map(Some),
        }
    }

    fn fresh(&self, name: &Spanned<String>) -> EResult<()> {
        if self.charts.contains_key(&name.node) || self.bundles.contains_key(&name.node) {
            return Err(Diagnostic::error(
                name.span,
                format!("`{}` is already declared", name.node),
            ));
        }
        Ok(())
    }

    fn chart(&self, name: &Spanned<String>) -> EResult<&WeightedChart> {
        self.charts
            .get(&name.node)
            .ok_or_else(|| Diagnostic::error(name.span, format!("no chart named `{}`", name.node)))
    }

    fn bundle(&self, name: &Spanned<String>) -> EResult<&WeightedBundle> {
        self.bundles
            .get(&name.node)
            .ok_or_else(|| Diagnostic::error(name.span, format!("no bundle named `{}`", name.node)))
    }

    fn target(&self, name: &Spanned<String>) -> EResult<Target<'_>> {
        if let Some(c) = self.charts.get(&name.node) {
            return Ok(Target::Chart(c));
        }
        if let Some(b) = self.bundles.get(&name.node) {
            return Ok(Target::Bundle(b));
        }
        Err(Diagnostic::error(
            name.span,
            format!("no chart or bundle named `{}`", name.node),
        ))
    }

    fn cl_dim(&self, span: Span) -> EResult<usize> {
        self.cl
            .ok_or_else(|| Diagnostic::error(span, "no Clifford dimension declared; add `cl k;`"))
    }

    // Scopes

    fn function_scope(chart: &WeightedChart) -> Scope {
        Scope {
            vars: chart.coords().clone(),
            dvars: Vec::new(),
            cl: None,
        }
    }

    fn operator_scope(chart: &WeightedChart) -> Scope {
        Scope {
            vars: chart.coords().clone(),
            dvars: chart.coords().to_vec(),
            cl: None,
        }
    }

    fn section_scope(b: &WeightedBundle) -> Scope {
        let mut v = b.base().coords().to_vec();
        v.extend(b.frame_names().iter().cloned());
        Scope {
            vars: v.into(),
            dvars: Vec::new(),
            cl: None,
        }
    }

    fn bundle_operator_scope(b: &WeightedBundle) -> Scope {
        let mut v = b.base().coords().to_vec();
        v.extend(b.frame_names().iter().cloned());
        v.extend(b.fiber_coords().iter().cloned());
        Scope {
            vars: v.into(),
            dvars: b.base().coords().to_vec(),
            cl: None,
        }
    }

    fn fiber_scope(b: &WeightedBundle) -> Scope {
        Scope {
            vars: b.total_vars(),
            dvars: Vec::new(),
            cl: None,
        }
    }

    fn jet_scope(&self) -> Scope {
        Scope {
            vars: names(&["t".to_string()]),
            dvars: Vec::new(),
            cl: self.cl,
        }
    }

    // Expressions

    fn eval(&self, e: &SExpr, scope: &Scope) -> EResult<GetzlerOp> {
        let dim = scope.cl.unwrap_or(0);
        let err = at(e.span);
        match &e.node {
            Expr::Num(r) => Ok(GetzlerOp::function(
                dim,
                &Poly::constant_in(scope.vars.clone(), r.clone()),
            )),
            Expr::Var(v) => {
                if scope.vars.contains(v) {
                    let p = Poly::var_in(scope.vars.clone(), v).map_err(err)?;
                    return Ok(GetzlerOp::function(dim, &p));
                }
                if let (Some(k), Some(i)) = (scope.cl, generator_index(v)) {
                    let g = CliffordElt::generator(k, i).map_err(err)?;
                    return Ok(GetzlerOp::clifford(&g));
                }
                Err(Diagnostic::error(e.span, format!("unknown name `{v}` here")))
            }
            Expr::Deriv(v) => {
                if scope.dvars.contains(&v.node) {
                    Ok(GetzlerOp::partial(dim, &v.node))
                } else {
                    Err(Diagnostic::error(
                        v.span,
                        format!("cannot differentiate in `{}` here", v.node),
                    ))
                }
            }
            Expr::Neg(a) => Ok(self.eval(a, scope)?.neg()),
            Expr::Bin(op, a, b) => {
                let x = self.eval(a, scope)?;
                let y = self.eval(b, scope)?;
                match op {
                    BinOp::Add => Ok(x.add(&y)),
                    BinOp::Sub => Ok(x.sub(&y)),
                    BinOp::Mul => Ok(x.compose(&y)),
                    BinOp::Div => {
                        let c = y
                            .as_function()
                            .and_then(|p| p.constant_value())
                            .ok_or_else(|| Diagnostic::error(b.span, "can only divide by a constant"))?;
                        if c.is_zero() {
                            return Err(Diagnostic::error(b.span, "division by zero"));
                        }
                        Ok(x.scale(&c.recip()))
                    }
                }
            }
            Expr::Pow(a, n) => Ok(self.eval(a, scope)?.pow(*n)),
        }
    }

    fn poly(&self, e: &SExpr, scope: &Scope) -> EResult<Poly> {
        let op = self.eval(e, scope)?;
        let p = op
            .as_function()
            .ok_or_else(|| Diagnostic::error(e.span, "expected a function"))?;
        p.reindex(&scope.vars).map_err(at(e.span))
    }

    fn section(&self, e: &SExpr, b: &WeightedBundle) -> EResult<Section> {
        let scope = Env::section_scope(b);
        let p = self.poly(e, &scope)?;
        let coords = b.base().coords().clone();
        let comps = split_linear(&p, coords.len(), b.rank(), &coords).map_err(|m| {
            Diagnostic::error(
                e.span,
                format!("not a section: every term needs exactly one frame element ({m})"),
            )
        })?;
        Section::new(b, comps).map_err(at(e.span))
    }

    fn fiber_poly(&self, e: &SExpr, b: &WeightedBundle) -> EResult<FiberPoly> {
        let p = self.poly(e, &Env::fiber_scope(b))?;
        FiberPoly::new(b, &p).map_err(at(e.span))
    }

    fn operator(&self, e: &SExpr, t: &Target<'_>) -> EResult<DiffOp> {
        let (bundle, scope) = match t {
            Target::Chart(c) => (WeightedBundle::trivial(c), Env::operator_scope(c)),
            Target::Bundle(b) => ((*b).clone(), Env::bundle_operator_scope(b)),
        };
        let op = self.eval(e, &scope)?;
        let coords = bundle.base().coords().clone();
        let m = coords.len();
        let mut terms = Vec::new();
        for ((mask, beta), c) in op.terms() {
            if *mask != 0 {
                return Err(Diagnostic::error(
                    e.span,
                    "Clifford factors need the `getzler` command",
                ));
            }
            let b: Vec<u32> = coords
                .iter()
                .map(|x| op.dvars().iter().position(|d| d == x).map_or(0, |i| beta[i]))
                .collect();
            let c = c.reindex(&scope.vars).map_err(at(e.span))?;
            if let Target::Chart(_) = t {
                terms.push((0, 0, b, c));
                continue;
            }
            let r = bundle.rank();
            for (ex, k) in c.terms() {
                let frame: u32 = ex[m..m + r].iter().sum();
                let fiber: u32 = ex[m + r..].iter().sum();
                if frame != 1 || fiber != 1 {
                    let mono = Poly::monomial_in(c.vars().clone(), ex.clone(), k.clone());
                    let d: String = coords
                        .iter()
                        .zip(&b)
                        .filter(|(_, &n)| n > 0)
                        .map(|(x, &n)| {
                            if n == 1 {
                                format!("*d[{x}]")
                            } else {
                                format!("*d[{x}]^{n}")
                            }
                        })
                        .collect();
                    return Err(Diagnostic::error(
                        e.span,
                        format!("not an operator: every term needs one frame element and one fiber coordinate (offending term {mono}{d})"),
                    ));
                }
            }
            let malformed = |msg: String| Diagnostic::error(e.span, format!("not an operator ({msg})"));
            for (row, entry) in split_linear(&c, m, r, &coords)
                .map_err(malformed)?
                .into_iter()
                .enumerate()
            {
                let inner = split_linear(&entry, m, r, &coords).map_err(malformed)?;
                for (col, q) in inner.into_iter().enumerate() {
                    if !q.is_zero() {
                        terms.push((row, col, b.clone(), q));
                    }
                }
            }
        }
        DiffOp::from_terms(&bundle, terms).map_err(at(e.span))
    }

    fn clifford(&self, e: &SExpr, span: Span) -> EResult<CliffordElt> {
        let scope = Scope {
            vars: names(&[]),
            dvars: Vec::new(),
            cl: Some(self.cl_dim(span)?),
        };
        self.eval(e, &scope)?
            .as_clifford()
            .ok_or_else(|| Diagnostic::error(e.span, "expected a constant Clifford element"))
    }

    fn cl_jet(&self, e: &SExpr) -> EResult<ClJet> {
        let dim = self.cl_dim(e.span)?;
        let op = self.eval(e, &self.jet_scope())?;
        let n = self.truncation;
        if !op.is_multiplication() {
            return Err(Diagnostic::error(e.span, "expected a Clifford-valued jet in t"));
        }
        let mut coeffs = vec![CliffordElt::zero(dim); n + 1];
        let t = names(&["t".to_string()]);
        for ((m, _), c) in op.terms() {
            let c = c.reindex(&t).map_err(at(e.span))?;
            for (ex, r) in c.terms() {
                let k = ex[0] as usize;
                if k <= n {
                    coeffs[k] = coeffs[k].add(&CliffordElt::blade(dim, *m, r.clone()));
                }
            }
        }
        Ok(Jet::new(coeffs))
    }

    fn path(&self, list: &[SExpr]) -> EResult<Vec<Jet<Rational>>> {
        let scope = Scope {
            vars: names(&["t".to_string()]),
            dvars: Vec::new(),
            cl: None,
        };
        let n = self.truncation;
        list.iter()
            .map(|e| {
                let p = self.poly(e, &scope)?;
                Ok(Jet::from_terms(
                    &Rational::zero(),
                    n,
                    p.terms().map(|(ex, c)| (ex[0] as usize, c.clone())),
                ))
            })
            .collect()
    }

    fn polys(&self, list: &[SExpr], scope: &Scope) -> EResult<Vec<Poly>> {
        list.iter().map(|e| self.poly(e, scope)).collect()
    }

    // Commands

    fn command(&self, cmd: &Command) -> EResult<Value> {
        let a = Args { cmd };
        let kw = cmd.keyword.node.as_str();
        let span = cmd.keyword.span;
        match kw {
            "deg" => {
                a.arity(2)?;
                let c = self.chart(&a.name(0)?)?;
                let f = self.poly(a.expr(1)?, &Env::function_scope(c))?;
                Ok(Value::Degree(c.filtration_degree(&f).map_err(at(a.span(1)))?))
            }
            "part" => {
                a.arity(3)?;
                let c = self.chart(&a.name(0)?)?;
                let i = a.int(1)?;
                let f = self.poly(a.expr(2)?, &Env::function_scope(c))?;
                Ok(Value::Poly(c.homogeneous_part(&f, i).map_err(at(a.span(2)))?))
            }
            "lead" => {
                a.arity(2)?;
                let c = self.chart(&a.name(0)?)?;
                let f = self.poly(a.expr(1)?, &Env::function_scope(c))?;
                let lead = c.leading_class(&f).map_err(at(a.span(1)))?;
                Ok(Value::Poly(lead.map_or_else(|| c.zero(), |g| g.rep().clone())))
            }
            "grmul" => {
                a.arity(5)?;
                let c = self.chart(&a.name(0)?)?;
                let s = Env::function_scope(c);
                let f = c
                    .class_at(&self.poly(a.expr(2)?, &s)?, a.int(1)?)
                    .map_err(at(a.span(2)))?;
                let g = c
                    .class_at(&self.poly(a.expr(4)?, &s)?, a.int(3)?)
                    .map_err(at(a.span(4)))?;
                Ok(Value::Poly(gr_mul(&f, &g).rep().clone()))
            }
            "rees" | "eval" | "fiber0" => {
                a.arity(if kw == "eval" { 4 } else { 3 })?;
                let c = self.chart(&a.name(0)?)?;
                let f = self.poly(a.expr(2)?, &Env::function_scope(c))?;
                let e = c.rees_make(&f, a.int(1)?).map_err(at(a.span(2)))?;
                match kw {
                    "rees" => Ok(Value::Rees(e)),
                    "eval" => Ok(Value::Poly(e.eval(&a.rat(3)?).map_err(at(a.span(3)))?)),
                    _ => Ok(Value::Classes(e.fiber0().map_err(at(a.span(2)))?)),
                }
            }
            "interp" => {
                a.arity(3)?;
                let c = self.chart(&a.name(0)?)?;
                let f = self.poly(a.expr(2)?, &Env::function_scope(c))?;
                Ok(Value::Laurent(
                    c.zoom_rescale(&f, a.int(1)?).map_err(at(a.span(2)))?,
                ))
            }
            "zoom" => {
                a.arity(4)?;
                let i = a.int(1)?;
                let lambda = a.rat(3)?;
                let sigma = match self.target(&a.name(0)?)? {
                    Target::Chart(c) => {
                        let f = self.poly(a.expr(2)?, &Env::function_scope(c))?;
                        Section::new(&WeightedBundle::trivial(c), vec![f]).map_err(at(a.span(2)))?
                    }
                    Target::Bundle(b) => self.section(a.expr(2)?, b)?,
                };
                let ok = sigma.zoom_equivariance_check(i, &lambda).map_err(at(a.span(3)))?;
                Ok(Value::Bool(ok))
            }
            "morph" => {
                a.arity(3)?;
                let src = self.chart(&a.name(0)?)?;
                let dst = self.chart(&a.name(1)?)?;
                let phi = self.polys(a.list(2)?, &Env::function_scope(src))?;
                let ok = is_weighted_morphism(src, dst, &phi).map_err(at(a.span(2)))?;
                Ok(Value::Bool(ok))
            }
            "pullback" => match self.target(&a.name(0)?)? {
                Target::Chart(src) => {
                    a.arity(4)?;
                    let dst = self.chart(&a.name(1)?)?;
                    let phi = self.polys(a.list(2)?, &Env::function_scope(src))?;
                    let f = self.poly(a.expr(3)?, &Env::function_scope(dst))?;
                    let g = pullback_function(src, dst, &phi, &f).map_err(at(a.span(2)))?;
                    Ok(Value::Poly(g))
                }
                Target::Bundle(b) => {
                    a.arity(3)?;
                    let src = self.chart(&a.name(1)?)?;
                    let phi = self.polys(a.list(2)?, &Env::function_scope(src))?;
                    Ok(weights(&b.pullback(src, &phi).map_err(at(a.span(2)))?))
                }
            },
            "pathorder" => {
                a.arity(3)?;
                let c = self.chart(&a.name(0)?)?;
                let f = self.poly(a.expr(1)?, &Env::function_scope(c))?;
                let gamma = self.path(a.list(2)?)?;
                Ok(Value::Degree(path_order(c, &f, &gamma).map_err(at(a.span(2)))?))
            }
            "pathcheck" => {
                a.arity(2)?;
                if let Arg::Name(_) = a.get(0)?.node {
                    let c = self.chart(&a.name(0)?)?;
                    let gamma = self.path(a.list(1)?)?;
                    return Ok(Value::Bool(is_weighted_path(c, &gamma).map_err(at(a.span(1)))?));
                }
                let g1 = self.cl_jet(a.expr(0)?)?;
                let g2 = self.cl_jet(a.expr(1)?)?;
                Ok(Value::Bool(pair_path_check(&g1, &g2).map_err(at(span))?))
            }
            "ranks" => {
                a.arity(1)?;
                Ok(Value::Ranks(self.bundle(&a.name(0)?)?.fiber_filtration_ranks()))
            }
            "dual" => {
                a.arity(1)?;
                Ok(weights(&self.bundle(&a.name(0)?)?.dual()))
            }
            "tensor" | "hom" => {
                a.arity(2)?;
                let b = self.bundle(&a.name(0)?)?;
                let c = self.bundle(&a.name(1)?)?;
                let r = if kw == "tensor" { b.tensor(c) } else { b.hom(c) };
                Ok(weights(&r.map_err(at(a.span(1)))?))
            }
            "sym" | "wedge" | "shift" => {
                a.arity(2)?;
                let b = self.bundle(&a.name(0)?)?;
                let n = a.int(1)?;
                if kw == "shift" {
                    return Ok(weights(&b.shift(n)));
                }
                let n = usize::try_from(n)
                    .map_err(|_| Diagnostic::error(a.span(1), "power must be nonnegative"))?;
                Ok(weights(&if kw == "sym" { b.sym(n) } else { b.wedge(n) }))
            }
            "restrict" => {
                a.arity(3)?;
                let b = self.bundle(&a.name(0)?)?;
                let xs = a.names_in(1)?;
                let ys = a.names_in(2)?;
                Ok(weights(
                    &b.restrict_to_subbundle(&xs, &ys).map_err(at(a.span(0)))?,
                ))
            }
            "fibdeg" => {
                a.arity(2)?;
                let b = self.bundle(&a.name(0)?)?;
                Ok(Value::Degree(self.fiber_poly(a.expr(1)?, b)?.degree()))
            }
            "secdeg" => {
                a.arity(2)?;
                let b = self.bundle(&a.name(0)?)?;
                Ok(Value::Degree(self.section(a.expr(1)?, b)?.degree()))
            }
            "approx" => {
                a.arity(3)?;
                let b = self.bundle(&a.name(0)?)?;
                let s = self.section(a.expr(2)?, b)?;
                let g = s.homogeneous_approx(a.int(1)?).map_err(at(a.span(2)))?;
                Ok(Value::Section {
                    frame: b.frame_names().to_vec(),
                    graded: g,
                })
            }
            "compose" => {
                a.arity(3)?;
                let b = self.bundle(&a.name(0)?)?;
                let f = self.fiber_poly(a.expr(1)?, b)?;
                let s = self.section(a.expr(2)?, b)?;
                Ok(Value::Poly(f.compose(&s).map_err(at(a.span(2)))?))
            }
            "secinterp" => {
                a.arity(3)?;
                let b = self.bundle(&a.name(0)?)?;
                let s = self.section(a.expr(2)?, b)?;
                let fam = s.interpolate(a.int(1)?).map_err(at(a.span(2)))?;
                Ok(Value::SectionFamily {
                    frame: b.frame_names().to_vec(),
                    family: fam,
                })
            }
            "order" => {
                a.arity(2)?;
                let t = self.target(&a.name(0)?)?;
                Ok(Value::Degree(self.operator(a.expr(1)?, &t)?.order()))
            }
            "linearize" | "opinterp" => {
                a.arity(3)?;
                let t = self.target(&a.name(0)?)?;
                let q = a.int(1)?;
                let d = self.operator(a.expr(2)?, &t)?;
                if kw == "linearize" {
                    Ok(Value::Operator(d.linearize(q).map_err(at(a.span(2)))?))
                } else {
                    Ok(Value::OperatorFamily(d.interpolate(q).map_err(at(a.span(2)))?))
                }
            }
            "recover" => {
                a.arity(3)?;
                let i = a.int(1)?;
                match self.target(&a.name(0)?)? {
                    Target::Chart(c) => {
                        let f = self.poly(a.expr(2)?, &Env::function_scope(c))?;
                        let ok = recover_scalar_weighting(c, &f, i).map_err(at(a.span(2)))?;
                        Ok(Value::Bool(ok))
                    }
                    Target::Bundle(b) => {
                        let s = self.section(a.expr(2)?, b)?;
                        Ok(Value::Bool(recover_section_weighting(&s, i)))
                    }
                }
            }
            "clmul" => {
                a.arity(2)?;
                let x = self.clifford(a.expr(0)?, span)?;
                let y = self.clifford(a.expr(1)?, span)?;
                Ok(Value::Clifford(cl_mul(&x, &y).map_err(at(span))?))
            }
            "cldeg" => {
                a.arity(1)?;
                Ok(Value::Degree(cl_degree(&self.clifford(a.expr(0)?, span)?)))
            }
            "grsym" => {
                let (l, e) = match cmd.args.len() {
                    1 => (None, a.expr(0)?),
                    _ => {
                        a.arity(2)?;
                        let l = u32::try_from(a.int(0)?)
                            .map_err(|_| Diagnostic::error(a.span(0), "word length must be nonnegative"))?;
                        (Some(l), a.expr(1)?)
                    }
                };
                let x = self.clifford(e, span)?;
                let l = l.unwrap_or_else(|| x.max_word_length().unwrap_or(0));
                Ok(Value::Exterior(gr_symbol(&x, l)))
            }
            "getzler" | "symbol" => {
                a.arity(if kw == "getzler" { 2 } else { 3 })?;
                let c = self.chart(&a.name(0)?)?;
                let e = a.expr(cmd.args.len() - 1)?;
                let scope = Scope {
                    cl: Some(self.cl_dim(span)?),
                    ..Env::operator_scope(c)
                };
                let d = self.eval(e, &scope)?;
                if kw == "getzler" {
                    Ok(Value::Degree(d.order(c).map_err(at(e.span))?))
                } else {
                    let q = a.int(1)?;
                    Ok(Value::ExteriorOp(d.symbol(c, q).map_err(at(e.span))?))
                }
            }
            "rotor" => {
                a.arity(4)?;
                let dim = self.cl_dim(span)?;
                let plane = (a.index(2)?, a.index(3)?);
                let r = rotor_from_pythagorean(dim, a.rat(0)?, a.rat(1)?, plane).map_err(at(span))?;
                Ok(Value::Clifford(r.elt().clone()))
            }
            "expjet" => {
                a.arity(1)?;
                let xi = self.clifford(a.expr(0)?, span)?;
                let j = exp_bivector_jet(&xi, self.truncation).map_err(at(a.span(0)))?;
                Ok(Value::Jet(j))
            }
            "cljet" => {
                a.arity(1)?;
                let c = self.cl_jet(a.expr(0)?)?;
                Ok(Value::Bool(is_weighted_cl_jet(&c).map_err(at(a.span(0)))?))
            }
            "severa" => {
                a.arity(5)?;
                let g = self.clifford(a.expr(0)?, span)?;
                let g = Rotor::new(g).map_err(at(a.span(0)))?;
                let xi = self.clifford(a.expr(1)?, span)?;
                let xi1 = self.cl_jet(a.expr(2)?)?;
                let xi2 = self.cl_jet(a.expr(3)?)?;
                let c = self.cl_jet(a.expr(4)?)?;
                let ok = severa_action_check(&g, &xi, &xi1, &xi2, &c, self.truncation).map_err(at(span))?;
                Ok(Value::Bool(ok))
            }
            _ => Err(Diagnostic::error(span, format!("unknown command `{kw}`"))),
        }
    }
}

fn weights(b: &WeightedBundle) -> Value {
    Value::Weights {
        frame: b.frame_names().to_vec(),
        weights: b.vweights().to_vec(),
    }
}

/// `e3` → 3.
fn generator_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

/// Splits `p`, whose variables are `m` base coordinates followed by `k`
/// markers (and possibly more variables after), into the coefficients of
/// the markers. Each term must contain exactly one marker, to the first
/// power. The coefficients keep all variables except the markers.
fn split_linear(p: &Poly, m: usize, k: usize, coords: &Arc<[String]>) -> Result<Vec<Poly>, String> {
    let rest: Vec<String> = p.vars()[..m]
        .iter()
        .chain(p.vars()[m + k..].iter())
        .cloned()
        .collect();
    let rest: Arc<[String]> = if rest.len() == m {
        coords.clone()
    } else {
        rest.into()
    };
    let mut out = vec![Poly::zero_in(rest.clone()); k];
    for (e, c) in p.terms() {
        let hits: Vec<usize> = (0..k).filter(|&a| e[m + a] > 0).collect();
        if hits.len() != 1 || e[m + hits[0]] != 1 {
            let mono = Poly::monomial_in(p.vars().clone(), e.clone(), c.clone());
            return Err(format!("offending term {mono}"));
        }
        let mut ne: Vec<u32> = e[..m].to_vec();
        ne.extend_from_slice(&e[m + k..]);
        out[hits[0]] = &out[hits[0]] + &Poly::monomial_in(rest.clone(), ne, c.clone());
    }
    Ok(out)
}

struct Args<'a> {
    cmd: &'a Command,
}

impl Args<'_> {
    fn usage(&self) -> String {
        let kw = &self.cmd.keyword.node;
        lookup(kw).map_or_else(|| kw.clone(), |s| s.usage.to_string())
    }

    fn arity(&self, n: usize) -> EResult<()> {
        if self.cmd.args.len() == n {
            return Ok(());
        }
        Err(Diagnostic::error(
            self.cmd.keyword.span,
            format!(
                "`{}` takes {n} arguments, found {}; usage: {}",
                self.cmd.keyword.node,
                self.cmd.args.len(),
                self.usage()
            ),
        ))
    }

    fn get(&self, i: usize) -> EResult<&Spanned<Arg>> {
        self.cmd.args.get(i).ok_or_else(|| {
            Diagnostic::error(
                self.cmd.keyword.span,
                format!("missing argument {}; usage: {}", i + 1, self.usage()),
            )
        })
    }

    fn span(&self, i: usize) -> Span {
        self.cmd.args.get(i).map_or(self.cmd.keyword.span, |a| a.span)
    }

    fn wrong(&self, i: usize, what: &str) -> Diagnostic {
        Diagnostic::error(
            self.span(i),
            format!("argument {} should be {what}; usage: {}", i + 1, self.usage()),
        )
    }

    fn name(&self, i: usize) -> EResult<Spanned<String>> {
        let a = self.get(i)?;
        match &a.node {
            Arg::Name(n) => Ok(Spanned::new(n.clone(), a.span)),
            _ => Err(self.wrong(i, "a name")),
        }
    }

    fn rat(&self, i: usize) -> EResult<Rational> {
        match &self.get(i)?.node {
            Arg::Num(r) => Ok(r.clone()),
            _ => Err(self.wrong(i, "a number")),
        }
    }

    fn int(&self, i: usize) -> EResult<i64> {
        let r = self.rat(i)?;
        if !r.is_integer() {
            return Err(self.wrong(i, "an integer"));
        }
        i64::try_from(r.to_integer()).map_err(|_| self.wrong(i, "a machine-size integer"))
    }

    fn index(&self, i: usize) -> EResult<usize> {
        let n = self.int(i)?;
        usize::try_from(n)
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| self.wrong(i, "a positive index"))
    }

    fn expr(&self, i: usize) -> EResult<&SExpr> {
        match &self.get(i)?.node {
            Arg::Expr(e) => Ok(e),
            _ => Err(self.wrong(i, "a parenthesized expression")),
        }
    }

    fn list(&self, i: usize) -> EResult<&[SExpr]> {
        match &self.get(i)?.node {
            Arg::List(es) => Ok(es),
            _ => Err(self.wrong(i, "a bracketed list")),
        }
    }

    fn names_in(&self, i: usize) -> EResult<Vec<String>> {
        self.list(i)?
            .iter()
            .map(|e| match &e.node {
                Expr::Var(v) => Ok(v.clone()),
                _ => Err(Diagnostic::error(e.span, "expected a name")),
            })
            .collect()
    }
}

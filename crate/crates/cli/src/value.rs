use std::collections::BTreeMap;
use std::fmt;

use gradedgeom_core::bundle::{GrSection, SectionFamily};
use gradedgeom_core::clifford::{blade_indices, ClJet, CliffordElt, ExteriorElt, ExteriorOp};
use gradedgeom_core::diffop::{DiffOp, OpFamily};
use gradedgeom_core::weighting::{GrClass, ReesElement};
use gradedgeom_core::{FiltDegree, Laurent, Poly, Rational};
use serde_json::{json, Value as Json};

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Degree(FiltDegree),
    Poly(Poly),
    Laurent(Laurent),
    Bool(bool),
    Weights {
        frame: Vec<String>,
        weights: Vec<i64>,
    },
    Ranks(BTreeMap<i64, usize>),
    Section {
        frame: Vec<String>,
        graded: GrSection,
    },
    SectionFamily {
        frame: Vec<String>,
        family: SectionFamily,
    },
    Operator(DiffOp),
    OperatorFamily(OpFamily),
    Rees(ReesElement),
    Classes(Vec<GrClass>),
    Clifford(CliffordElt),
    Exterior(ExteriorElt),
    ExteriorOp(ExteriorOp),
    Jet(ClJet),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Degree(_) => "degree",
            Value::Poly(_) => "poly",
            Value::Laurent(_) => "laurent",
            Value::Bool(_) => "bool",
            Value::Weights { .. } => "weights",
            Value::Ranks(_) => "ranks",
            Value::Section { .. } => "section",
            Value::SectionFamily { .. } => "section_family",
            Value::Operator(_) => "operator",
            Value::OperatorFamily(_) => "operator_family",
            Value::Rees(_) => "rees",
            Value::Classes(_) => "classes",
            Value::Clifford(_) => "clifford",
            Value::Exterior(_) => "exterior",
            Value::ExteriorOp(_) => "exterior_operator",
            Value::Jet(_) => "jet",
        }
    }

    pub fn to_json(&self) -> Json {
        let value = match self {
            Value::Degree(d) => degree_json(*d),
            Value::Poly(p) => poly_json(p),
            Value::Laurent(l) => laurent_json(l),
            Value::Bool(b) => json!(b),
            Value::Weights { frame, weights } => json!({ "frame": frame, "weights": weights }),
            Value::Ranks(r) => Json::Array(r.iter().map(|(i, k)| json!({ "level": i, "rank": k })).collect()),
            Value::Section { frame, graded } => json!({
                "degree": graded.degree(),
                "frame": frame,
                "components": graded.components().iter().map(poly_json).collect::<Vec<_>>(),
            }),
            Value::SectionFamily { frame, family } => json!({
                "degree": family.degree(),
                "frame": frame,
                "components": family.components().iter().map(laurent_json).collect::<Vec<_>>(),
            }),
            Value::Operator(d) => json!({
                "text": d.to_string(),
                "coords": &d.bundle().base().coords()[..],
                "frame": &d.bundle().frame_names()[..],
                "terms": d.terms().iter().map(|((a, b, beta), c)| json!({
                    "row": a, "col": b, "derivs": beta, "coeff": poly_json(c),
                })).collect::<Vec<_>>(),
            }),
            Value::OperatorFamily(f) => json!({
                "text": f.to_string(),
                "q": f.q(),
                "terms": f.terms().iter().map(|((a, b, beta), c)| json!({
                    "row": a, "col": b, "derivs": beta, "coeff": laurent_json(c),
                })).collect::<Vec<_>>(),
            }),
            Value::Rees(e) => Json::Array(
                e.components()
                    .iter()
                    .map(|(i, p)| json!({ "level": i, "poly": poly_json(p) }))
                    .collect(),
            ),
            Value::Classes(cs) => Json::Array(
                cs.iter()
                    .map(|c| json!({ "degree": c.degree(), "poly": poly_json(c.rep()) }))
                    .collect(),
            ),
            Value::Clifford(a) => blades_json(a.dim(), a.terms()),
            Value::Exterior(a) => blades_json(a.dim(), a.terms()),
            Value::ExteriorOp(op) => json!({
                "text": op.to_string(),
                "dim": op.dim(),
                "dvars": &op.dvars()[..],
                "terms": op.terms().iter().map(|((m, beta), c)| json!({
                    "blade": blade_indices(*m), "derivs": beta, "coeff": poly_json(c),
                })).collect::<Vec<_>>(),
            }),
            Value::Jet(j) => json!({
                "truncation": j.truncation(),
                "coeffs": j.coeffs().iter().map(|c| blades_json(c.dim(), c.terms())).collect::<Vec<_>>(),
            }),
        };
        json!({ "kind": self.kind(), "value": value })
    }
}

pub fn rational_json(r: &Rational) -> Json {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn degree_json(d: FiltDegree) -> Json {
    match d {
        FiltDegree::Finite(k) => json!(k),
        FiltDegree::Infinite => json!("inf"),
    }
}

fn monomials(p: &Poly) -> Json {
    Json::Array(
        p.sorted_terms()
            .into_iter()
            .map(|(e, c)| json!({ "coeff": rational_json(c), "exps": e }))
            .collect(),
    )
}

pub fn poly_json(p: &Poly) -> Json {
    json!({ "vars": &p.vars()[..], "monomials": monomials(p) })
}

fn laurent_json(l: &Laurent) -> Json {
    let vars: Vec<String> = l
        .terms()
        .next()
        .map(|(_, p)| p.vars().to_vec())
        .unwrap_or_default();
    json!({
        "param": "t",
        "vars": vars,
        "terms": l.terms().map(|(k, p)| {
            let p = p.reindex(&vars.clone().into()).unwrap_or_else(|_| p.clone());
            json!({ "power": k, "monomials": monomials(&p) })
        }).collect::<Vec<_>>(),
    })
}

fn blades_json(dim: usize, terms: &BTreeMap<u32, Rational>) -> Json {
    json!({
        "dim": dim,
        "terms": terms.iter().map(|(m, c)| json!({
            "blade": blade_indices(*m), "coeff": rational_json(c),
        })).collect::<Vec<_>>(),
    })
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Degree(d) => write!(f, "{d}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Laurent(l) => write!(f, "{l}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Weights { frame, weights } => {
                let parts: Vec<String> = frame
                    .iter()
                    .zip(weights)
                    .map(|(n, w)| format!("{n}:{w}"))
                    .collect();
                write!(f, "{{ {} }}", parts.join(", "))
            }
            Value::Ranks(r) => {
                let parts: Vec<String> = r.iter().map(|(i, k)| format!("{i}:{k}")).collect();
                write!(f, "{{ {} }}", parts.join(", "))
            }
            Value::Section { graded, .. } => write!(f, "{graded}"),
            Value::SectionFamily { family, .. } => write!(f, "{family}"),
            Value::Operator(d) => write!(f, "{d}"),
            Value::OperatorFamily(d) => write!(f, "{d}"),
            Value::Rees(e) => write!(f, "{e}"),
            Value::Classes(cs) => {
                if cs.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" + "))
            }
            Value::Clifford(a) => write!(f, "{a}"),
            Value::Exterior(a) => write!(f, "{a}"),
            Value::ExteriorOp(a) => write!(f, "{a}"),
            Value::Jet(j) => write!(f, "{j}"),
        }
    }
}

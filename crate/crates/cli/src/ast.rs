use std::fmt;

use gradedgeom_core::Rational;

use crate::diag::Span;

/// A node with its source location. Equality ignores the location, so a
/// reparsed pretty-print compares equal to the original.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: Span) -> Spanned<T> {
        Spanned { node, span }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

pub type SExpr = Spanned<Expr>;

#[derive(Debug, Clone, PartialEq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    /// `d[x]`
    Deriv(Spanned<String>),
    Neg(Box<SExpr>),
    Bin(BinOp, Box<SExpr>, Box<SExpr>),
    Pow(Box<SExpr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Name(String),
    /// Signed integer or `n/d` literal.
    Num(Rational),
    Expr(SExpr),
    List(Vec<SExpr>),
}

pub type Entry = (Spanned<String>, Spanned<i64>);

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Chart {
        name: Spanned<String>,
        coords: Vec<Entry>,
    },
    Bundle {
        name: Spanned<String>,
        base: Spanned<String>,
        frame: Vec<Entry>,
    },
    Cl(Spanned<i64>),
    Command(Command),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub keyword: Spanned<String>,
    pub args: Vec<Spanned<Arg>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub items: Vec<Item>,
}

impl Script {
    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.items.iter().filter_map(|i| match i {
            Item::Command(c) => Some(c),
            _ => None,
        })
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &SExpr, min: u8) -> fmt::Result {
    if prec(&e.node) < min {
        write!(f, "({})", e.node)
    } else {
        write!(f, "{}", e.node)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => write!(f, "{r}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Deriv(v) => write!(f, "d[{}]", v.node),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (p, sym) = match op {
                    BinOp::Add => (1, " + "),
                    BinOp::Sub => (1, " - "),
                    BinOp::Mul => (2, "*"),
                    BinOp::Div => (2, "/"),
                };
                write_at(f, a, p)?;
                write!(f, "{sym}")?;
                write_at(f, b, p + 1)
            }
            Expr::Pow(a, n) => {
                write_at(f, a, 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n) => write!(f, "{n}"),
            Arg::Num(r) => write!(f, "{r}"),
            Arg::Expr(e) => write!(f, "({})", e.node),
            Arg::List(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.node.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.keyword.node)?;
        for a in &self.args {
            write!(f, " {}", a.node)?;
        }
        Ok(())
    }
}

fn entries(es: &[Entry]) -> String {
    let parts: Vec<String> = es.iter().map(|(n, w)| format!("{}:{}", n.node, w.node)).collect();
    parts.join(", ")
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Chart { name, coords } => {
                write!(f, "chart {} {{ {} }}", name.node, entries(coords))
            }
            Item::Bundle { name, base, frame } => write!(
                f,
                "bundle {} over {} {{ {} }}",
                name.node,
                base.node,
                entries(frame)
            ),
            Item::Cl(k) => write!(f, "cl {};", k.node),
            Item::Command(c) => write!(f, "{c};"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}

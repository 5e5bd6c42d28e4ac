use gradedgeom_core::Rational;

use crate::ast::{Arg, BinOp, Command, Entry, Expr, Item, SExpr, Script, Spanned};
use crate::diag::{Diagnostic, Span};
use crate::dispatch::is_command;
use crate::lexer::{lex, Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// Parses a whole script. On failure every error found is returned, in
/// source order; after an error the parser skips to the next `;`.
pub fn parse(src: &str) -> Result<Script, Vec<Diagnostic>> {
    let (toks, mut diags) = lex(src);
    let mut p = Parser { toks, pos: 0 };
    let mut script = Script::default();
    while !p.at_eof() {
        match p.item() {
            Ok(item) => script.items.push(item),
            Err(d) => {
                diags.push(d);
                p.recover();
            }
        }
    }
    if diags.is_empty() {
        Ok(script)
    } else {
        diags.sort_by_key(|d| d.span.offset);
        Err(diags)
    }
}

/// Parses a single expression, used by tests and by the evaluator's
/// helpers.
pub fn parse_expr(src: &str) -> Result<SExpr, Vec<Diagnostic>> {
    let (toks, diags) = lex(src);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr().map_err(|d| vec![d])?;
    if !p.at_eof() {
        return Err(vec![p.unexpected("end of expression")]);
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(t.span, format!("expected {wanted}, found {}", t.tok.describe()))
    }

    fn expect_sym(&mut self, c: char) -> PResult<Span> {
        if self.is_sym(c) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<Spanned<String>> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok(Spanned::new(s, self.bump().span))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn recover(&mut self) {
        while !self.at_eof() {
            if self.bump().tok == Tok::Sym(';') {
                break;
            }
        }
    }

    fn int(&mut self) -> PResult<Spanned<i64>> {
        let start = self.peek().span;
        let neg = self.eat_sym('-');
        let t = self.peek().clone();
        let Tok::Int(s) = &t.tok else {
            return Err(self.unexpected("an integer"));
        };
        self.bump();
        let v: i64 = s
            .parse()
            .map_err(|_| Diagnostic::error(t.span, "integer literal out of range"))?;
        Ok(Spanned::new(if neg { -v } else { v }, start.to(t.span)))
    }

    fn item(&mut self) -> PResult<Item> {
        let head = self.ident("a declaration or command")?;
        match head.node.as_str() {
            "chart" => {
                let name = self.ident("a chart name")?;
                let coords = self.entries()?;
                self.eat_sym(';');
                Ok(Item::Chart { name, coords })
            }
            "bundle" => {
                let name = self.ident("a bundle name")?;
                match self.ident("`over`")? {
                    kw if kw.node == "over" => {}
                    kw => {
                        return Err(Diagnostic::error(
                            kw.span,
                            format!("expected `over`, found `{}`", kw.node),
                        ))
                    }
                }
                let base = self.ident("a chart name")?;
                let frame = self.entries()?;
                self.eat_sym(';');
                Ok(Item::Bundle { name, base, frame })
            }
            "cl" => {
                let k = self.int()?;
                self.expect_sym(';')?;
                Ok(Item::Cl(k))
            }
            kw if is_command(kw) => {
                let mut args = Vec::new();
                while !self.is_sym(';') {
                    if self.at_eof() {
                        return Err(self.unexpected("';'"));
                    }
                    args.push(self.arg()?);
                }
                self.bump();
                Ok(Item::Command(Command { keyword: head, args }))
            }
            other => Err(Diagnostic::error(head.span, format!("unknown command `{other}`"))),
        }
    }

    fn entries(&mut self) -> PResult<Vec<Entry>> {
        self.expect_sym('{')?;
        let mut out = Vec::new();
        loop {
            let name = self.ident("a name")?;
            self.expect_sym(':')?;
            let w = self.int()?;
            out.push((name, w));
            if self.eat_sym('}') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn number_arg(&mut self) -> PResult<Spanned<Arg>> {
        let start = self.peek().span;
        let neg = self.eat_sym('-');
        let num = match &self.peek().tok {
            Tok::Int(s) => s.clone(),
            _ => return Err(self.unexpected("a number")),
        };
        self.bump();
        let mut r: Rational = num.parse().expect("digits");
        if self.is_sym('/') && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            let t = self.bump();
            let Tok::Int(d) = t.tok else { unreachable!() };
            let d: Rational = d.parse().expect("digits");
            if d == Rational::from_integer(0.into()) {
                return Err(Diagnostic::error(t.span, "zero denominator"));
            }
            r /= d;
        }
        if neg {
            r = -r;
        }
        Ok(Spanned::new(Arg::Num(r), start.to(self.prev_span())))
    }

    fn arg(&mut self) -> PResult<Spanned<Arg>> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.bump();
                Ok(Spanned::new(Arg::Name(s), t.span))
            }
            Tok::Int(_) | Tok::Sym('-') => self.number_arg(),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                let close = self.close('(', t.span)?;
                Ok(Spanned::new(Arg::Expr(e), t.span.to(close)))
            }
            Tok::Sym('[') => {
                self.bump();
                let mut es = Vec::new();
                if !self.is_sym(']') {
                    loop {
                        es.push(self.expr()?);
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                }
                let close = self.close('[', t.span)?;
                Ok(Spanned::new(Arg::List(es), t.span.to(close)))
            }
            _ => Err(self.unexpected("an argument")),
        }
    }

    fn close(&mut self, open: char, at: Span) -> PResult<Span> {
        let c = if open == '(' { ')' } else { ']' };
        if self.is_sym(c) {
            return Ok(self.bump().span);
        }
        let mut d = self.unexpected(&format!("'{c}'"));
        if matches!(self.peek().tok, Tok::Sym(';') | Tok::Eof) {
            d = Diagnostic::error(at, format!("unclosed '{open}'"));
        }
        Err(d)
    }

    fn starts_operand(&self) -> bool {
        matches!(
            self.peek().tok,
            Tok::Ident(_) | Tok::Int(_) | Tok::Sym('(') | Tok::Sym('-')
        )
    }

    /// Operand after a binary operator; a missing one is reported at the
    /// operator.
    fn operand<F>(&mut self, op: Span, sym: char, f: F) -> PResult<SExpr>
    where
        F: FnOnce(&mut Self) -> PResult<SExpr>,
    {
        if !self.starts_operand() {
            return Err(Diagnostic::error(
                op,
                format!(
                    "dangling '{sym}': missing right operand before {}",
                    self.peek().tok.describe()
                ),
            ));
        }
        f(self)
    }

    pub(crate) fn expr(&mut self) -> PResult<SExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let t = self.bump();
            let sym = if op == BinOp::Add { '+' } else { '-' };
            let rhs = self.operand(t.span, sym, Self::term)?;
            let span = lhs.span.to(rhs.span);
            lhs = Spanned::new(Expr::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> PResult<SExpr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            let t = self.bump();
            let sym = if op == BinOp::Mul { '*' } else { '/' };
            let rhs = self.operand(t.span, sym, Self::unary)?;
            let span = lhs.span.to(rhs.span);
            lhs = Spanned::new(Expr::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn unary(&mut self) -> PResult<SExpr> {
        if self.is_sym('-') {
            let t = self.bump();
            let inner = self.operand(t.span, '-', Self::unary)?;
            let span = t.span.to(inner.span);
            return Ok(Spanned::new(Expr::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<SExpr> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        let caret = self.bump();
        let t = self.peek().clone();
        let Tok::Int(s) = &t.tok else {
            return Err(Diagnostic::error(
                caret.span,
                format!(
                    "exponent must be a nonnegative integer, found {}",
                    t.tok.describe()
                ),
            ));
        };
        let n: u32 = s
            .parse()
            .map_err(|_| Diagnostic::error(t.span, "exponent out of range"))?;
        self.bump();
        let span = base.span.to(t.span);
        Ok(Spanned::new(Expr::Pow(Box::new(base), n), span))
    }

    fn atom(&mut self) -> PResult<SExpr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(s) => {
                self.bump();
                Ok(Spanned::new(Expr::Num(s.parse().expect("digits")), t.span))
            }
            Tok::Ident(s) if s == "d" && *self.peek_at(1) == Tok::Sym('[') => {
                self.bump();
                self.bump();
                let v = self.ident("a coordinate name")?;
                let close = self.expect_sym(']')?;
                Ok(Spanned::new(Expr::Deriv(v), t.span.to(close)))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Spanned::new(Expr::Var(s), t.span))
            }
            Tok::Sym('(') => {
                self.bump();
                let mut e = self.expr()?;
                let close = self.close('(', t.span)?;
                e.span = t.span.to(close);
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

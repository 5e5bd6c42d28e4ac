use crate::diag::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned integer literal, kept as written.
    Int(String),
    Sym(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("number {s}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const SYMBOLS: &str = "{}()[],:;+-*/^";

/// Splits `src` into tokens. Unknown characters are reported and skipped,
/// so lexing always produces a token list ending in `Eof`.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&(off, c)) = chars.peek() {
        let start = Span {
            offset: off,
            line,
            col,
            len: 1,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
        } else if c.is_ascii_digit() || c.is_alphabetic() || c == '_' {
            let digits = c.is_ascii_digit();
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                let ok = if digits {
                    d.is_ascii_digit()
                } else {
                    d.is_alphanumeric() || d == '_'
                };
                if !ok {
                    break;
                }
                s.push(d);
                chars.next();
            }
            let n = s.chars().count();
            col += n;
            let span = Span { len: n, ..start };
            let tok = if digits { Tok::Int(s) } else { Tok::Ident(s) };
            out.push(Token { tok, span });
        } else if SYMBOLS.contains(c) {
            chars.next();
            col += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                span: start,
            });
        } else {
            chars.next();
            col += 1;
            diags.push(Diagnostic::error(start, format!("unexpected character '{c}'")));
        }
    }
    let end = Span {
        offset: src.len(),
        line,
        col,
        len: 1,
    };
    out.push(Token {
        tok: Tok::Eof,
        span: end,
    });
    (out, diags)
}

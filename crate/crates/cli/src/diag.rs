use std::fmt;

/// Location of a token or node in the source text. Lines and columns are
/// 1-based and count characters, `len` is in characters too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

impl Span {
    /// Smallest span covering both; assumes `self` starts first and both
    /// lie on the same line when the result is used for underlining.
    pub fn to(self, end: Span) -> Span {
        let len = if end.line == self.line {
            (end.col + end.len).saturating_sub(self.col)
        } else {
            self.len
        };
        Span { len, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
        }
    }

    /// Multi-line rendering with the offending line and a caret underline.
    pub fn render(&self, src: &str) -> String {
        let line = src.lines().nth(self.span.line.saturating_sub(1)).unwrap_or("");
        let gutter = self.span.line.to_string();
        let pad = " ".repeat(gutter.len());
        let under = format!(
            "{}{}",
            " ".repeat(self.span.col.saturating_sub(1)),
            "^".repeat(self.span.len.max(1))
        );
        format!("{self}\n{pad} |\n{gutter} | {line}\n{pad} | {under}",)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{sev} at {}:{}: {}",
            self.span.line, self.span.col, self.message
        )
    }
}

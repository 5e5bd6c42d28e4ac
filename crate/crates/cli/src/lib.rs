//! Script language and command-line front end for `gradedgeom-core`.
//!
//! A script declares weighted charts, bundles and a Clifford dimension,
//! then issues commands, one result per command:
//!
//! ```text
//! chart C { x:1, y:2 }
//! bundle V over C { s1:0, s2:-2 }
//! deg C (x*y + x^3);
//! secdeg V (s1 + x*s2);
//! ```

pub mod ast;
pub mod diag;
pub mod dispatch;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod value;

use serde_json::{json, Value as Json};

use crate::ast::{Item, Script};
use crate::diag::Diagnostic;
use crate::eval::Env;
use crate::value::Value;

pub use parser::parse;

pub const DEFAULT_TRUNCATION: usize = 8;

#[derive(Debug, Clone)]
pub struct Options {
    pub truncation: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub command: String,
    pub inputs: Vec<String>,
    pub source: String,
    pub outcome: Result<Value, Diagnostic>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<Record>,
    /// Failed declarations.
    pub declaration_errors: Vec<Diagnostic>,
}

impl Report {
    pub fn errors(&self) -> Vec<&Diagnostic> {
        let mut out: Vec<&Diagnostic> = self.declaration_errors.iter().collect();
        out.extend(self.records.iter().filter_map(|r| r.outcome.as_ref().err()));
        out.sort_by_key(|d| d.span.offset);
        out
    }

    pub fn ok(&self) -> bool {
        self.errors().is_empty()
    }

    /// One block per command: the command echoed after `> `, then the
    /// result or the error message.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("> {}\n", r.source));
            match &r.outcome {
                Ok(v) => out.push_str(&format!("{v}\n")),
                Err(d) => out.push_str(&format!("{d}\n")),
            }
        }
        out
    }

    pub fn json(&self) -> Json {
        Json::Array(
            self.records
                .iter()
                .map(|r| match &r.outcome {
                    Ok(v) => json!({
                        "command": r.command,
                        "inputs": r.inputs,
                        "result": v.to_json(),
                    }),
                    Err(d) => json!({
                        "command": r.command,
                        "inputs": r.inputs,
                        "error": {
                            "message": d.message,
                            "line": d.span.line,
                            "column": d.span.col,
                            "length": d.span.len,
                        },
                    }),
                })
                .collect(),
        )
    }
}

/// Evaluates a parsed script. Declarations and commands run in order; a
/// failing command does not stop the ones after it.
pub fn run(script: &Script, opts: &Options) -> Report {
    let mut env = Env::new(opts.truncation);
    let mut report = Report::default();
    for item in &script.items {
        let res = env.item(item);
        match item {
            Item::Command(c) => report.records.push(Record {
                command: c.keyword.node.clone(),
                inputs: c.args.iter().map(|a| a.node.to_string()).collect(),
                source: c.to_string(),
                outcome: res.map(|v| v.expect("commands produce values")),
            }),
            _ => {
                if let Err(d) = res {
                    report.declaration_errors.push(d);
                }
            }
        }
    }
    report
}

/// Parses and runs `src`. Parse errors are returned as such; evaluation
/// errors are inside the report.
pub fn run_source(src: &str, opts: &Options) -> Result<Report, Vec<Diagnostic>> {
    let script = parse(src)?;
    Ok(run(&script, opts))
}

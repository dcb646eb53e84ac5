//! The `fmw` expression language: lexer, parser, printer and evaluator.
//!
//! ```
//! use framed_mw::lang::Session;
//!
//! let mut s = Session::new(100_000);
//! let out = s.run("equal([4], h*[2])").unwrap().unwrap();
//! assert_eq!(out.value.text(), "Equal");
//! ```

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod selftest;

use std::fmt;

use serde_json::json;

use crate::error::Error;

pub use ast::{Expr, Stmt};
pub use eval::{Outcome, Session, Value};
pub use parser::{parse_expr, parse_stmt};

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangError {
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    Type(String),
    Eval(Error),
}

impl LangError {
    pub fn code(&self) -> &'static str {
        match self {
            LangError::Syntax { .. } => "syntax_error",
            LangError::Type(_) => "type_error",
            LangError::Eval(e) => e.code(),
        }
    }

    /// Process exit status for this error in batch mode.
    pub fn exit_code(&self) -> i32 {
        match self {
            LangError::Syntax { .. } | LangError::Type(_) => 2,
            LangError::Eval(Error::UnsupportedTransferShape(_)) => 3,
            LangError::Eval(Error::UnsupportedCorrShape(_)) => 4,
            LangError::Eval(_) => 1,
        }
    }
}

impl fmt::Display for LangError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangError::Syntax {
                line,
                col,
                expected,
                found,
            } => {
                write!(f, "{}:{}: found {}", line, col, found)?;
                if !expected.is_empty() {
                    write!(f, ", expected {}", expected.join(" or "))?;
                }
                Ok(())
            }
            LangError::Type(m) => write!(f, "type error: {}", m),
            LangError::Eval(e) => write!(f, "{}", e),
        }
    }
}

/// Output of one batch line, already rendered.
pub struct Rendered {
    pub line: usize,
    pub text: String,
    pub exit: i32,
}

/// Evaluates `src` one statement per line. Errors are reported in place and
/// evaluation continues with the next line.
pub fn run_lines(session: &mut Session, src: &str, as_json: bool) -> Vec<Rendered> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let n = i + 1;
        match session.run(line) {
            Ok(None) => {}
            Ok(Some(o)) => out.push(Rendered {
                line: n,
                text: if as_json {
                    o.to_json().to_string()
                } else {
                    o.to_text()
                },
                exit: o.exit_code(),
            }),
            Err(e) => {
                let mut e = e;
                if let LangError::Syntax { line, .. } = &mut e {
                    *line = n;
                }
                let text = if as_json {
                    let mut j = json!({"kind": "error", "code": e.code(), "message": e.to_string(), "line": n});
                    if let LangError::Syntax { col, expected, .. } = &e {
                        j["col"] = json!(col);
                        j["expected"] = json!(expected);
                    }
                    j.to_string()
                } else {
                    format!("error[{}]: {}", e.code(), e)
                };
                out.push(Rendered {
                    line: n,
                    text,
                    exit: e.exit_code(),
                });
            }
        }
    }
    out
}

/// Runs a whole batch file and returns the rendered output together with the
/// exit status of the first failing line (0 if none).
pub fn run_batch(src: &str, as_json: bool, budget: usize) -> (String, i32) {
    let mut s = Session::new(budget);
    let rendered = run_lines(&mut s, src, as_json);
    let code = rendered.iter().map(|r| r.exit).find(|&c| c != 0).unwrap_or(0);
    let mut text = String::new();
    for r in rendered {
        text.push_str(&r.text);
        text.push('\n');
    }
    (text, code)
}

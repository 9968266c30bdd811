//! Loop-program DSL: parsing, canonical rendering and translation into a
//! single-location transition system.
//!
//! ```text
//! vars x, y, u, v;
//! params a, b;
//! init x := a, y := b, u := b, v := a;
//! guard x != y;
//! loop
//!   if x > y then (x, v) := (x - y, u + v); else (y, u) := (y - x, u + v); end
//! end
//! ```

mod ast;
mod lexer;
mod parser;
mod transition;

use std::sync::Arc;

use thiserror::Error;

pub use ast::{Assignment, Atom, Condition, LoopProgram, Relop, Stmt};
pub use transition::{to_transition_system, AtomOrigin, GuardAtom, Transition, TransitionSystem};

use crate::polyring::{Polynomial, Ring};
use parser::{Parser, Scope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: non-polynomial expression: {msg}")]
    NonPolynomial { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: assignment to undeclared variable `{name}`")]
    UndeclaredVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{name}` is not a declared {scope}")]
    UnknownIdentifier { line: usize, col: usize, name: String, scope: &'static str },
    #[error("variable `{0}` has no initial value")]
    MissingInit(String),
}

pub fn parse_program(text: &str) -> Result<LoopProgram, FrontendError> {
    Parser::new(text)?.program()
}

/// Parse a polynomial expression over the variables of `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, FrontendError> {
    let mut p = Parser::new(text)?;
    let poly = p.expr(ring, Scope::Free)?;
    if !p.at_eof() {
        let (line, col) = p.here();
        return Err(FrontendError::Syntax { line, col, msg: "unexpected trailing input".into() });
    }
    Ok(poly)
}

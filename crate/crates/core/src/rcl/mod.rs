//! The modeling language: lexer, parser, validator and canonical printer.
//!
//! ```text
//! kind body <: independent
//! body senate
//! role senate_role
//! relation bears(independent, role) base
//! bears(senate, senate_role) during [0, 100]
//! rule rule_1: permitted_activity(?x, ?z) :- role(?x), has_right(?x, ?y), has_activity(?y, ?z).
//! chain has_right = has_right o belongs_to
//! procedure p max 6 { step s: act by senate_role requires at_war }
//! trace t { event 31 act by senate }
//! ```

mod ast;
mod lexer;
mod parser;
mod serialize;
mod validate;

pub use ast::{Ast, Decl, DeclKind, Diagnostic, RuleDecl, Severity};
pub use lexer::{is_keyword, tokenize, SourceSpan, Token, TokenKind};
pub use parser::parse;
pub use serialize::serialize;
pub use validate::{validate, Model};

/// Tokenizes, parses and validates `source`. Parse and validation
/// diagnostics are returned together; the model is present only when
/// neither stage reported an error.
pub fn load(source: &str) -> (Option<Model>, Vec<Diagnostic>) {
    let (ast, mut diagnostics) = parse(&tokenize(source));
    let (model, more) = validate(&ast);
    diagnostics.extend(more);
    let clean = !diagnostics.iter().any(Diagnostic::is_error);
    (model.filter(|_| clean), diagnostics)
}

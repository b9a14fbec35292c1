use std::fmt;

use crate::ontology::{Category, Fact};
use crate::procedure::{ProcessTrace, Procedure};
use crate::reasoner::{Atom, ChainSpec};

use super::lexer::SourceSpan;

/// A rule as written; the name is optional in source and resolved during
/// validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDecl {
    pub name: Option<String>,
    pub head: Atom,
    pub body: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Kind {
        name: String,
        category: Category,
    },
    Individual {
        name: String,
        kind: String,
    },
    Relation {
        name: String,
        subject: Category,
        object: Category,
        base_only: bool,
    },
    Fact(Fact),
    Rule(RuleDecl),
    Chain(ChainSpec),
    Procedure(Procedure),
    Trace(ProcessTrace),
}

/// A top-level declaration. Equality ignores the span, so a re-parsed
/// serialization compares equal to the original.
#[derive(Debug, Clone)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: SourceSpan,
}

impl PartialEq for Decl {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Decl {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ast {
    pub decls: Vec<Decl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `LINE:COL: severity: MESSAGE`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.severity, self.message)
    }
}

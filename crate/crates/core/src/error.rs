use thiserror::Error;

use crate::ontology::Category;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown kind '{0}'")]
    UnknownKind(String),

    #[error("unknown relation '{0}'")]
    UnknownRelation(String),

    #[error("unknown entity '{0}'")]
    UnknownEntity(String),

    #[error("'{0}' is not a valid identifier")]
    InvalidIdentifier(String),

    #[error("'{0}' is already declared")]
    DuplicateDeclaration(String),

    #[error("signature violation in {predicate}({subject}, {object}): {reason}")]
    SignatureViolation {
        predicate: String,
        subject: String,
        object: String,
        reason: String,
    },

    #[error("interval start {start} is after end {end}")]
    InvalidInterval { start: i64, end: i64 },

    #[error("cannot retract derived fact {0}")]
    CannotRetractDerived(String),

    #[error("fact {0} is already a base fact")]
    DerivedShadowsBase(String),

    #[error("unsafe rule '{rule}': variable {variable} does not occur in the body")]
    UnsafeRule { rule: String, variable: String },

    #[error("rule '{rule}' derives base-only relation '{predicate}'")]
    HeadNotDerivable { rule: String, predicate: String },

    #[error("malformed rule '{rule}': {reason}")]
    MalformedRule { rule: String, reason: String },

    #[error("'{0}' is not a role")]
    NotARole(String),

    #[error("'{0}' is not an occurrent")]
    NotAnOccurrent(String),

    #[error("fact {0} is not in the closure")]
    FactNotInClosure(String),

    #[error("empty window [{start}, {end}]")]
    EmptyWindow { start: i64, end: i64 },

    #[error("invalid prefix assignment: {0}")]
    InvalidPrefix(String),

    #[error("cannot compose: trace '{first}' ends at {end} after '{second}' starts at {start}")]
    OverlapViolation {
        first: String,
        second: String,
        end: i64,
        start: i64,
    },

    #[error("unknown procedure '{0}'")]
    UnknownProcedure(String),

    #[error("unknown trace '{0}'")]
    UnknownTrace(String),

    #[error("'{name}' is categorized as {actual}, expected {expected}")]
    WrongCategory {
        name: String,
        expected: Category,
        actual: Category,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

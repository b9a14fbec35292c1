//! The bundled fixture: consuls, the senate and the wartime decree.

use crate::error::Result;
use crate::ontology::{Fact, FactStore, Interval};
use crate::rcl::{self, Ast, Model};
use crate::reasoner::infer_closure;

pub const SOURCE: &str = include_str!("../fixtures/kb_roman.rcl");
pub const EXPECTED: &str = include_str!("../fixtures/kb_roman.expected");

pub const PROCEDURE: &str = "wartime_empowerment";
pub const REALIZING_TRACE: &str = "good_trace";
pub const GRANTEE: &str = "first_magistrate_role";
pub const EMERGENCY_RIGHT: &str = "emergency_powers";

#[derive(Debug, Clone)]
pub struct Fixture {
    pub ast: Ast,
    pub model: Model,
    /// Closure including the emergency grant.
    pub store: FactStore,
}

/// The grant produced by the realizing trace: `has_right` from the grantee
/// to the emergency right, from the first matched event until the
/// procedure's maximum duration has elapsed.
pub fn emergency_grant(model: &Model, closure: &FactStore) -> Result<Option<Fact>> {
    let procedure = model.procedure(PROCEDURE)?;
    let trace = model.trace(REALIZING_TRACE)?;
    let report = model.realize(closure, PROCEDURE, REALIZING_TRACE)?;
    let Some(window) = report.window(trace) else {
        return Ok(None);
    };
    let start = window.start().expect("event times are finite");
    let end = start + procedure.max_duration.unwrap_or(0);
    Ok(Some(
        Fact::new("has_right", GRANTEE, EMERGENCY_RIGHT).during(Interval::closed(start, end)?),
    ))
}

/// Parses, validates and closes the fixture, then adds the emergency grant
/// and closes again.
pub fn load_fixture() -> Fixture {
    let (ast, diags) = rcl::parse(&rcl::tokenize(SOURCE));
    assert!(diags.is_empty(), "fixture does not parse: {diags:?}");
    let (model, diags) = rcl::validate(&ast);
    assert!(diags.is_empty(), "fixture does not validate: {diags:?}");
    let model = model.expect("no diagnostics");
    let closure = model.closure();
    let grant = emergency_grant(&model, &closure)
        .expect("fixture declares the procedure and trace")
        .expect("fixture trace realizes the procedure");
    let store = closure
        .with_derived(grant, PROCEDURE)
        .expect("grant fits the has_right signature");
    let store = infer_closure(&store, &model.plan);
    Fixture { ast, model, store }
}

/// One row of the expected-output table: CLI arguments after the model
/// path, the exit code and standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedRow {
    pub args: Vec<String>,
    pub exit: i32,
    pub stdout: String,
}

/// Rows start with `$ ARGS -> EXIT`; the lines up to the next row are the
/// expected standard output.
pub fn expected_rows() -> Vec<ExpectedRow> {
    let mut rows: Vec<ExpectedRow> = Vec::new();
    for line in EXPECTED.lines() {
        if let Some(header) = line.strip_prefix("$ ") {
            let (args, exit) = header.rsplit_once(" -> ").expect("row header has an exit code");
            rows.push(ExpectedRow {
                args: args.split_whitespace().map(str::to_string).collect(),
                exit: exit.parse().expect("exit code is an integer"),
                stdout: String::new(),
            });
        } else if let Some(row) = rows.last_mut() {
            row.stdout.push_str(line);
            row.stdout.push('\n');
        }
    }
    rows
}

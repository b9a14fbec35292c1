use std::fmt::Write;

use crate::ontology::Fact;
use crate::reasoner::Atom;

use super::ast::{Ast, DeclKind};

fn atoms(out: &mut String, atoms: &[Atom]) {
    for (i, atom) in atoms.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{atom}").unwrap();
    }
}

fn fact(out: &mut String, f: &Fact) {
    write!(out, "{}({}, {})", f.predicate, f.subject, f.object).unwrap();
    if let Some(extent) = f.extent {
        let (Some(start), Some(end)) = (extent.start(), extent.end()) else {
            panic!("open extent in {f} has no surface syntax");
        };
        write!(out, " during [{start}, {end}]").unwrap();
    }
}

/// Canonical text: one declaration per line, single spaces, original order.
pub fn serialize(ast: &Ast) -> String {
    let mut out = String::new();
    for decl in &ast.decls {
        match &decl.kind {
            DeclKind::Kind { name, category } => {
                write!(out, "kind {name} <: {}", category.keyword()).unwrap()
            }
            DeclKind::Individual { name, kind } => write!(out, "{kind} {name}").unwrap(),
            DeclKind::Relation {
                name,
                subject,
                object,
                base_only,
            } => {
                write!(
                    out,
                    "relation {name}({}, {})",
                    subject.keyword(),
                    object.keyword()
                )
                .unwrap();
                if *base_only {
                    out.push_str(" base");
                }
            }
            DeclKind::Fact(f) => fact(&mut out, f),
            DeclKind::Rule(rule) => {
                out.push_str("rule ");
                if let Some(name) = &rule.name {
                    write!(out, "{name}: ").unwrap();
                }
                write!(out, "{} :- ", rule.head).unwrap();
                atoms(&mut out, &rule.body);
                out.push('.');
            }
            DeclKind::Chain(chain) => write!(
                out,
                "chain {} = {} o {}",
                chain.derived, chain.first, chain.second
            )
            .unwrap(),
            DeclKind::Procedure(proc) => {
                write!(out, "procedure {}", proc.name).unwrap();
                if let Some(max) = proc.max_duration {
                    write!(out, " max {max}").unwrap();
                }
                out.push_str(" {");
                for step in &proc.steps {
                    write!(out, " step {}: {} by {}", step.name, step.activity, step.role).unwrap();
                    if let Some(guard) = &step.guard {
                        write!(out, " requires {guard}").unwrap();
                    }
                }
                out.push_str(" }");
            }
            DeclKind::Trace(trace) => {
                write!(out, "trace {} {{", trace.name).unwrap();
                for e in &trace.events {
                    write!(out, " event {} {} by {}", e.time, e.activity, e.actor).unwrap();
                }
                out.push_str(" }");
            }
        }
        out.push('\n');
    }
    out
}

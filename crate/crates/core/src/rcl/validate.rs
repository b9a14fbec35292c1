use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ontology::{Category, Fact, FactStore, RelationSig, BEARS};
use crate::procedure::{check_realization, ProcessTrace, Procedure, RealizationReport};
use crate::reasoner::{check_rule, compile_rules, desugar_chain, infer_closure, Rule, RulePlan};

use super::ast::{Ast, DeclKind, Diagnostic};
use super::lexer::SourceSpan;

/// A validated model: base store, rules (including desugared chains) in
/// declaration order, procedures and traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub store: FactStore,
    pub rules: Vec<Rule>,
    pub plan: RulePlan,
    pub procedures: Vec<Procedure>,
    pub traces: Vec<ProcessTrace>,
}

impl Model {
    /// The store closed under the model's rules.
    pub fn closure(&self) -> FactStore {
        infer_closure(&self.store, &self.plan)
    }

    pub fn procedure(&self, name: &str) -> Result<&Procedure> {
        self.procedures
            .iter()
            .find(|p| p.name.as_str() == name)
            .ok_or_else(|| Error::UnknownProcedure(name.to_string()))
    }

    pub fn trace(&self, name: &str) -> Result<&ProcessTrace> {
        self.traces
            .iter()
            .find(|t| t.name.as_str() == name)
            .ok_or_else(|| Error::UnknownTrace(name.to_string()))
    }

    /// Checks a declared trace against a declared procedure over `closure`.
    pub fn realize(
        &self,
        closure: &FactStore,
        procedure: &str,
        trace: &str,
    ) -> Result<RealizationReport> {
        let p = self.procedure(procedure)?;
        let t = self.trace(trace)?;
        Ok(check_realization(closure, p, t))
    }
}

struct Validator {
    store: FactStore,
    rules: Vec<Rule>,
    procedures: Vec<Procedure>,
    traces: Vec<ProcessTrace>,
    diagnostics: Vec<Diagnostic>,
    rule_count: usize,
}

impl Validator {
    fn report(&mut self, span: SourceSpan, result: Result<()>) {
        if let Err(e) = result {
            self.diagnostics.push(Diagnostic::error(span, e.to_string()));
        }
    }

    fn expect_category(&self, name: &str, expected: Category) -> Result<()> {
        let actual = self
            .store
            .category_of(name)
            .ok_or_else(|| Error::UnknownEntity(name.to_string()))?;
        if actual.is_a(expected) {
            Ok(())
        } else {
            Err(Error::WrongCategory {
                name: name.to_string(),
                expected,
                actual,
            })
        }
    }

    fn fact(&mut self, span: SourceSpan, fact: &Fact) {
        if fact.predicate == BEARS {
            let subject = self.store.category_of(fact.subject.as_str());
            if subject.is_some_and(|c| !c.is_a(Category::Independent)) {
                self.diagnostics.push(Diagnostic::error(
                    span,
                    format!(
                        "bearer must be an independent continuant: '{}' in {fact}",
                        fact.subject
                    ),
                ));
                return;
            }
            let object = self.store.category_of(fact.object.as_str());
            if object.is_some_and(|c| !c.is_a(Category::Role)) {
                self.diagnostics.push(Diagnostic::error(
                    span,
                    format!("only roles can be borne: '{}' in {fact}", fact.object),
                ));
                return;
            }
        }
        let result = self.store.insert_base(fact.clone());
        self.report(span, result);
    }

    fn rule(&mut self, span: SourceSpan, rule: Rule) {
        if self.rules.iter().any(|r| r.name == rule.name) {
            self.diagnostics.push(Diagnostic::error(
                span,
                format!("rule '{}' is already declared", rule.name),
            ));
            return;
        }
        match check_rule(&self.store, &rule) {
            Ok(()) => self.rules.push(rule),
            Err(e) => self.diagnostics.push(Diagnostic::error(span, e.to_string())),
        }
    }

    fn procedure(&mut self, span: SourceSpan, proc: &Procedure) -> Result<()> {
        self.store.declare_individual(proc.name.as_str(), "procedure")?;
        let mut names = BTreeSet::new();
        for step in &proc.steps {
            if !names.insert(step.name.as_str()) {
                return Err(Error::DuplicateDeclaration(format!(
                    "{}.{}",
                    proc.name, step.name
                )));
            }
            self.expect_category(step.activity.as_str(), Category::ActivityKind)?;
            self.expect_category(step.role.as_str(), Category::Role)?;
            if let Some(guard) = &step.guard {
                self.expect_category(guard.as_str(), Category::State)?;
            }
        }
        if let Some(max) = proc.max_duration {
            if max <= 0 {
                self.diagnostics.push(Diagnostic::error(
                    span,
                    format!("maximum duration of '{}' must be positive", proc.name),
                ));
                return Ok(());
            }
        }
        self.procedures.push(proc.clone());
        Ok(())
    }

    fn trace(&mut self, trace: &ProcessTrace) -> Result<()> {
        self.store.declare_individual(trace.name.as_str(), "process")?;
        if let Some(w) = trace.events.windows(2).find(|w| w[0].time > w[1].time) {
            return Err(Error::InvalidPrefix(format!(
                "events of '{}' go back in time from {} to {}",
                trace.name, w[0].time, w[1].time
            )));
        }
        for (i, event) in trace.events.iter().enumerate() {
            self.expect_category(event.activity.as_str(), Category::ActivityKind)?;
            self.expect_category(event.actor.as_str(), Category::Independent)?;
            self.store
                .declare_individual(trace.occurrence_name(i).as_str(), "occurrence")?;
        }
        for fact in trace.occurrence_facts() {
            self.store.insert_base(fact)?;
        }
        self.traces.push(trace.clone());
        Ok(())
    }
}

/// Checks declarations in order and builds the base store. A model is
/// returned only when there are no errors.
pub fn validate(ast: &Ast) -> (Option<Model>, Vec<Diagnostic>) {
    let mut v = Validator {
        store: FactStore::new(),
        rules: Vec::new(),
        procedures: Vec::new(),
        traces: Vec::new(),
        diagnostics: Vec::new(),
        rule_count: 0,
    };
    for decl in &ast.decls {
        let span = decl.span;
        match &decl.kind {
            DeclKind::Kind { name, category } => {
                let r = v.store.declare_kind(name, *category);
                v.report(span, r);
            }
            DeclKind::Individual { name, kind } => {
                let r = v.store.declare_individual(name, kind);
                v.report(span, r);
            }
            DeclKind::Relation {
                name,
                subject,
                object,
                base_only,
            } => {
                let mut sig = RelationSig::new(*subject, *object);
                sig.base_only = *base_only;
                let r = v.store.declare_relation(name, sig);
                v.report(span, r);
            }
            DeclKind::Fact(fact) => v.fact(span, fact),
            DeclKind::Rule(decl) => {
                v.rule_count += 1;
                let name = decl
                    .name
                    .clone()
                    .unwrap_or_else(|| format!("rule_{}", v.rule_count));
                v.rule(
                    span,
                    Rule {
                        name,
                        head: decl.head.clone(),
                        body: decl.body.clone(),
                    },
                );
            }
            DeclKind::Chain(chain) => match desugar_chain(&v.store, chain) {
                Ok(rule) => v.rule(span, rule),
                Err(e) => v.diagnostics.push(Diagnostic::error(span, e.to_string())),
            },
            DeclKind::Procedure(proc) => {
                let r = v.procedure(span, proc);
                v.report(span, r);
            }
            DeclKind::Trace(trace) => {
                let r = v.trace(trace);
                v.report(span, r);
            }
        }
    }
    if v.diagnostics.iter().any(Diagnostic::is_error) {
        return (None, v.diagnostics);
    }
    match compile_rules(&v.store, &v.rules) {
        Ok(plan) => (
            Some(Model {
                store: v.store,
                rules: v.rules,
                plan,
                procedures: v.procedures,
                traces: v.traces,
            }),
            v.diagnostics,
        ),
        Err(e) => {
            v.diagnostics
                .push(Diagnostic::error(SourceSpan::default(), e.to_string()));
            (None, v.diagnostics)
        }
    }
}

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ontology::{Fact, FactStore};

use super::eval::{extend, index_facts, Partial, Step};
use super::{RulePlan, Term};

/// One rule application concluding a fact. Premises are the relational
/// facts matched by the body, in written order; category tests have no
/// premise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Derivation {
    pub conclusion: Fact,
    pub rule: String,
    pub premises: Vec<Fact>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Explanation {
    Base,
    Derived(Vec<Derivation>),
}

/// Every one-step derivation of `fact` from facts in the closure.
pub fn explain(store: &FactStore, plan: &RulePlan, fact: &Fact) -> Result<Explanation> {
    if store.is_base(fact) {
        return Ok(Explanation::Base);
    }
    if !store.contains(fact) {
        return Err(Error::FactNotInClosure(fact.to_string()));
    }
    let index = index_facts(store.facts().into_iter().map(|(f, _)| f));
    let empty = Vec::new();
    let mut found: BTreeSet<Derivation> = BTreeSet::new();
    for compiled in &plan.rules {
        let rule = &compiled.rule;
        if rule.head.predicate != fact.predicate {
            continue;
        }
        let mut seed = Partial::default();
        let head_ok = rule
            .head
            .args
            .iter()
            .zip([&fact.subject, &fact.object])
            .all(|(term, value)| match term {
                Term::Const(c) => c == value,
                Term::Var(v) => match seed.bindings.get(v) {
                    Some(bound) => bound == value,
                    None => {
                        seed.bindings.insert(v.clone(), value.clone());
                        true
                    }
                },
            });
        if !head_ok {
            continue;
        }
        // written order, so premises line up with the rule text
        let steps: Vec<Step<'_>> = rule
            .body
            .iter()
            .map(|atom| {
                if atom.is_category_test() {
                    (atom, None)
                } else {
                    (atom, Some(index.get(&atom.predicate).unwrap_or(&empty).as_slice()))
                }
            })
            .collect();
        extend(store, &steps, &mut seed, &mut |partial| {
            if partial.extent == fact.extent {
                found.insert(Derivation {
                    conclusion: fact.clone(),
                    rule: rule.name.clone(),
                    premises: partial.premises.clone(),
                });
            }
        });
    }
    Ok(Explanation::Derived(found.into_iter().collect()))
}

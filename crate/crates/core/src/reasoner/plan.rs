use std::collections::BTreeSet;

use crate::error::Result;
use crate::ontology::FactStore;

use super::{check_rule, Rule, Term};

/// A rule with its body atoms reordered for evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledRule {
    pub rule: Rule,
    /// Indices into `rule.body`, in evaluation order.
    pub order: Vec<usize>,
}

impl CompiledRule {
    pub fn ordered_body(&self) -> impl Iterator<Item = &super::Atom> {
        self.order.iter().map(|&i| &self.rule.body[i])
    }

    /// Positions in `order` that hold relational atoms.
    pub fn relational_positions(&self) -> Vec<usize> {
        self.order
            .iter()
            .enumerate()
            .filter(|(_, &i)| !self.rule.body[i].is_category_test())
            .map(|(pos, _)| pos)
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RulePlan {
    pub rules: Vec<CompiledRule>,
}

impl RulePlan {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Head predicates that also occur in some rule body.
    pub fn recursive_predicates(&self) -> BTreeSet<&str> {
        let heads: BTreeSet<&str> = self
            .rules
            .iter()
            .map(|r| r.rule.head.predicate.as_str())
            .collect();
        self.rules
            .iter()
            .flat_map(|r| r.rule.body.iter())
            .filter(|a| !a.is_category_test() && heads.contains(a.predicate.as_str()))
            .map(|a| a.predicate.as_str())
            .collect()
    }
}

/// Checks every rule and orders body atoms so joins share a bound variable
/// with what precedes them, and category tests run as soon as their variable
/// is bound.
pub fn compile_rules(store: &FactStore, rules: &[Rule]) -> Result<RulePlan> {
    let mut compiled = Vec::with_capacity(rules.len());
    for rule in rules {
        check_rule(store, rule)?;
        compiled.push(CompiledRule {
            order: join_order(rule),
            rule: rule.clone(),
        });
    }
    Ok(RulePlan { rules: compiled })
}

fn join_order(rule: &Rule) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..rule.body.len()).collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    let mut order = Vec::with_capacity(remaining.len());
    let is_bound = |t: &Term, bound: &BTreeSet<&str>| match t {
        Term::Var(v) => bound.contains(v.as_str()),
        Term::Const(_) => true,
    };
    while !remaining.is_empty() {
        let body = &rule.body;
        let pick = remaining
            .iter()
            .position(|&i| body[i].is_category_test() && is_bound(&body[i].args[0], &bound))
            .or_else(|| {
                remaining.iter().position(|&i| {
                    !body[i].is_category_test() && body[i].args.iter().any(|t| is_bound(t, &bound))
                })
            })
            .or_else(|| remaining.iter().position(|&i| !body[i].is_category_test()))
            .unwrap_or(0);
        let idx = remaining.remove(pick);
        bound.extend(body[idx].variables());
        order.push(idx);
    }
    order
}

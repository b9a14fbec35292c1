//! Reference fixpoint: every round re-joins every rule, in written body
//! order, against every known fact, until a round adds nothing. Slow and
//! deliberately independent of the planner and the semi-naive evaluator.

use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{Category, Fact, FactStore, Interval};

use super::{Rule, Term};

type Env = BTreeMap<String, String>;

fn lookup(env: &Env, term: &Term) -> Option<String> {
    match term {
        Term::Const(c) => Some(c.to_string()),
        Term::Var(v) => env.get(v).cloned(),
    }
}

fn in_category(store: &FactStore, test: &str, entity: &str) -> bool {
    match Category::from_keyword(test) {
        Some(wanted) => {
            let Some(kind) = store.kind_of(entity) else {
                return false;
            };
            let Some(mut c) = store.kind_category(kind) else {
                return false;
            };
            loop {
                if c == wanted {
                    return true;
                }
                match c.parent() {
                    Some(p) => c = p,
                    None => return false,
                }
            }
        }
        None => store.kind_of(entity) == Some(test),
    }
}

fn meet(a: Option<Interval>, b: Option<Interval>) -> Result<Option<Interval>, ()> {
    let (Some(a), Some(b)) = (a, b) else {
        return Ok(a.or(b));
    };
    let lo = match (a.start(), b.start()) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    let hi = match (a.end(), b.end()) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if lo > hi {
            return Err(());
        }
    }
    Ok(Some(Interval::new(lo, hi).expect("ordered")))
}

fn solve(
    store: &FactStore,
    facts: &BTreeSet<Fact>,
    rule: &Rule,
    depth: usize,
    env: &mut Env,
    extent: Option<Interval>,
    out: &mut Vec<Fact>,
) {
    if depth == rule.body.len() {
        let subject = lookup(env, &rule.head.args[0]).expect("safe");
        let object = lookup(env, &rule.head.args[1]).expect("safe");
        out.push(Fact::new(&rule.head.predicate, &subject, &object).with_extent(extent));
        return;
    }
    let atom = &rule.body[depth];
    if atom.args.len() == 1 {
        let candidates: Vec<String> = match lookup(env, &atom.args[0]) {
            Some(v) => vec![v],
            None => store.individuals().map(|(id, _)| id.to_string()).collect(),
        };
        for c in candidates {
            if !in_category(store, &atom.predicate, &c) {
                continue;
            }
            let mut next = env.clone();
            if let Term::Var(v) = &atom.args[0] {
                next.insert(v.clone(), c);
            }
            solve(store, facts, rule, depth + 1, &mut next, extent, out);
        }
        return;
    }
    for fact in facts.iter().filter(|f| f.predicate == atom.predicate) {
        let mut next = env.clone();
        let mut ok = true;
        for (term, value) in atom.args.iter().zip([fact.subject.as_str(), fact.object.as_str()]) {
            match term {
                Term::Const(c) => ok &= c.as_str() == value,
                Term::Var(v) => match next.get(v) {
                    Some(bound) => ok &= bound == value,
                    None => {
                        next.insert(v.clone(), value.to_string());
                    }
                },
            }
        }
        if !ok {
            continue;
        }
        if let Ok(e) = meet(extent, fact.extent) {
            solve(store, facts, rule, depth + 1, &mut next, e, out);
        }
    }
}

/// Closure of `store` under `rules`, by naive iteration.
pub fn closure(store: &FactStore, rules: &[Rule]) -> FactStore {
    let mut out = store.clone();
    loop {
        let facts: BTreeSet<Fact> = out.facts().into_iter().map(|(f, _)| f.clone()).collect();
        let before = out.len();
        let mut found: Vec<(Fact, &str)> = Vec::new();
        for rule in rules {
            let mut produced = Vec::new();
            solve(store, &facts, rule, 0, &mut Env::new(), None, &mut produced);
            found.extend(produced.into_iter().map(|f| (f, rule.name.as_str())));
        }
        for (fact, rule) in found {
            if !out.is_base(&fact) {
                out.add_derived(fact, rule);
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

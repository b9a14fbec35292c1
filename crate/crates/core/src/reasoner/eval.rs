use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::ontology::{intersect_extents, EntityId, Fact, FactStore, Interval};

use super::{passes_test, Atom, RulePlan, Term};

/// Variable bindings, accumulated extent and matched facts of a partial
/// body match.
#[derive(Debug, Clone, Default)]
pub(super) struct Partial {
    pub bindings: BTreeMap<String, EntityId>,
    pub extent: Option<Interval>,
    pub premises: Vec<Fact>,
}

impl Partial {
    fn resolve<'a>(&'a self, term: &'a Term) -> Option<&'a EntityId> {
        match term {
            Term::Const(c) => Some(c),
            Term::Var(v) => self.bindings.get(v),
        }
    }

    /// Binds `term` to `value`, or checks it agrees. Returns the variable
    /// that was newly bound, if any.
    fn unify(&mut self, term: &Term, value: &EntityId) -> Result<Option<String>, ()> {
        match self.resolve(term) {
            Some(existing) if existing == value => Ok(None),
            Some(_) => Err(()),
            None => {
                let var = term.as_var().expect("unbound term is a variable").to_string();
                self.bindings.insert(var.clone(), value.clone());
                Ok(Some(var))
            }
        }
    }

    pub fn instantiate(&self, head: &Atom) -> Fact {
        let arg = |i: usize| {
            self.resolve(&head.args[i])
                .expect("safe rule binds every head variable")
                .clone()
        };
        Fact {
            predicate: head.predicate.clone(),
            subject: arg(0),
            object: arg(1),
            extent: self.extent,
        }
    }
}

/// A body atom paired with the facts it may match (`None` for category
/// tests).
pub(super) type Step<'a> = (&'a Atom, Option<&'a [Fact]>);

/// Enumerates every extension of `partial` that satisfies all steps, with a
/// non-empty extent intersection.
pub(super) fn extend(
    store: &FactStore,
    steps: &[Step<'_>],
    partial: &mut Partial,
    emit: &mut dyn FnMut(&Partial),
) {
    let Some(((atom, facts), rest)) = steps.split_first() else {
        emit(partial);
        return;
    };
    match facts {
        None => {
            let term = &atom.args[0];
            if let Some(value) = partial.resolve(term) {
                if passes_test(store, &atom.predicate, value.as_str()) {
                    extend(store, rest, partial, emit);
                }
                return;
            }
            let var = term.as_var().expect("unbound term is a variable").to_string();
            let candidates: Vec<EntityId> = store
                .individuals()
                .map(|(id, _)| id)
                .filter(|id| passes_test(store, &atom.predicate, id.as_str()))
                .cloned()
                .collect();
            for id in candidates {
                partial.bindings.insert(var.clone(), id);
                extend(store, rest, partial, emit);
            }
            partial.bindings.remove(&var);
        }
        Some(facts) => {
            for fact in facts.iter() {
                let Some(extent) = intersect_extents(partial.extent, fact.extent) else {
                    continue;
                };
                let saved_extent = partial.extent;
                let mut newly_bound = Vec::new();
                let ok = [(&atom.args[0], &fact.subject), (&atom.args[1], &fact.object)]
                    .into_iter()
                    .all(|(term, value)| match partial.unify(term, value) {
                        Ok(var) => {
                            newly_bound.extend(var);
                            true
                        }
                        Err(()) => false,
                    });
                if ok {
                    partial.extent = extent;
                    partial.premises.push(fact.clone());
                    extend(store, rest, partial, emit);
                    partial.premises.pop();
                    partial.extent = saved_extent;
                }
                for var in newly_bound {
                    partial.bindings.remove(&var);
                }
            }
        }
    }
}

pub(super) fn index_facts<'a>(facts: impl IntoIterator<Item = &'a Fact>) -> BTreeMap<String, Vec<Fact>> {
    let mut index: BTreeMap<String, Vec<Fact>> = BTreeMap::new();
    for f in facts {
        index.entry(f.predicate.clone()).or_default().push(f.clone());
    }
    index
}

/// Returns `store` plus the least fixpoint of the plan's rules, computed
/// semi-naively. Evaluation starts from base and any derived facts already
/// present. A derived fact's extent is the intersection of its premises'
/// extents; derivations with disjoint premises are dropped.
pub fn infer_closure(store: &FactStore, plan: &RulePlan) -> FactStore {
    let mut out = store.clone();
    let seed: Vec<&Fact> = store.facts().into_iter().map(|(f, _)| f).collect();
    let mut known: HashSet<Fact> = seed.iter().map(|&f| f.clone()).collect();
    let mut all = index_facts(seed);
    let mut old: BTreeMap<String, Vec<Fact>> = BTreeMap::new();
    let mut delta = all.clone();
    let empty: Vec<Fact> = Vec::new();
    let mut first_round = true;

    loop {
        let mut fresh: BTreeSet<Fact> = BTreeSet::new();
        for compiled in &plan.rules {
            let rule = &compiled.rule;
            let body: Vec<&Atom> = compiled.ordered_body().collect();
            let positions = compiled.relational_positions();
            let mut record = |partial: &Partial| {
                let fact = partial.instantiate(&rule.head);
                if !out.is_base(&fact) {
                    out.add_derived(fact.clone(), &rule.name);
                    if !known.contains(&fact) {
                        fresh.insert(fact);
                    }
                }
            };
            if positions.is_empty() {
                if first_round {
                    let steps: Vec<Step<'_>> = body.iter().map(|&a| (a, None)).collect();
                    extend(store, &steps, &mut Partial::default(), &mut record);
                }
                continue;
            }
            for &k in &positions {
                let pred = &body[k].predicate;
                if delta.get(pred).is_none_or(Vec::is_empty) {
                    continue;
                }
                let steps: Vec<Step<'_>> = body
                    .iter()
                    .enumerate()
                    .map(|(pos, &atom)| {
                        if atom.is_category_test() {
                            return (atom, None);
                        }
                        let source = match pos.cmp(&k) {
                            std::cmp::Ordering::Less => &old,
                            std::cmp::Ordering::Equal => &delta,
                            std::cmp::Ordering::Greater => &all,
                        };
                        let facts = source.get(&atom.predicate).unwrap_or(&empty);
                        (atom, Some(facts.as_slice()))
                    })
                    .collect();
                extend(store, &steps, &mut Partial::default(), &mut record);
            }
        }
        first_round = false;
        if fresh.is_empty() {
            break;
        }
        old = all.clone();
        for f in &fresh {
            known.insert(f.clone());
            all.entry(f.predicate.clone()).or_default().push(f.clone());
        }
        delta = index_facts(&fresh);
    }
    out
}

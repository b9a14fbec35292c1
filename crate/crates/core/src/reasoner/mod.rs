//! Rules, property chains and the materializing reasoner.
//!
//! Rules are safe Horn clauses over binary relations. Unary atoms such as
//! `role(?x)` are category tests evaluated against declared kinds; they are
//! never stored as facts. [`infer_closure`] computes the least fixpoint with
//! semi-naive evaluation; [`naive`] holds the reference fixpoint used by the
//! tests.

mod eval;
mod explain;
pub mod naive;
mod plan;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::ontology::{Category, EntityId, FactStore, Time};

pub use eval::infer_closure;
pub use explain::{explain, Derivation, Explanation};
pub use plan::{compile_rules, CompiledRule, RulePlan};

pub const PERMITTED_ACTIVITY: &str = "permitted_activity";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Variable name without the leading `?`.
    Var(String),
    Const(EntityId),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// A relational atom (two arguments) or a category test (one argument).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn binary(predicate: &str, subject: Term, object: Term) -> Atom {
        Atom {
            predicate: predicate.to_string(),
            args: vec![subject, object],
        }
    }

    pub fn test(predicate: &str, arg: Term) -> Atom {
        Atom {
            predicate: predicate.to_string(),
            args: vec![arg],
        }
    }

    pub fn is_category_test(&self) -> bool {
        self.args.len() == 1
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Rule {
    pub fn new(name: &str, head: Atom, body: Vec<Atom>) -> Rule {
        Rule {
            name: name.to_string(),
            head,
            body,
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.head
            .variables()
            .chain(self.body.iter().flat_map(Atom::variables))
            .collect()
    }

    pub fn is_safe(&self) -> bool {
        self.first_unsafe_variable().is_none()
    }

    fn first_unsafe_variable(&self) -> Option<&str> {
        let bound: BTreeSet<&str> = self.body.iter().flat_map(Atom::variables).collect();
        self.head.variables().find(|v| !bound.contains(v))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} :- ", self.name, self.head)?;
        for (i, atom) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{atom}")?;
        }
        f.write_str(".")
    }
}

/// `derived = first o second`, read as derived(a, c) if second(a, b) and
/// first(b, c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub derived: String,
    pub first: String,
    pub second: String,
}

impl ChainSpec {
    pub fn rule_name(&self) -> String {
        format!("{}_o_{}", self.first, self.second)
    }
}

/// Rewrites a property chain as the equivalent Horn rule.
pub fn desugar_chain(store: &FactStore, chain: &ChainSpec) -> Result<Rule> {
    for rel in [&chain.derived, &chain.first, &chain.second] {
        if store.relation(rel).is_none() {
            return Err(Error::UnknownRelation(rel.clone()));
        }
    }
    Ok(Rule::new(
        &chain.rule_name(),
        Atom::binary(&chain.derived, Term::var("a"), Term::var("c")),
        vec![
            Atom::binary(&chain.second, Term::var("a"), Term::var("b")),
            Atom::binary(&chain.first, Term::var("b"), Term::var("c")),
        ],
    ))
}

/// True when `entity` passes the unary test `predicate`: a category keyword
/// tests category descent, a user kind tests kind membership.
pub fn passes_test(store: &FactStore, predicate: &str, entity: &str) -> bool {
    if let Some(category) = Category::from_keyword(predicate) {
        store.category_of(entity).is_some_and(|c| c.is_a(category))
    } else {
        store.kind_of(entity) == Some(predicate)
    }
}

/// Checks that a rule is well formed against the store's declarations:
/// known predicates and constants, correct arities, safety, a derivable
/// head, and head arguments whose body constraints fit the head signature.
pub fn check_rule(store: &FactStore, rule: &Rule) -> Result<()> {
    let malformed = |reason: String| Error::MalformedRule {
        rule: rule.name.clone(),
        reason,
    };
    if rule.body.is_empty() {
        return Err(malformed("empty body".into()));
    }
    if rule.head.is_category_test() {
        return Err(malformed("the head must be a binary relation".into()));
    }
    for atom in std::iter::once(&rule.head).chain(&rule.body) {
        match atom.args.len() {
            1 => {
                if store.kind_category(&atom.predicate).is_none() {
                    return Err(Error::UnknownKind(atom.predicate.clone()));
                }
            }
            2 => {
                if store.relation(&atom.predicate).is_none() {
                    return Err(Error::UnknownRelation(atom.predicate.clone()));
                }
            }
            n => return Err(malformed(format!("{} takes 1 or 2 arguments, got {n}", atom.predicate))),
        }
        for arg in &atom.args {
            if let Term::Const(c) = arg {
                if !store.is_individual(c.as_str()) {
                    return Err(Error::UnknownEntity(c.to_string()));
                }
            }
        }
    }
    if let Some(variable) = rule.first_unsafe_variable() {
        return Err(Error::UnsafeRule {
            rule: rule.name.clone(),
            variable: format!("?{variable}"),
        });
    }
    let head_sig = *store.relation(&rule.head.predicate).expect("checked above");
    if head_sig.base_only {
        return Err(Error::HeadNotDerivable {
            rule: rule.name.clone(),
            predicate: rule.head.predicate.clone(),
        });
    }

    // most specific category each variable is constrained to by the body
    let mut constraint: BTreeMap<&str, Option<Category>> = BTreeMap::new();
    fn narrow<'a>(map: &mut BTreeMap<&'a str, Option<Category>>, var: &'a str, c: Option<Category>) {
        let entry = map.entry(var).or_insert(None);
        *entry = match (*entry, c) {
            (None, c) | (c, None) => c,
            (Some(a), Some(b)) => a.meet(b).or(Some(a)),
        };
    }
    for atom in &rule.body {
        if atom.is_category_test() {
            if let Term::Var(v) = &atom.args[0] {
                narrow(&mut constraint, v, store.kind_category(&atom.predicate));
            }
        } else {
            let sig = store.relation(&atom.predicate).expect("checked above");
            for (arg, slot) in atom.args.iter().zip([sig.subject, sig.object]) {
                if let Term::Var(v) = arg {
                    narrow(&mut constraint, v, slot);
                }
            }
        }
    }
    for (arg, slot) in rule.head.args.iter().zip([head_sig.subject, head_sig.object]) {
        let Some(slot) = slot else { continue };
        let actual = match arg {
            Term::Var(v) => constraint.get(v.as_str()).copied().flatten(),
            Term::Const(c) => store.category_of(c.as_str()),
        };
        match actual {
            Some(c) if c.is_a(slot) => {}
            Some(c) if slot.is_a(c) => {
                return Err(malformed(format!(
                    "{arg} is only known to be {c}, but {} expects {slot}; add a category test",
                    rule.head.predicate
                )))
            }
            Some(c) => {
                return Err(malformed(format!(
                    "{arg} is {c}, but {} expects {slot}",
                    rule.head.predicate
                )))
            }
            None => {
                return Err(malformed(format!(
                    "{arg} is unconstrained, but {} expects {slot}",
                    rule.head.predicate
                )))
            }
        }
    }
    Ok(())
}

/// Activities the role is permitted to perform according to the closure,
/// optionally restricted to facts holding at `at`.
pub fn permitted_activities(
    store: &FactStore,
    role: &str,
    at: Option<Time>,
) -> Result<BTreeSet<EntityId>> {
    let category = store
        .category_of(role)
        .ok_or_else(|| Error::UnknownEntity(role.to_string()))?;
    if !category.is_a(Category::Role) {
        return Err(Error::NotARole(role.to_string()));
    }
    Ok(store
        .facts()
        .into_iter()
        .map(|(f, _)| f)
        .filter(|f| f.predicate == PERMITTED_ACTIVITY && f.subject.as_str() == role)
        .filter(|f| at.is_none_or(|t| f.holds_at(t)))
        .map(|f| f.object.clone())
        .collect())
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::ontology::{Category, FactStore, RelationSig};

    /// Roles, rights and activities with the relations rule_1 joins over.
    pub fn roman_schema() -> FactStore {
        let mut s = FactStore::new();
        s.declare_relation("bears", RelationSig::new(Category::Independent, Category::Role).base_only())
            .unwrap();
        s.declare_relation("belongs_to", RelationSig::new(Category::Role, Category::Role).base_only())
            .unwrap();
        s.declare_relation("has_right", RelationSig::new(Category::Role, Category::Right))
            .unwrap();
        s.declare_relation("has_activity", RelationSig::new(Category::Right, Category::ActivityKind))
            .unwrap();
        s.declare_relation(
            "permitted_activity",
            RelationSig::new(Category::Role, Category::ActivityKind),
        )
        .unwrap();
        for r in ["consul_role", "first_magistrate_role", "senate_role"] {
            s.declare_individual(r, "role").unwrap();
        }
        for r in ["military_command", "religious_authority", "emergency_powers"] {
            s.declare_individual(r, "right").unwrap();
        }
        for a in ["levy_legions", "command_legions", "superintend_ceremonies", "rule_above_laws"] {
            s.declare_individual(a, "activity").unwrap();
        }
        s.declare_individual("hadrian", "person").unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::testing::roman_schema;
    use super::*;

    pub(crate) fn rule_1() -> Rule {
        Rule::new(
            "rule_1",
            Atom::binary(PERMITTED_ACTIVITY, Term::var("x"), Term::var("z")),
            vec![
                Atom::test("role", Term::var("x")),
                Atom::test("right", Term::var("y")),
                Atom::test("activity", Term::var("z")),
                Atom::binary("has_right", Term::var("x"), Term::var("y")),
                Atom::binary("has_activity", Term::var("y"), Term::var("z")),
            ],
        )
    }

    #[test]
    fn rule_1_is_well_formed() {
        let s = roman_schema();
        assert!(rule_1().is_safe());
        check_rule(&s, &rule_1()).unwrap();
        assert_eq!(
            rule_1().variables().into_iter().collect::<Vec<_>>(),
            ["x", "y", "z"]
        );
    }

    #[test]
    fn chain_desugars_to_safe_rule() {
        let s = roman_schema();
        let chain = ChainSpec {
            derived: "has_right".into(),
            first: "has_right".into(),
            second: "belongs_to".into(),
        };
        let rule = desugar_chain(&s, &chain).unwrap();
        assert_eq!(
            rule.to_string(),
            "has_right_o_belongs_to: has_right(?a, ?c) :- belongs_to(?a, ?b), has_right(?b, ?c)."
        );
        assert!(rule.is_safe());
        check_rule(&s, &rule).unwrap();

        let bad = ChainSpec {
            derived: "has_right".into(),
            first: "inherits".into(),
            second: "belongs_to".into(),
        };
        assert_eq!(desugar_chain(&s, &bad), Err(Error::UnknownRelation("inherits".into())));
    }

    #[test]
    fn unsafe_and_underivable_rules() {
        let s = roman_schema();
        let unsafe_rule = Rule::new(
            "r",
            Atom::binary("has_right", Term::var("x"), Term::var("w")),
            vec![Atom::binary("has_right", Term::var("x"), Term::var("y"))],
        );
        assert!(matches!(check_rule(&s, &unsafe_rule), Err(Error::UnsafeRule { .. })));

        let bears_head = Rule::new(
            "r",
            Atom::binary("bears", Term::var("x"), Term::var("y")),
            vec![Atom::binary("bears", Term::var("x"), Term::var("y"))],
        );
        assert!(matches!(check_rule(&s, &bears_head), Err(Error::HeadNotDerivable { .. })));
    }

    #[test]
    fn head_signature_is_checked() {
        let s = roman_schema();
        // has_right's object is a Right, not an activity
        let wrong = Rule::new(
            "r",
            Atom::binary("has_right", Term::var("x"), Term::var("z")),
            vec![Atom::binary("permitted_activity", Term::var("x"), Term::var("z"))],
        );
        assert!(matches!(check_rule(&s, &wrong), Err(Error::MalformedRule { .. })));
    }

    #[test]
    fn permitted_activities_errors() {
        let s = roman_schema();
        assert_eq!(
            permitted_activities(&s, "trajan", None),
            Err(Error::UnknownEntity("trajan".into()))
        );
        assert_eq!(
            permitted_activities(&s, "hadrian", None),
            Err(Error::NotARole("hadrian".into()))
        );
        assert!(permitted_activities(&s, "senate_role", None).unwrap().is_empty());
    }
}

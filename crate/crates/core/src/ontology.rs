//! Category taxonomy, identifiers, temporal extents, facts and the fact store.
//!
//! The taxonomy is closed: continuants persist through time (bearers, roles,
//! rights, procedures), occurrents unfold in time (processes and the activity
//! occurrences they are made of), and universals name the activity kinds and
//! states that facts and procedures refer to.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A node of the fixed category taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Continuant,
    Independent,
    Dependent,
    Realizable,
    Role,
    Procedure,
    Right,
    Occurrent,
    Process,
    ActivityOccurrence,
    TemporalRegion,
    Universal,
    ActivityKind,
    State,
}

impl Category {
    pub const ALL: [Category; 14] = [
        Category::Continuant,
        Category::Independent,
        Category::Dependent,
        Category::Realizable,
        Category::Role,
        Category::Procedure,
        Category::Right,
        Category::Occurrent,
        Category::Process,
        Category::ActivityOccurrence,
        Category::TemporalRegion,
        Category::Universal,
        Category::ActivityKind,
        Category::State,
    ];

    pub fn parent(self) -> Option<Category> {
        use Category::*;
        match self {
            Continuant | Occurrent | Universal => None,
            Independent | Dependent => Some(Continuant),
            Realizable | Right => Some(Dependent),
            Role | Procedure => Some(Realizable),
            Process | ActivityOccurrence | TemporalRegion => Some(Occurrent),
            ActivityKind | State => Some(Universal),
        }
    }

    /// Root-first path to this node.
    pub fn path(self) -> Vec<Category> {
        let mut path = vec![self];
        let mut node = self;
        while let Some(parent) = node.parent() {
            path.push(parent);
            node = parent;
        }
        path.reverse();
        path
    }

    /// The path joined with `/`, e.g. `Continuant/Dependent/Realizable/Role`.
    pub fn path_string(self) -> String {
        self.path()
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>()
            .join("/")
    }

    /// True when `self` is `ancestor` or one of its descendants.
    pub fn is_a(self, ancestor: Category) -> bool {
        let mut node = Some(self);
        while let Some(n) = node {
            if n == ancestor {
                return true;
            }
            node = n.parent();
        }
        false
    }

    pub fn root(self) -> Category {
        self.path()[0]
    }

    pub fn is_continuant(self) -> bool {
        self.is_a(Category::Continuant)
    }

    pub fn is_occurrent(self) -> bool {
        self.is_a(Category::Occurrent)
    }

    pub fn name(self) -> &'static str {
        use Category::*;
        match self {
            Continuant => "Continuant",
            Independent => "Independent",
            Dependent => "Dependent",
            Realizable => "Realizable",
            Role => "Role",
            Procedure => "Procedure",
            Right => "Right",
            Occurrent => "Occurrent",
            Process => "Process",
            ActivityOccurrence => "ActivityOccurrence",
            TemporalRegion => "TemporalRegion",
            Universal => "Universal",
            ActivityKind => "ActivityKind",
            State => "State",
        }
    }

    /// The modeling-language keyword naming this node.
    pub fn keyword(self) -> &'static str {
        use Category::*;
        match self {
            Continuant => "continuant",
            Independent => "independent",
            Dependent => "dependent",
            Realizable => "realizable",
            Role => "role",
            Procedure => "procedure",
            Right => "right",
            Occurrent => "occurrent",
            Process => "process",
            ActivityOccurrence => "occurrence",
            TemporalRegion => "region",
            Universal => "universal",
            ActivityKind => "activity",
            State => "state",
        }
    }

    /// Resolves a category keyword. `person` is accepted as an alias for
    /// `independent`.
    pub fn from_keyword(word: &str) -> Option<Category> {
        if word == "person" {
            return Some(Category::Independent);
        }
        Category::ALL.iter().copied().find(|c| c.keyword() == word)
    }

    /// Deeper of two comparable categories; `None` when they lie on
    /// different branches.
    pub fn meet(self, other: Category) -> Option<Category> {
        if self.is_a(other) {
            Some(self)
        } else if other.is_a(self) {
            Some(other)
        } else {
            None
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Keywords that name built-in kinds, one per category plus `person`.
pub const BUILTIN_KIND_KEYWORDS: [&str; 15] = [
    "continuant",
    "independent",
    "person",
    "dependent",
    "realizable",
    "role",
    "procedure",
    "right",
    "occurrent",
    "process",
    "occurrence",
    "region",
    "universal",
    "activity",
    "state",
];

/// `[a-z][a-z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

/// Name of a declared individual.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(EntityId(name))
        } else {
            Err(Error::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for EntityId {
    fn from(name: &str) -> Self {
        EntityId(name.to_string())
    }
}

impl From<String> for EntityId {
    fn from(name: String) -> Self {
        EntityId(name)
    }
}

impl AsRef<str> for EntityId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for EntityId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A time point in abstract integer ticks.
pub type Time = i64;

/// A temporal extent; `None` on either side means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    start: Option<Time>,
    end: Option<Time>,
}

impl Interval {
    pub fn new(start: Option<Time>, end: Option<Time>) -> Result<Self> {
        if let (Some(s), Some(e)) = (start, end) {
            if s > e {
                return Err(Error::InvalidInterval { start: s, end: e });
            }
        }
        Ok(Interval { start, end })
    }

    pub fn closed(start: Time, end: Time) -> Result<Self> {
        Interval::new(Some(start), Some(end))
    }

    pub fn point(t: Time) -> Self {
        Interval {
            start: Some(t),
            end: Some(t),
        }
    }

    pub fn start(&self) -> Option<Time> {
        self.start
    }

    pub fn end(&self) -> Option<Time> {
        self.end
    }

    pub fn contains(&self, t: Time) -> bool {
        self.start.is_none_or(|s| s <= t) && self.end.is_none_or(|e| t <= e)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = match (self.start, other.start) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let end = match (self.end, other.end) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval::new(start, end).ok()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.intersect(other).is_some()
    }

    /// Smallest interval covering both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let start = match (self.start, other.start) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        let end = match (self.end, other.end) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Interval { start, end }
    }
}

/// Intersection of two optional extents, where `None` is eternal. The outer
/// `None` means the extents are disjoint.
pub fn intersect_extents(a: Option<Interval>, b: Option<Interval>) -> Option<Option<Interval>> {
    match (a, b) {
        (None, other) | (other, None) => Some(other),
        (Some(x), Some(y)) => x.intersect(&y).map(Some),
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        // unbounded start sorts first, unbounded end sorts last
        let start = match (self.start, other.start) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        };
        start.then_with(|| match (self.end, other.end) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        })
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.start {
            Some(s) => write!(f, "[{s}, ")?,
            None => write!(f, "[-inf, ")?,
        }
        match self.end {
            Some(e) => write!(f, "{e}]"),
            None => write!(f, "+inf]"),
        }
    }
}

/// A binary fact. Identity is the predicate, both arguments and the extent;
/// provenance is tracked by the store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub predicate: String,
    pub subject: EntityId,
    pub object: EntityId,
    pub extent: Option<Interval>,
}

impl Fact {
    pub fn new(predicate: &str, subject: &str, object: &str) -> Self {
        Fact {
            predicate: predicate.to_string(),
            subject: subject.into(),
            object: object.into(),
            extent: None,
        }
    }

    pub fn during(mut self, extent: Interval) -> Self {
        self.extent = Some(extent);
        self
    }

    pub fn with_extent(mut self, extent: Option<Interval>) -> Self {
        self.extent = extent;
        self
    }

    /// True when the fact holds at `t`; eternal facts hold everywhere.
    pub fn holds_at(&self, t: Time) -> bool {
        self.extent.is_none_or(|e| e.contains(t))
    }

    pub fn same_triple(&self, other: &Fact) -> bool {
        self.predicate == other.predicate
            && self.subject == other.subject
            && self.object == other.object
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.predicate, self.subject, self.object)?;
        if let Some(extent) = &self.extent {
            write!(f, " {extent}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Base,
    Derived(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Base => f.write_str("base"),
            Provenance::Derived(rule) => write!(f, "derived({rule})"),
        }
    }
}

/// Category signature of a binary relation. `None` slots accept any
/// declared entity (only the built-in `exists`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSig {
    pub subject: Option<Category>,
    pub object: Option<Category>,
    pub base_only: bool,
}

impl RelationSig {
    pub fn new(subject: Category, object: Category) -> Self {
        RelationSig {
            subject: Some(subject),
            object: Some(object),
            base_only: false,
        }
    }

    pub fn base_only(mut self) -> Self {
        self.base_only = true;
        self
    }
}

pub const PARTICIPATES_IN: &str = "participates_in";
pub const PART_OF: &str = "part_of";
pub const EXISTS: &str = "exists";
pub const BEARS: &str = "bears";

/// Relations every store starts with.
pub fn builtin_relations() -> [(&'static str, RelationSig); 3] {
    [
        (
            PARTICIPATES_IN,
            RelationSig::new(Category::Continuant, Category::Occurrent).base_only(),
        ),
        (
            PART_OF,
            RelationSig::new(Category::Occurrent, Category::Occurrent).base_only(),
        ),
        (
            EXISTS,
            RelationSig {
                subject: None,
                object: None,
                base_only: true,
            },
        ),
    ]
}

/// Declared kinds, individuals and relations together with base and
/// derived facts.
///
/// Declarations are made in place while a model is being built.
/// [`assert_fact`](FactStore::assert_fact) and
/// [`retract_fact`](FactStore::retract_fact) leave `self` untouched and
/// return a new store with the derived set cleared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactStore {
    kinds: BTreeMap<String, Category>,
    individuals: BTreeMap<EntityId, String>,
    relations: BTreeMap<String, RelationSig>,
    base: BTreeSet<Fact>,
    derived: BTreeMap<Fact, String>,
}

impl Default for FactStore {
    fn default() -> Self {
        FactStore::new()
    }
}

impl FactStore {
    pub fn new() -> Self {
        FactStore {
            kinds: BTreeMap::new(),
            individuals: BTreeMap::new(),
            relations: builtin_relations()
                .into_iter()
                .map(|(name, sig)| (name.to_string(), sig))
                .collect(),
            base: BTreeSet::new(),
            derived: BTreeMap::new(),
        }
    }

    fn name_taken(&self, name: &str) -> bool {
        Category::from_keyword(name).is_some()
            || self.kinds.contains_key(name)
            || self.individuals.contains_key(name)
            || self.relations.contains_key(name)
    }

    fn claim(&self, name: &str) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::InvalidIdentifier(name.to_string()));
        }
        if self.name_taken(name) {
            return Err(Error::DuplicateDeclaration(name.to_string()));
        }
        Ok(())
    }

    pub fn declare_kind(&mut self, name: &str, category: Category) -> Result<()> {
        self.claim(name)?;
        self.kinds.insert(name.to_string(), category);
        Ok(())
    }

    /// Declares an individual of a built-in (keyword) or user kind.
    pub fn declare_individual(&mut self, name: &str, kind: &str) -> Result<()> {
        self.claim(name)?;
        self.kind_category(kind)
            .ok_or_else(|| Error::UnknownKind(kind.to_string()))?;
        self.individuals.insert(name.into(), kind.to_string());
        // a state is also the predicate of the facts asserting it
        if self.kind_category(kind) == Some(Category::State) {
            self.relations.insert(
                name.to_string(),
                RelationSig::new(Category::Continuant, Category::Continuant).base_only(),
            );
        }
        Ok(())
    }

    pub fn declare_relation(&mut self, name: &str, sig: RelationSig) -> Result<()> {
        self.claim(name)?;
        self.relations.insert(name.to_string(), sig);
        Ok(())
    }

    /// Category of a built-in or user kind.
    pub fn kind_category(&self, kind: &str) -> Option<Category> {
        Category::from_keyword(kind).or_else(|| self.kinds.get(kind).copied())
    }

    pub fn kind_of(&self, entity: &str) -> Option<&str> {
        self.individuals.get(entity).map(String::as_str)
    }

    pub fn category_of(&self, entity: &str) -> Option<Category> {
        self.kind_of(entity).and_then(|k| self.kind_category(k))
    }

    /// Category of a kind or of an individual's kind.
    pub fn categorize(&self, name: &str) -> Result<Category> {
        self.kind_category(name)
            .or_else(|| self.category_of(name))
            .ok_or_else(|| Error::UnknownKind(name.to_string()))
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSig> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &RelationSig)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn kinds(&self) -> impl Iterator<Item = (&str, Category)> {
        self.kinds.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn individuals(&self) -> impl Iterator<Item = (&EntityId, &str)> {
        self.individuals.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn is_individual(&self, name: &str) -> bool {
        self.individuals.contains_key(name)
    }

    /// Individuals whose category falls under `category`.
    pub fn individuals_in(&self, category: Category) -> impl Iterator<Item = &EntityId> + '_ {
        self.individuals
            .iter()
            .filter(move |(_, kind)| {
                self.kind_category(kind)
                    .is_some_and(|c| c.is_a(category))
            })
            .map(|(id, _)| id)
    }

    pub fn check_signature(&self, fact: &Fact) -> Result<()> {
        let sig = self
            .relations
            .get(&fact.predicate)
            .ok_or_else(|| Error::UnknownRelation(fact.predicate.clone()))?;
        let violation = |reason: String| Error::SignatureViolation {
            predicate: fact.predicate.clone(),
            subject: fact.subject.to_string(),
            object: fact.object.to_string(),
            reason,
        };
        for (arg, slot) in [(&fact.subject, sig.subject), (&fact.object, sig.object)] {
            let actual = self
                .category_of(arg.as_str())
                .ok_or_else(|| Error::UnknownEntity(arg.to_string()))?;
            if let Some(expected) = slot {
                if !actual.is_a(expected) {
                    return Err(violation(format!(
                        "'{arg}' is {actual}, expected {expected}"
                    )));
                }
            }
        }
        if fact.predicate == EXISTS && fact.subject != fact.object {
            return Err(violation("exists takes the same entity twice".into()));
        }
        Ok(())
    }

    pub(crate) fn insert_base(&mut self, fact: Fact) -> Result<()> {
        self.check_signature(&fact)?;
        self.derived.clear();
        self.base.insert(fact);
        Ok(())
    }

    /// Returns a store whose base set includes `fact`; derived facts are
    /// dropped and must be re-inferred.
    pub fn assert_fact(&self, fact: Fact) -> Result<FactStore> {
        let mut next = self.clone();
        next.insert_base(fact)?;
        Ok(next)
    }

    /// Returns a store without the base fact `fact`. Absent facts are a
    /// no-op; derived facts cannot be retracted.
    pub fn retract_fact(&self, fact: &Fact) -> Result<FactStore> {
        if self.derived.contains_key(fact) {
            return Err(Error::CannotRetractDerived(fact.to_string()));
        }
        let mut next = self.clone();
        if next.base.remove(fact) {
            next.derived.clear();
        }
        Ok(next)
    }

    /// Returns a store with `fact` added to the derived set under `rule`.
    /// Used by loaders that emit derived facts outside the rule set.
    pub fn with_derived(&self, fact: Fact, rule: &str) -> Result<FactStore> {
        self.check_signature(&fact)?;
        if self.base.contains(&fact) {
            return Err(Error::DerivedShadowsBase(fact.to_string()));
        }
        let mut next = self.clone();
        next.add_derived(fact, rule);
        Ok(next)
    }

    /// Records a derived fact; keeps the smallest rule name when the fact
    /// already has one. Returns true if the fact is new.
    pub(crate) fn add_derived(&mut self, fact: Fact, rule: &str) -> bool {
        match self.derived.get_mut(&fact) {
            Some(existing) => {
                if rule < existing.as_str() {
                    *existing = rule.to_string();
                }
                false
            }
            None => {
                self.derived.insert(fact, rule.to_string());
                true
            }
        }
    }

    pub fn clear_derived(&self) -> FactStore {
        let mut next = self.clone();
        next.derived.clear();
        next
    }

    pub fn base_facts(&self) -> impl Iterator<Item = &Fact> {
        self.base.iter()
    }

    pub fn derived_facts(&self) -> impl Iterator<Item = (&Fact, &str)> {
        self.derived.iter().map(|(f, r)| (f, r.as_str()))
    }

    pub fn is_base(&self, fact: &Fact) -> bool {
        self.base.contains(fact)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.base.contains(fact) || self.derived.contains_key(fact)
    }

    pub fn provenance(&self, fact: &Fact) -> Option<Provenance> {
        if self.base.contains(fact) {
            Some(Provenance::Base)
        } else {
            self.derived
                .get(fact)
                .map(|rule| Provenance::Derived(rule.clone()))
        }
    }

    /// Base and derived facts in canonical order.
    pub fn facts(&self) -> Vec<(&Fact, Provenance)> {
        let mut all: Vec<(&Fact, Provenance)> = self
            .base
            .iter()
            .map(|f| (f, Provenance::Base))
            .chain(
                self.derived
                    .iter()
                    .map(|(f, r)| (f, Provenance::Derived(r.clone()))),
            )
            .collect();
        all.sort();
        all
    }

    pub fn len(&self) -> usize {
        self.base.len() + self.derived.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One line per fact, `predicate(subject, object) [start, end] # provenance`,
    /// sorted by predicate, subject, object and extent.
    pub fn canonical_export(&self) -> String {
        render_lines(self.facts())
    }

    /// Like [`canonical_export`](FactStore::canonical_export) but over base
    /// facts only.
    pub fn base_export(&self) -> String {
        render_lines(self.base.iter().map(|f| (f, Provenance::Base)))
    }
}

pub fn export_line(fact: &Fact, provenance: &Provenance) -> String {
    format!("{fact} # {provenance}")
}

pub(crate) fn render_lines<'a, P>(facts: impl IntoIterator<Item = (&'a Fact, P)>) -> String
where
    P: std::borrow::Borrow<Provenance>,
{
    let mut out = String::new();
    for (fact, provenance) in facts {
        out.push_str(&export_line(fact, provenance.borrow()));
        out.push('\n');
    }
    out
}

//! Snapshot and span views over a closed store.
//!
//! A snapshot is the continuant-side picture at one time point. A span view
//! lists the occurrents unfolding within a window together with the
//! continuants participating in them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ontology::{
    render_lines, Category, EntityId, Fact, FactStore, Interval, Provenance, Time, EXISTS,
    PARTICIPATES_IN,
};

/// True iff some closure fact with the pattern's predicate, subject and
/// object holds at `t`. The pattern's extent is ignored.
pub fn holds_at(store: &FactStore, pattern: &Fact, t: Time) -> Result<bool> {
    if store.relation(&pattern.predicate).is_none() {
        return Err(Error::UnknownRelation(pattern.predicate.clone()));
    }
    Ok(store
        .facts()
        .into_iter()
        .any(|(f, _)| f.same_triple(pattern) && f.holds_at(t)))
}

/// An individual exists at `t` unless it has `exists` facts and none of
/// them holds at `t`.
pub fn exists_at(store: &FactStore, entity: &str, t: Time) -> bool {
    let mut spans = store
        .base_facts()
        .filter(|f| f.predicate == EXISTS && f.subject.as_str() == entity)
        .peekable();
    spans.peek().is_none() || spans.any(|f| f.holds_at(t))
}

fn is_occurrent(store: &FactStore, entity: &str) -> bool {
    store.category_of(entity).is_some_and(Category::is_occurrent)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapView {
    pub at: Time,
    /// Facts holding at `at` with no occurrent argument, in canonical order.
    pub facts: Vec<(Fact, Provenance)>,
    /// Continuants existing at `at`.
    pub entities: BTreeSet<EntityId>,
}

impl SnapView {
    /// `snapshot t=<t>` followed by the facts in export format.
    pub fn render(&self) -> String {
        format!(
            "snapshot t={}\n{}",
            self.at,
            render_lines(self.facts.iter().map(|(f, p)| (f, p)))
        )
    }
}

pub fn snapshot(store: &FactStore, t: Time) -> SnapView {
    let facts = store
        .facts()
        .into_iter()
        .filter(|(f, _)| f.holds_at(t))
        .filter(|(f, _)| {
            !is_occurrent(store, f.subject.as_str()) && !is_occurrent(store, f.object.as_str())
        })
        .map(|(f, p)| (f.clone(), p))
        .collect();
    let entities = store
        .individuals_in(Category::Continuant)
        .filter(|id| exists_at(store, id.as_str(), t))
        .cloned()
        .collect();
    SnapView { at: t, facts, entities }
}

/// Temporal extent of an occurrent: its `exists` facts if any, otherwise
/// the hull of every closure fact mentioning it. The outer `None` means no
/// fact mentions it; the inner `None` means it is unbounded.
pub fn occurrent_extent(store: &FactStore, occurrent: &str) -> Option<Option<Interval>> {
    let mentions = |f: &&Fact| f.subject.as_str() == occurrent || f.object.as_str() == occurrent;
    let all = store.facts();
    let declared: Vec<&Fact> = all
        .iter()
        .map(|(f, _)| *f)
        .filter(|f| f.predicate == EXISTS)
        .filter(mentions)
        .collect();
    let relevant: Vec<&Fact> = if declared.is_empty() {
        all.iter().map(|(f, _)| *f).filter(mentions).collect()
    } else {
        declared
    };
    let mut extents = relevant.iter().map(|f| f.extent);
    let first = extents.next()?;
    Some(extents.fold(first, |acc, e| match (acc, e) {
        (Some(a), Some(b)) => Some(a.hull(&b)),
        _ => None,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanView {
    pub window: Interval,
    /// Occurrents overlapping the window with their extents (`None` is
    /// unbounded).
    pub occurrents: Vec<(EntityId, Option<Interval>)>,
    /// `participates_in` facts whose occurrent is listed.
    pub links: Vec<(Fact, Provenance)>,
}

impl SpanView {
    pub fn render(&self) -> String {
        let mut out = format!(
            "span [{},{}]\n",
            self.window.start().expect("closed window"),
            self.window.end().expect("closed window")
        );
        for (id, extent) in &self.occurrents {
            match extent {
                Some(e) => out.push_str(&format!("occurrent {id} {e}\n")),
                None => out.push_str(&format!("occurrent {id}\n")),
            }
        }
        out.push_str(&render_lines(self.links.iter().map(|(f, p)| (f, p))));
        out
    }
}

pub fn span_query(store: &FactStore, start: Time, end: Time) -> Result<SpanView> {
    if start > end {
        return Err(Error::EmptyWindow { start, end });
    }
    let window = Interval::closed(start, end)?;
    let occurrents: Vec<(EntityId, Option<Interval>)> = store
        .individuals_in(Category::Occurrent)
        .filter_map(|id| {
            let extent = occurrent_extent(store, id.as_str())?;
            let overlaps = extent.is_none_or(|e| e.overlaps(&window));
            overlaps.then(|| (id.clone(), extent))
        })
        .collect();
    let listed: BTreeSet<&str> = occurrents.iter().map(|(id, _)| id.as_str()).collect();
    let links = store
        .facts()
        .into_iter()
        .filter(|(f, _)| f.predicate == PARTICIPATES_IN && listed.contains(f.object.as_str()))
        .map(|(f, p)| (f.clone(), p))
        .collect();
    Ok(SpanView {
        window,
        occurrents,
        links,
    })
}

/// Continuants participating in `occurrent`.
pub fn participants(store: &FactStore, occurrent: &str) -> Result<BTreeSet<EntityId>> {
    let category = store
        .category_of(occurrent)
        .ok_or_else(|| Error::UnknownEntity(occurrent.to_string()))?;
    if !category.is_occurrent() {
        return Err(Error::NotAnOccurrent(occurrent.to_string()));
    }
    Ok(store
        .facts()
        .into_iter()
        .filter(|(f, _)| f.predicate == PARTICIPATES_IN && f.object.as_str() == occurrent)
        .map(|(f, _)| f.subject.clone())
        .collect())
}

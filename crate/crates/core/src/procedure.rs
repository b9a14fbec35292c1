//! Procedures and the processes that realize them.
//!
//! A procedure is a continuant: an ordered list of guarded steps, each
//! naming an activity kind and the role its performer must bear. A process
//! trace is the occurrent side, a time-ordered list of activity events. A
//! trace realizes a procedure when its steps can be mapped, in order and
//! without reuse, onto events whose actor bears the step's role and whose
//! guard state holds at the event time, within the procedure's maximum
//! duration.

use std::fmt;

use crate::error::{Error, Result};
use crate::ontology::{EntityId, Fact, FactStore, Interval, Time, BEARS, PARTICIPATES_IN, PART_OF};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub name: String,
    pub activity: EntityId,
    pub role: EntityId,
    pub guard: Option<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Procedure {
    pub name: EntityId,
    pub steps: Vec<Step>,
    pub max_duration: Option<Time>,
}

impl Procedure {
    pub fn step_index(&self, name: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub time: Time,
    pub activity: EntityId,
    pub actor: EntityId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessTrace {
    pub name: EntityId,
    pub events: Vec<Event>,
}

impl ProcessTrace {
    /// Name of the activity occurrence materialized for event `index`
    /// (0-based): `<trace>_<index + 1>`.
    pub fn occurrence_name(&self, index: usize) -> EntityId {
        format!("{}_{}", self.name, index + 1).into()
    }

    /// Hull of the event times, or `None` for an empty trace.
    pub fn extent(&self) -> Option<Interval> {
        let first = self.events.first()?.time;
        let last = self.events.last()?.time;
        Interval::closed(first.min(last), first.max(last)).ok()
    }

    /// `participates_in(actor, occurrence)` and `part_of(occurrence, trace)`
    /// for every event, each over the event's time point.
    pub fn occurrence_facts(&self) -> Vec<Fact> {
        self.events
            .iter()
            .enumerate()
            .flat_map(|(i, e)| {
                let occ = self.occurrence_name(i);
                let at = Interval::point(e.time);
                [
                    Fact::new(PARTICIPATES_IN, e.actor.as_str(), occ.as_str()).during(at),
                    Fact::new(PART_OF, occ.as_str(), self.name.as_str()).during(at),
                ]
            })
            .collect()
    }

    pub fn is_time_ordered(&self) -> bool {
        self.events.windows(2).all(|w| w[0].time <= w[1].time)
    }
}

/// Why a step could not be matched. Ordered by strength, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FailureReason {
    MissingEvent,
    RoleNotBorne,
    GuardFalse,
    DurationExceeded,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::MissingEvent => "missing-event",
            FailureReason::RoleNotBorne => "role-not-borne",
            FailureReason::GuardFalse => "guard-false",
            FailureReason::DurationExceeded => "duration-exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepMatch {
    pub step: String,
    pub event: usize,
    pub occurrence: EntityId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub step: String,
    pub step_index: usize,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationReport {
    pub realized: bool,
    /// Step-to-event mapping, present iff realized.
    pub assignment: Vec<StepMatch>,
    /// Present iff not realized.
    pub failure: Option<Failure>,
}

impl RealizationReport {
    /// Event indices of the assignment, one per step.
    pub fn event_indices(&self) -> Vec<usize> {
        self.assignment.iter().map(|m| m.event).collect()
    }

    /// Matched time window `[first, last]`, when realized.
    pub fn window(&self, trace: &ProcessTrace) -> Option<Interval> {
        let first = trace.events[self.assignment.first()?.event].time;
        let last = trace.events[self.assignment.last()?.event].time;
        Interval::closed(first, last).ok()
    }
}

/// `REALIZED step=occurrence ...` or `FAILED step=<name> reason=<reason>`.
impl fmt::Display for RealizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => {
                f.write_str("REALIZED")?;
                for m in &self.assignment {
                    write!(f, " {}={}", m.step, m.occurrence)?;
                }
                Ok(())
            }
            Some(failure) => write!(f, "FAILED step={} reason={}", failure.step, failure.reason),
        }
    }
}

/// True when some fact with the guard state as predicate holds at `t`.
/// Guards read base facts only.
pub fn guard_holds(store: &FactStore, state: &str, t: Time) -> bool {
    store
        .base_facts()
        .any(|f| f.predicate == state && f.holds_at(t))
}

/// True when the closure has `bears(actor, role)` holding at `t`.
pub fn bears_at(store: &FactStore, actor: &str, role: &str, t: Time) -> bool {
    store.facts().into_iter().any(|(f, _)| {
        f.predicate == BEARS && f.subject.as_str() == actor && f.object.as_str() == role && f.holds_at(t)
    })
}

/// `Ok` if `event` can realize `step`, otherwise the strongest reason it
/// cannot.
pub fn admissible(store: &FactStore, step: &Step, event: &Event) -> Result<(), FailureReason> {
    if event.activity != step.activity {
        return Err(FailureReason::MissingEvent);
    }
    let guard_ok = step
        .guard
        .as_ref()
        .is_none_or(|g| guard_holds(store, g.as_str(), event.time));
    if !guard_ok {
        return Err(FailureReason::GuardFalse);
    }
    if !bears_at(store, event.actor.as_str(), step.role.as_str(), event.time) {
        return Err(FailureReason::RoleNotBorne);
    }
    Ok(())
}

struct Search<'a> {
    ok: Vec<Vec<bool>>,
    times: Vec<Time>,
    max: Option<Time>,
    proc: &'a Procedure,
}

impl Search<'_> {
    /// Depth-first in increasing event order, so the first complete
    /// assignment found is the lexicographically smallest.
    fn run(&self, k: usize, from: usize, picked: &mut Vec<usize>) -> bool {
        if k == self.proc.steps.len() {
            return true;
        }
        for i in from..self.times.len() {
            if !self.ok[k][i] {
                continue;
            }
            if let (Some(max), Some(&first)) = (self.max, picked.first()) {
                // event times are non-decreasing, later events only widen the span
                if self.times[i] - self.times[first] > max {
                    break;
                }
            }
            picked.push(i);
            if self.run(k + 1, i + 1, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
}

/// Checks whether `trace` realizes `proc` over the closed store.
///
/// On success the lexicographically smallest event-index assignment is
/// reported. On failure the report cites the first step the greedy earliest
/// assignment cannot place, with the strongest reason seen among the
/// candidate events (guard-false over role-not-borne over missing-event);
/// if every step can be placed but no assignment fits the maximum
/// duration, it cites the first step whose greedy event breaks the bound.
pub fn check_realization(
    store: &FactStore,
    proc: &Procedure,
    trace: &ProcessTrace,
) -> RealizationReport {
    let verdicts: Vec<Vec<Result<(), FailureReason>>> = proc
        .steps
        .iter()
        .map(|s| trace.events.iter().map(|e| admissible(store, s, e)).collect())
        .collect();
    let search = Search {
        ok: verdicts
            .iter()
            .map(|row| row.iter().map(Result::is_ok).collect())
            .collect(),
        times: trace.events.iter().map(|e| e.time).collect(),
        max: proc.max_duration,
        proc,
    };
    let mut picked = Vec::new();
    if search.run(0, 0, &mut picked) {
        return RealizationReport {
            realized: true,
            assignment: picked
                .iter()
                .zip(&proc.steps)
                .map(|(&event, step)| StepMatch {
                    step: step.name.clone(),
                    event,
                    occurrence: trace.occurrence_name(event),
                })
                .collect(),
            failure: None,
        };
    }

    let fail = |k: usize, reason| RealizationReport {
        realized: false,
        assignment: Vec::new(),
        failure: Some(Failure {
            step: proc.steps[k].name.clone(),
            step_index: k,
            reason,
        }),
    };
    let mut greedy = Vec::with_capacity(proc.steps.len());
    let mut from = 0;
    for (k, row) in verdicts.iter().enumerate() {
        match (from..row.len()).find(|&i| row[i].is_ok()) {
            Some(i) => {
                greedy.push(i);
                from = i + 1;
            }
            None => {
                let reason = row[from.min(row.len())..]
                    .iter()
                    .filter_map(|v| v.err())
                    .max()
                    .unwrap_or(FailureReason::MissingEvent);
                return fail(k, reason);
            }
        }
    }
    let first = search.times[greedy[0]];
    let max = proc.max_duration.expect("greedy assignment fits when unbounded");
    let k = greedy
        .iter()
        .position(|&i| search.times[i] - first > max)
        .unwrap_or(greedy.len() - 1);
    fail(k, FailureReason::DurationExceeded)
}

/// The next step that could be taken at `t` after the prefix `matched`
/// (event indices for the first steps): empty when every step is matched,
/// its guard is false at `t`, or no declared individual bears its role at
/// `t`.
pub fn enabled_steps<'p>(
    store: &FactStore,
    proc: &'p Procedure,
    matched: &[usize],
    t: Time,
) -> Result<Vec<&'p Step>> {
    if matched.len() > proc.steps.len() {
        return Err(Error::InvalidPrefix(format!(
            "{} matches for {} steps",
            matched.len(),
            proc.steps.len()
        )));
    }
    if matched.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPrefix(format!(
            "event indices {matched:?} are not increasing"
        )));
    }
    let Some(step) = proc.steps.get(matched.len()) else {
        return Ok(Vec::new());
    };
    let guard_ok = step
        .guard
        .as_ref()
        .is_none_or(|g| guard_holds(store, g.as_str(), t));
    let borne = store
        .individuals()
        .any(|(id, _)| bears_at(store, id.as_str(), step.role.as_str(), t));
    Ok(if guard_ok && borne { vec![step] } else { Vec::new() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub trace: ProcessTrace,
    /// `part_of(a, composite)` and `part_of(b, composite)`.
    pub part_of: Vec<Fact>,
}

/// Concatenates two traces into `<a>_<b>`. The first must end no later
/// than the second starts.
pub fn compose_traces(a: &ProcessTrace, b: &ProcessTrace) -> Result<Composition> {
    if let (Some(last), Some(first)) = (a.events.last(), b.events.first()) {
        if last.time > first.time {
            return Err(Error::OverlapViolation {
                first: a.name.to_string(),
                second: b.name.to_string(),
                end: last.time,
                start: first.time,
            });
        }
    }
    let trace = ProcessTrace {
        name: format!("{}_{}", a.name, b.name).into(),
        events: a.events.iter().chain(&b.events).cloned().collect(),
    };
    let part_of = [a, b]
        .iter()
        .map(|part| {
            Fact::new(PART_OF, part.name.as_str(), trace.name.as_str()).with_extent(part.extent())
        })
        .collect();
    Ok(Composition { trace, part_of })
}

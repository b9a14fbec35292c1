//! Seeded generators and brute-force oracles shared by the integration
//! tests. Not every test binary uses every helper.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rcl::procedure::{Event, Step};
use rcl::rcl::Model;
use rcl::{Category, Fact, FactStore, Interval, ProcessTrace, Procedure, Time};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const SCHEMA: &str = "\
relation bears(independent, role) base
relation belongs_to(role, role) base
relation has_right(role, right)
relation has_activity(right, activity) base
relation permitted_activity(role, activity)
rule rule_1: permitted_activity(?x, ?z) :- role(?x), has_right(?x, ?y), right(?y), has_activity(?y, ?z), activity(?z).
chain has_right = has_right o belongs_to
";

pub fn load(source: &str) -> Model {
    let (model, diags) = rcl::rcl::load(source);
    assert!(diags.is_empty(), "{diags:?}\n{source}");
    model.expect("clean source")
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}_{i}")).collect()
}

/// `None` (eternal) about a quarter of the time, otherwise a closed
/// interval inside `[0, horizon]`.
pub fn extent(rng: &mut impl Rng, horizon: Time) -> Option<Interval> {
    if rng.gen_bool(0.25) {
        return None;
    }
    let a = rng.gen_range(0..=horizon);
    let b = rng.gen_range(0..=horizon);
    Some(Interval::closed(a.min(b), a.max(b)).unwrap())
}

fn assert_all(model: &mut Model, facts: Vec<Fact>) {
    for fact in facts {
        model.store = model.store.assert_fact(fact).expect("generated facts fit the schema");
    }
}

/// Roles, rights and activities (up to 10 each), up to 60 random facts with
/// extents in `[0, 50]`, and the rule_1 plus `belongs_to` chain rule set.
pub fn random_rights_model(rng: &mut impl Rng) -> Model {
    let roles = names("role", rng.gen_range(1..=10));
    let rights = names("right", rng.gen_range(1..=10));
    let activities = names("act", rng.gen_range(1..=10));
    let persons = names("person", rng.gen_range(1..=3));
    let mut src = SCHEMA.to_string();
    for (kw, list) in [
        ("role", &roles),
        ("right", &rights),
        ("activity", &activities),
        ("person", &persons),
    ] {
        for name in list {
            src.push_str(&format!("{kw} {name}\n"));
        }
    }
    let mut model = load(&src);
    let pick = |rng: &mut dyn rand::RngCore, v: &Vec<String>| v.choose(rng).unwrap().clone();
    let mut facts = Vec::new();
    for _ in 0..rng.gen_range(0..=60) {
        let (p, s, o) = match rng.gen_range(0..10) {
            0..=2 => ("has_right", pick(rng, &roles), pick(rng, &rights)),
            3..=5 => ("has_activity", pick(rng, &rights), pick(rng, &activities)),
            6..=7 => ("belongs_to", pick(rng, &roles), pick(rng, &roles)),
            _ => ("bears", pick(rng, &persons), pick(rng, &roles)),
        };
        facts.push(Fact::new(p, &s, &o).with_extent(extent(rng, 50)));
    }
    assert_all(&mut model, facts);
    model
}

/// A store mixing continuants and occurrents: persons bearing roles,
/// processes with activity occurrences, `exists` spans, and rights.
pub fn random_timeline_store(rng: &mut impl Rng) -> FactStore {
    let mut model = random_rights_model(rng);
    let persons: Vec<String> = model
        .store
        .individuals_in(Category::Independent)
        .map(|id| id.to_string())
        .collect();
    let processes = names("proc", rng.gen_range(1..=4));
    let occurrences = names("occ", rng.gen_range(0..=8));
    for p in &processes {
        model.store.declare_individual(p, "process").unwrap();
    }
    for o in &occurrences {
        model.store.declare_individual(o, "occurrence").unwrap();
    }
    model.store.declare_individual("war", "state").unwrap();
    let mut facts = Vec::new();
    for o in &occurrences {
        let at = Interval::point(rng.gen_range(0..=50));
        let person = persons.choose(rng).unwrap();
        facts.push(Fact::new("participates_in", person, o).during(at));
        if rng.gen_bool(0.7) {
            facts.push(Fact::new("part_of", o, processes.choose(rng).unwrap()).during(at));
        }
    }
    for p in &processes {
        if rng.gen_bool(0.5) {
            facts.push(Fact::new("exists", p, p).with_extent(extent(rng, 50)));
        }
    }
    for person in &persons {
        if rng.gen_bool(0.5) {
            facts.push(Fact::new("exists", person, person).with_extent(extent(rng, 50)));
        }
        if rng.gen_bool(0.5) {
            facts.push(Fact::new("war", person, person).with_extent(extent(rng, 50)));
        }
    }
    assert_all(&mut model, facts);
    model.closure()
}

pub struct RealizationCase {
    pub store: FactStore,
    pub procedure: Procedure,
    pub trace: ProcessTrace,
}

const ACTORS: [&str; 3] = ["ann", "bob", "cyd"];
const ROLES: [&str; 3] = ["r0", "r1", "r2"];
const ACTIVITIES: [&str; 3] = ["a0", "a1", "a2"];
const STATES: [&str; 2] = ["s0", "s1"];

fn realization_store(rng: &mut impl Rng) -> FactStore {
    let mut src = String::from(
        "relation bears(independent, role) base\nrelation belongs_to(role, role) base\n\
         relation holds_role(independent, role)\nindependent world\n\
         rule inherit: holds_role(?p, ?r) :- bears(?p, ?q), belongs_to(?q, ?r).\n",
    );
    for a in ACTORS {
        src.push_str(&format!("person {a}\n"));
    }
    for r in ROLES {
        src.push_str(&format!("role {r}\n"));
    }
    for a in ACTIVITIES {
        src.push_str(&format!("activity {a}\n"));
    }
    for s in STATES {
        src.push_str(&format!("state {s}\n"));
    }
    let mut model = load(&src);
    let mut facts = Vec::new();
    for actor in ACTORS {
        for role in ROLES {
            if rng.gen_bool(0.6) {
                facts.push(Fact::new("bears", actor, role).with_extent(extent(rng, 20)));
            }
        }
    }
    for state in STATES {
        for _ in 0..rng.gen_range(0..=2) {
            facts.push(Fact::new(state, "world", "world").with_extent(extent(rng, 20)));
        }
    }
    assert_all(&mut model, facts);
    model.closure()
}

pub fn random_procedure(rng: &mut impl Rng) -> Procedure {
    let steps = (0..rng.gen_range(1..=4))
        .map(|i| Step {
            name: format!("step{i}"),
            activity: (*ACTIVITIES.choose(rng).unwrap()).into(),
            role: (*ROLES.choose(rng).unwrap()).into(),
            guard: rng
                .gen_bool(0.3)
                .then(|| (*STATES.choose(rng).unwrap()).into()),
        })
        .collect();
    Procedure {
        name: "proc".into(),
        steps,
        max_duration: rng.gen_bool(0.5).then(|| rng.gen_range(1..=12)),
    }
}

/// Up to `max_events` events at non-decreasing times from `from`.
pub fn random_events(rng: &mut impl Rng, from: Time, max_events: usize) -> Vec<Event> {
    let mut t = from;
    (0..rng.gen_range(0..=max_events))
        .map(|_| {
            t += rng.gen_range(0..=4);
            Event {
                time: t,
                activity: (*ACTIVITIES.choose(rng).unwrap()).into(),
                actor: (*ACTORS.choose(rng).unwrap()).into(),
            }
        })
        .collect()
}

/// Half of the traces follow the procedure's activity sequence, with noise
/// events mixed in, so a good share of cases are realizable.
pub fn random_realization_case(rng: &mut impl Rng) -> RealizationCase {
    let store = realization_store(rng);
    let procedure = random_procedure(rng);
    let from = rng.gen_range(0..=6);
    let mut events = random_events(rng, from, 8);
    if rng.gen_bool(0.5) {
        events.truncate(8 - procedure.steps.len());
        let mut planted: Vec<Event> = procedure
            .steps
            .iter()
            .map(|s| Event {
                time: rng.gen_range(0..=20),
                activity: s.activity.clone(),
                actor: (*ACTORS.choose(rng).unwrap()).into(),
            })
            .collect();
        let mut times: Vec<Time> = planted.iter().map(|e| e.time).collect();
        times.sort();
        for (e, t) in planted.iter_mut().zip(times) {
            e.time = t;
        }
        events.extend(planted);
        events.sort_by_key(|e| e.time);
    }
    RealizationCase {
        store,
        procedure,
        trace: ProcessTrace {
            name: "tr".into(),
            events,
        },
    }
}

fn holds(store: &FactStore, predicate: &str, subject: &str, object: &str, t: Time) -> bool {
    store.facts().iter().any(|(f, _)| {
        f.predicate == predicate
            && f.subject.as_str() == subject
            && f.object.as_str() == object
            && f.extent.is_none_or(|e| e.start().is_none_or(|s| s <= t) && e.end().is_none_or(|x| t <= x))
    })
}

fn guard_holds(store: &FactStore, state: &str, t: Time) -> bool {
    store.base_facts().any(|f| {
        f.predicate == state
            && f.extent.is_none_or(|e| e.start().is_none_or(|s| s <= t) && e.end().is_none_or(|x| t <= x))
    })
}

/// Every strictly increasing choice of `k` indices out of `n`, in
/// lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive realization check: the lexicographically smallest admissible
/// assignment, if any.
pub fn brute_force(store: &FactStore, procedure: &Procedure, trace: &ProcessTrace) -> Option<Vec<usize>> {
    combinations(trace.events.len(), procedure.steps.len())
        .into_iter()
        .find(|assignment| {
            let fits = procedure.steps.iter().zip(assignment).all(|(step, &i)| {
                let e = &trace.events[i];
                e.activity == step.activity
                    && holds(store, "bears", e.actor.as_str(), step.role.as_str(), e.time)
                    && step
                        .guard
                        .as_ref()
                        .is_none_or(|g| guard_holds(store, g.as_str(), e.time))
            });
            let span = match (assignment.first(), assignment.last()) {
                (Some(&a), Some(&b)) => trace.events[b].time - trace.events[a].time,
                _ => 0,
            };
            fits && procedure.max_duration.is_none_or(|d| span <= d)
        })
}

/// Random but valid model text, with irregular spacing and comments so the
/// printer has something to normalize.
pub fn random_model_source(rng: &mut impl Rng) -> String {
    let space = |rng: &mut ChaCha8Rng| [" ", "  ", "\t", " "][rng.gen_range(0..4)];
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut src = String::new();
    let mut line = |r: &mut ChaCha8Rng, text: String| {
        let text = text.replace(' ', space(r));
        src.push_str(&text);
        if r.gen_bool(0.2) {
            src.push_str(" # note");
        }
        src.push_str(if r.gen_bool(0.2) { "\n\n" } else { "\n" });
    };
    line(&mut r, "kind body <: independent".into());
    let roles = names("role", r.gen_range(1..=4));
    let rights = names("right", r.gen_range(1..=4));
    let acts = names("act", r.gen_range(1..=4));
    let people = names("who", r.gen_range(1..=3));
    for x in &roles {
        line(&mut r, format!("role {x}"));
    }
    for x in &rights {
        line(&mut r, format!("right {x}"));
    }
    for x in &acts {
        line(&mut r, format!("activity {x}"));
    }
    for (i, x) in people.iter().enumerate() {
        line(&mut r, format!("{} {x}", if i % 2 == 0 { "person" } else { "body" }));
    }
    line(&mut r, "state peace".into());
    line(&mut r, "independent realm".into());
    for l in SCHEMA.lines() {
        line(&mut r, l.to_string());
    }
    for _ in 0..r.gen_range(0..12) {
        let fact = match r.gen_range(0..4) {
            0 => format!("has_right({}, {})", roles.choose(&mut r).unwrap(), rights.choose(&mut r).unwrap()),
            1 => format!("has_activity({}, {})", rights.choose(&mut r).unwrap(), acts.choose(&mut r).unwrap()),
            2 => format!("bears({}, {})", people.choose(&mut r).unwrap(), roles.choose(&mut r).unwrap()),
            _ => "peace(realm, realm)".to_string(),
        };
        let fact = match extent(&mut r, 50) {
            Some(e) => format!("{fact} during [{}, {}]", e.start().unwrap(), e.end().unwrap()),
            None => fact,
        };
        line(&mut r, fact);
    }
    let steps: Vec<String> = (0..r.gen_range(1..=3))
        .map(|i| {
            let guard = if r.gen_bool(0.5) { " requires peace" } else { "" };
            format!(
                "step s{i}: {} by {}{guard}",
                acts.choose(&mut r).unwrap(),
                roles.choose(&mut r).unwrap()
            )
        })
        .collect();
    let max = if r.gen_bool(0.5) { format!(" max {}", r.gen_range(1..9)) } else { String::new() };
    line(&mut r, format!("procedure p{max} {{\n  {}\n}}", steps.join("\n  ")));
    let mut t = 0;
    let events: Vec<String> = (0..r.gen_range(1..=4))
        .map(|_| {
            t += r.gen_range(0..5);
            format!(
                "event {t} {} by {}",
                acts.choose(&mut r).unwrap(),
                people.choose(&mut r).unwrap()
            )
        })
        .collect();
    line(&mut r, format!("trace tr {{ {} }}", events.join(" ")));
    src
}

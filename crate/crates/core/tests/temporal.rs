mod common;

use rcl::kb_roman::load_fixture;
use rcl::temporal::{holds_at, participants, snapshot, span_query};
use rcl::{Category, Fact};

#[test]
fn bearing_follows_the_extent() {
    let f = load_fixture();
    let bears = Fact::new("bears", "hadrian", "consul_role");
    let line = "bears(hadrian, consul_role) [20, 45] # base";
    assert!(snapshot(&f.store, 35).render().lines().any(|l| l == line));
    assert!(!snapshot(&f.store, 46).render().lines().any(|l| l == line));
    assert!(holds_at(&f.store, &bears, 20).unwrap());
    assert!(!holds_at(&f.store, &bears, 19).unwrap());
}

#[test]
fn snapshot_never_mentions_occurrences() {
    let f = load_fixture();
    for t in [31, 33, 39, 45] {
        let snap = snapshot(&f.store, t);
        assert!(snap.facts.iter().all(|(fact, _)| !fact.object.as_str().contains("trace")));
        assert!(snap.entities.contains("senate"));
    }
}

#[test]
fn spans_list_traces_and_occurrences() {
    let f = load_fixture();
    let view = span_query(&f.store, 30, 34).unwrap();
    let names: Vec<String> = view.occurrents.iter().map(|(id, _)| id.to_string()).collect();
    assert_eq!(
        names,
        ["good_trace", "good_trace_1", "good_trace_2", "long_trace", "long_trace_1"]
    );
    assert!(view.render().starts_with("span [30,34]\n"));
    assert_eq!(view.links.len(), 3);
    assert!(participants(&f.store, "good_trace_2").unwrap().contains("hadrian"));
}

#[test]
fn random_views_respect_the_split() {
    let mut rng = common::rng(17);
    for _ in 0..30 {
        let store = common::random_timeline_store(&mut rng);
        for t in [0, 10, 25, 50] {
            let snap = snapshot(&store, t);
            for (fact, _) in &snap.facts {
                assert!(fact.holds_at(t));
                for arg in [&fact.subject, &fact.object] {
                    assert!(!store.category_of(arg.as_str()).unwrap().is_occurrent());
                }
            }
            for id in &snap.entities {
                assert!(store.category_of(id.as_str()).unwrap().is_a(Category::Continuant));
            }
            for (id, _) in &span_query(&store, t, t + 10).unwrap().occurrents {
                assert!(store.category_of(id.as_str()).unwrap().is_occurrent());
            }
        }
    }
}

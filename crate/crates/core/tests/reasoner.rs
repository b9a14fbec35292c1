mod common;

use proptest::prelude::*;
use rcl::kb_roman::load_fixture;
use rcl::reasoner::{explain, naive, permitted_activities, Explanation};
use rcl::{infer_closure, Error, Fact, Interval};

#[test]
fn consul_activities() {
    let f = load_fixture();
    let acts: Vec<String> = permitted_activities(&f.store, "consul_role", None)
        .unwrap()
        .into_iter()
        .map(|a| a.to_string())
        .collect();
    assert_eq!(
        acts,
        [
            "command_legions",
            "levy_legions",
            "preside_people_assembly",
            "preside_senate_assembly",
            "superintend_ceremonies"
        ]
    );
    assert_eq!(
        permitted_activities(&f.store, "hadrian", None),
        Err(Error::NotARole("hadrian".into()))
    );
    assert_eq!(
        permitted_activities(&f.store, "tribune_role", None),
        Err(Error::UnknownEntity("tribune_role".into()))
    );
}

#[test]
fn adding_a_right_extends_the_set() {
    let f = load_fixture();
    let store = f
        .model
        .store
        .assert_fact(Fact::new("has_right", "senate_role", "religious_authority"))
        .unwrap();
    let acts = permitted_activities(&infer_closure(&store, &f.model.plan), "senate_role", None).unwrap();
    assert!(acts.contains("superintend_ceremonies"));
    assert!(acts.contains("empower_magistrate"));
}

#[test]
fn derived_facts_cannot_be_retracted() {
    let f = load_fixture();
    let derived = Fact::new("permitted_activity", "consul_role", "levy_legions");
    assert!(matches!(
        f.store.retract_fact(&derived),
        Err(Error::CannotRetractDerived(_))
    ));
}

#[test]
fn explanations() {
    let f = load_fixture();
    let fact = Fact::new("permitted_activity", "first_magistrate_role", "levy_legions");
    let Explanation::Derived(ds) = explain(&f.store, &f.model.plan, &fact).unwrap() else {
        panic!("derived fact explained as base");
    };
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0].rule, "rule_1");
    assert!(ds[0]
        .premises
        .contains(&Fact::new("has_right", "first_magistrate_role", "military_command")));

    let grant = Fact::new("permitted_activity", "first_magistrate_role", "rule_above_laws")
        .during(Interval::closed(31, 37).unwrap());
    assert!(matches!(
        explain(&f.store, &f.model.plan, &grant).unwrap(),
        Explanation::Derived(_)
    ));
    let base = Fact::new("belongs_to", "first_magistrate_role", "consul_role");
    assert_eq!(explain(&f.store, &f.model.plan, &base).unwrap(), Explanation::Base);
    let absent = Fact::new("permitted_activity", "senate_role", "levy_legions");
    assert!(matches!(
        explain(&f.store, &f.model.plan, &absent),
        Err(Error::FactNotInClosure(_))
    ));
}

#[test]
fn bears_cannot_be_derived() {
    let (model, diags) = rcl::rcl::load(&format!(
        "{}person p\nrule bears(?x, ?r) :- bears(?x, ?q), belongs_to(?q, ?r).\n",
        common::SCHEMA
    ));
    assert!(model.is_none());
    assert!(diags[0].message.contains("bears"), "{}", diags[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn semi_naive_equals_naive(seed in any::<u64>()) {
        let model = common::random_rights_model(&mut common::rng(seed));
        let fast = infer_closure(&model.store, &model.plan);
        let slow = naive::closure(&model.store, &model.rules);
        prop_assert_eq!(fast.canonical_export(), slow.canonical_export());
    }

    #[test]
    fn closure_is_idempotent_and_contains_base(seed in any::<u64>()) {
        let model = common::random_rights_model(&mut common::rng(seed));
        let once = infer_closure(&model.store, &model.plan);
        prop_assert_eq!(&infer_closure(&once, &model.plan), &once);
        for fact in model.store.base_facts() {
            prop_assert!(once.is_base(fact));
        }
    }

    #[test]
    fn closure_is_monotone(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let model = common::random_rights_model(&mut rng);
        let before = infer_closure(&model.store, &model.plan);
        let roles: Vec<_> = model.store.individuals_in(rcl::Category::Role).cloned().collect();
        let rights: Vec<_> = model.store.individuals_in(rcl::Category::Right).cloned().collect();
        let extra = Fact::new("has_right", roles[0].as_str(), rights[0].as_str());
        if model.store.is_base(&extra) {
            return Ok(());
        }
        let after = infer_closure(&model.store.assert_fact(extra).unwrap(), &model.plan);
        for (fact, _) in before.facts() {
            prop_assert!(after.contains(fact), "{fact} lost");
        }
    }
}

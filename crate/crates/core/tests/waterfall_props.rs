mod common;

use proptest::prelude::*;
use repair_cascade::evaluation::{Condition, SnippetResult, emit_stage_curve};
use repair_cascade::waterfall::invariants::violations;
use repair_cascade::{Outcome, Session, Stage};

use common::{SessionPlan, comparable, plan_strategy, run};

fn result(plan: &SessionPlan, s: &Session) -> SnippetResult {
    let case = common::case(plan);
    SnippetResult {
        snippet_id: case.snippet.id.clone(),
        family: case.snippet.cwe.family.clone(),
        cwe: plan.cwe,
        dependence: case.snippet.dependence,
        condition: Condition::Waterfall,
        success: matches!(s.outcome, Some(Outcome::RepairedAt { .. })),
        detection: None,
        status: None,
        outcome: s.outcome,
        stages_visited: Some(s.stages.len()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn sessions_are_well_formed(plan in plan_strategy()) {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("s.jsonl");
        let s = run(&plan, &log);

        let v = violations(&s);
        prop_assert!(v.is_empty(), "{v:?}");
        prop_assert!(s.stages.len() <= 8 - usize::from(plan.start.ordinal()));

        let expected = plan.expected_repair();
        match expected {
            Some(stage) => prop_assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage })),
            None => prop_assert_eq!(s.outcome, Some(Outcome::Exhausted)),
        }
        // no prompt for any stage after the repaired one
        if let Some(stage) = expected {
            prop_assert!(s.events.iter().all(|e| e.stage <= stage));
        }

        // the log replays to the same state, and a rerun logs the same events
        let replayed = Session::replay(&log).unwrap();
        prop_assert_eq!(comparable(&replayed), comparable(&s));
        let again = run(&plan, &dir.path().join("again.jsonl"));
        let a: Vec<_> = s.events.iter().map(|e| e.fingerprint()).collect();
        let b: Vec<_> = again.events.iter().map(|e| e.fingerprint()).collect();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn cumulative_success_is_monotone(plans in prop::collection::vec(plan_strategy(), 1..16)) {
        let dir = tempfile::tempdir().unwrap();
        let mut results = Vec::new();
        for (i, plan) in plans.iter().enumerate() {
            let s = run(plan, &dir.path().join(format!("{i}.jsonl")));
            results.push(result(plan, &s));
        }
        let curve = emit_stage_curve(&results);
        prop_assert_eq!(curve.points.len(), 7);
        prop_assert!(curve.points.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
        prop_assert!(curve.points.windows(2).all(|w| w[0].percent <= w[1].percent));
        for p in &curve.points {
            let expected = plans.iter().filter(|pl| pl.expected_repair().is_some_and(|s| s <= p.stage)).count();
            prop_assert_eq!(p.cumulative, expected, "{}", p.stage);
        }
        let last = curve.at(Stage::S7).unwrap();
        prop_assert_eq!(curve.endpoint(), Some(last));
    }
}

use std::sync::Arc;

use super::*;
use crate::fixtures::{self, FamilyPlan, TABLE1, TABLE2};
use crate::gateway::ScriptedBackend;
use crate::prompt::PromptEngine;
use crate::waterfall::StandardValidator;

fn engine(fixture: &fixtures::Fixture) -> Engine {
    Engine::new(
        PromptEngine::builtin(),
        fixture.corpus.taxonomy().clone(),
        Arc::new(ScriptedBackend::new(fixture.rules.clone(), true).unwrap()),
        Arc::new(StandardValidator::default()),
    )
}

fn plan_stats(plans: &[FamilyPlan], taxonomy: &Taxonomy) -> Vec<CategoryStats> {
    plans
        .iter()
        .map(|p| CategoryStats {
            family: taxonomy.get(p.cwe).unwrap().family.clone(),
            total: p.total,
            successes: BTreeMap::from([
                (Condition::DetectNoKnowledge, p.detect),
                (Condition::RepairNoKnowledge, p.repair[0]),
                (Condition::RepairWithVulnerability, p.repair[1]),
                (Condition::RepairWithCwe, p.repair[2]),
            ]),
        })
        .collect()
}

fn rate_row(table: &ReportTable) -> Vec<u32> {
    table.conditions.iter().map(|c| table.rates[c]).collect()
}

#[test]
fn rates_round_half_up() {
    assert_eq!(compute_rate(24, 156).unwrap(), 15);
    assert_eq!(compute_rate(118, 156).unwrap(), 76);
    assert_eq!(compute_rate(26, 88).unwrap(), 30);
    assert_eq!(compute_rate(0, 7).unwrap(), 0);
    assert_eq!(compute_rate(1, 8).unwrap(), 13);
    assert_eq!(compute_rate(1, 200).unwrap(), 1);
    assert!(matches!(compute_rate(1, 0), Err(EvalError::UndefinedRate)));
    assert!(compute_rate(3, 2).is_err());
}

#[test]
fn tables_from_plan_counts() {
    let tax = Taxonomy::builtin();
    let t1 = emit_table(&plan_stats(&TABLE1, &tax)).unwrap();
    assert_eq!(t1.totals.total, 156);
    assert_eq!(rate_row(&t1), vec![76, 15, 20, 31]);
    let t2 = emit_table(&plan_stats(&TABLE2, &tax)).unwrap();
    assert_eq!(rate_row(&t2), vec![76, 30, 34, 42]);
    let single = emit_table(&plan_stats(&TABLE1[..1], &tax)).unwrap();
    assert_eq!(single.rows.len(), 1);
    assert_eq!(single.rows[0].successes, single.totals.successes);
    assert_eq!(single.rows[0].total, single.totals.total);
}

#[test]
fn inconsistent_stats_are_rejected() {
    let tax = Taxonomy::builtin();
    let mut stats = plan_stats(&TABLE1, &tax);
    stats[0].successes.insert(Condition::RepairWithCwe, 31);
    assert!(matches!(emit_table(&stats), Err(EvalError::Inconsistent(_))));
    assert!(emit_table(&[]).is_err());
}

#[test]
fn batches_reproduce_plan_counts() {
    let fixture = fixtures::table1();
    let e = engine(&fixture);
    let opts = BatchOptions { parallelism: 4, ..Default::default() };
    let mut all = Vec::new();
    for c in Condition::ALL {
        let results = run_batch(&fixture.corpus, c, &e, &opts).unwrap();
        assert_eq!(results.len(), 156);
        all.extend(results);
    }
    let stats = aggregate(&all, fixture.corpus.taxonomy()).unwrap();
    for (row, plan) in stats.iter().zip(TABLE1) {
        assert_eq!(row.total, plan.total);
        assert_eq!(row.successes[&Condition::DetectNoKnowledge], plan.detect, "{}", row.family);
        assert_eq!(row.successes[&Condition::RepairNoKnowledge], plan.repair[0], "{}", row.family);
        assert_eq!(row.successes[&Condition::RepairWithVulnerability], plan.repair[1], "{}", row.family);
        assert_eq!(row.successes[&Condition::RepairWithCwe], plan.repair[2], "{}", row.family);
        assert_eq!(row.successes[&Condition::Waterfall], plan.waterfall, "{}", row.family);
    }
    let table = emit_table(&stats).unwrap();
    assert_eq!(rate_row(&table), vec![76, 15, 20, 31, 63]);
    let curve = emit_stage_curve(&all);
    assert_eq!(curve.endpoint(), Some(63));
    assert!(curve.points.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
    assert_eq!(curve.points[2].cumulative, 48);
}

#[test]
fn parallelism_does_not_change_results() {
    let fixture = fixtures::other_cwe(476).unwrap();
    let e = engine(&fixture);
    let serial = BatchOptions { parallelism: 1, baseline_offset: true, ..Default::default() };
    let wide = BatchOptions { parallelism: 8, baseline_offset: true, ..Default::default() };
    let a = run_batch(&fixture.corpus, Condition::Waterfall, &e, &serial).unwrap();
    let b = run_batch(&fixture.corpus, Condition::Waterfall, &e, &wide).unwrap();
    assert_eq!(a, b);
    assert_eq!(emit_stage_curve(&a).endpoint(), Some(82));
}

#[test]
fn scripted_miss_names_the_snippet() {
    let mut fixture = fixtures::other_cwe(369).unwrap();
    fixture.rules.retain(|r| !(r.snippet_id == "dbz-004" && r.prompt_kind == crate::gateway::PromptKind::Repair));
    let e = engine(&fixture);
    let err = run_batch(&fixture.corpus, Condition::RepairWithCwe, &e, &BatchOptions::default()).unwrap_err();
    match err {
        EvalError::Snippet { snippet, .. } => assert_eq!(snippet, "dbz-004"),
        other => panic!("unexpected {other}"),
    }
    let empty = Corpus::empty(Taxonomy::builtin());
    assert!(matches!(run_batch(&empty, Condition::Waterfall, &e, &BatchOptions::default()), Err(EvalError::EmptyCorpus)));
}

#[test]
fn curve_of_immediate_repairs_is_flat() {
    let r = SnippetResult {
        snippet_id: "a".into(),
        family: "Buffer Copy".into(),
        cwe: 120,
        dependence: Dependence::CodeDependent,
        condition: Condition::Waterfall,
        success: true,
        detection: None,
        status: None,
        outcome: Some(Outcome::RepairedAt { stage: Stage::S1 }),
        stages_visited: Some(1),
    };
    let curve = emit_stage_curve(&[r.clone(), SnippetResult { snippet_id: "b".into(), ..r }]);
    assert!(curve.points.iter().all(|p| p.percent == 100));
    assert!(emit_stage_curve(&[]).points.is_empty());
}

#[test]
fn outputs_round_trip() {
    let fixture = fixtures::other_cwe(193).unwrap();
    let e = engine(&fixture);
    let dir = tempfile::tempdir().unwrap();
    let opts = BatchOptions { parallelism: 2, baseline_offset: true, log_dir: Some(dir.path().join("sessions")), ..Default::default() };
    let mut results = run_batch(&fixture.corpus, Condition::RepairWithCwe, &e, &opts).unwrap();
    results.extend(run_batch(&fixture.corpus, Condition::Waterfall, &e, &opts).unwrap());
    let manifest = Manifest {
        tool_version: "test".into(),
        backend_kind: "scripted".into(),
        config_digest: "c".into(),
        corpus_digest: fixture.corpus.digest(),
        prompt_digest: PromptEngine::builtin().digest(),
        script_digest: None,
        conditions: vec![Condition::RepairWithCwe, Condition::Waterfall],
        parallelism: 2,
        fresh_context: false,
        baseline_offset: true,
    };
    let report = Report::assemble(manifest, results, fixture.corpus.taxonomy()).unwrap();
    assert_eq!(report.curve.as_ref().unwrap().at(Stage::S3), Some(41));
    assert_eq!(report.curve.as_ref().unwrap().endpoint(), Some(77));
    let out = write_outputs(dir.path(), &report).unwrap();
    let md = std::fs::read_to_string(&out.report_md).unwrap();
    assert!(md.contains("| Off-by-one | 22 | 9 | 17 |"), "{md}");
    assert!(md.contains("| **Success Rate** | | 41% | 77% |"));
    let curve = std::fs::read_to_string(out.curve_csv.unwrap()).unwrap();
    assert!(curve.starts_with("stage,cumulative_percent\nS1,0\n"));
    assert!(curve.ends_with("S7,77\n"));
    assert!(dir.path().join("sessions/obo-001.jsonl").is_file());
    let (m, loaded) = load_results(dir.path()).unwrap();
    let again = Report::assemble(m, loaded, fixture.corpus.taxonomy()).unwrap();
    assert_eq!(again, report);
    assert!(load_results(&dir.path().join("nothing")).is_err());
}

#[test]
fn condition_names() {
    assert_eq!("with-cwe".parse::<Condition>().unwrap(), Condition::RepairWithCwe);
    assert_eq!("waterfall".parse::<Condition>().unwrap(), Condition::Waterfall);
    assert!("bogus".parse::<Condition>().is_err());
    assert_eq!(Condition::RepairWithVulnerability.single_stage(), Some(Stage::S2));
}

use std::path::PathBuf;

use repair_cascade::validator::oracle::{FixIntent, evaluate_fix_set, load_fix_set};
use repair_cascade::validator::static_check;
use repair_cascade::{PromptEngine, Stage, ToolchainConfig, ValidationStatus, load_corpus};

fn corpora() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora")
}

#[test]
fn demo_corpora_load_and_render() {
    let prompts = PromptEngine::builtin();
    for name in ["demo", "demo-other"] {
        let corpus = load_corpus(&corpora().join(name)).unwrap();
        assert_eq!(corpus.len(), 18, "{name}");
        for s in corpus.snippets() {
            for stage in Stage::ALL {
                prompts.render_detection(stage, s).unwrap();
                prompts.render_repair(stage, s).unwrap();
            }
        }
    }
}

#[test]
fn every_original_is_flagged() {
    for name in ["demo", "demo-other"] {
        let corpus = load_corpus(&corpora().join(name)).unwrap();
        for s in corpus.snippets() {
            let r = static_check(&s.source, &s.cwe, s.truth.as_ref());
            assert_eq!(r.status, ValidationStatus::StillVulnerable, "{}: {:?}", s.id, r.evidence);
        }
    }
}

#[test]
fn micro_corpus_shape() {
    let set = load_fix_set(&corpora().join("fixes/manifest.json")).unwrap();
    let runnable: Vec<_> = set.corpus.snippets().iter().filter(|s| s.truth.as_ref().is_some_and(|t| t.dynamic_enabled())).collect();
    assert_eq!(runnable.len(), 10);
    assert!(set.manifest.fixes.len() >= 20);
    for s in &runnable {
        let fixes: Vec<_> = set.manifest.fixes.iter().filter(|f| f.snippet == s.id).collect();
        assert!(fixes.iter().any(|f| f.intent == FixIntent::Correct), "{}", s.id);
        assert!(fixes.iter().any(|f| f.intent != FixIntent::Correct), "{}", s.id);
    }
}

#[test]
fn static_verdicts_match_manifest() {
    let set = load_fix_set(&corpora().join("fixes/manifest.json")).unwrap();
    let report = evaluate_fix_set(&set, None);
    assert!(report.unflagged_originals.is_empty(), "{:?}", report.unflagged_originals);
    for v in &report.verdicts {
        assert_eq!(v.static_status, v.case.expected_static, "{}", v.case.file);
    }
}

#[test]
fn oracles_agree_on_fixes() {
    let tc = ToolchainConfig::default();
    if !tc.available() {
        eprintln!("dynamic validation skipped: no instrumented toolchain");
        return;
    }
    let set = load_fix_set(&corpora().join("fixes/manifest.json")).unwrap();
    let report = evaluate_fix_set(&set, Some(&tc));
    for v in &report.verdicts {
        assert!(v.matches_expectation(), "{}: static {} dynamic {:?}", v.case.file, v.static_status, v.dynamic_status);
    }
    assert!(report.agreement().unwrap() >= 0.9);
    // every disagreement is catalogued with its cause
    for v in report.disagreements() {
        assert!(v.case.disagreement.is_some(), "{}", v.case.file);
    }
    for v in &report.verdicts {
        if v.case.disagreement.is_some() {
            assert_eq!(v.agrees(), Some(false), "{}", v.case.file);
        }
    }
}

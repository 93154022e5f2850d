//! Rendered prompts are frozen under `tests/goldens/prompts`. Set
//! `UPDATE_GOLDENS=1` to rewrite them after an intentional template change.

mod common;

use std::path::{Path, PathBuf};

use repair_cascade::{Corpus, PromptEngine, Snippet, Stage, load_corpus};

use common::prompts::{missing_anchors, s1_leaks};

const GOLDEN: [(&str, &str); 4] = [("demo", "bc-001"), ("demo", "obw-002"), ("demo-other", "obo-001"), ("demo-other", "sqli-001")];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn corpus(name: &str) -> Corpus {
    load_corpus(&root().join("../../corpora").join(name)).unwrap()
}

fn snippet<'a>(corpus: &'a Corpus, id: &str) -> &'a Snippet {
    corpus.snippets().iter().find(|s| s.id == id).unwrap()
}

fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs; rerun with UPDATE_GOLDENS=1 if intended", path.display());
}

#[test]
fn rendered_prompts_match_goldens() {
    let prompts = PromptEngine::builtin();
    for (name, id) in GOLDEN {
        let corpus = corpus(name);
        let s = snippet(&corpus, id);
        for stage in Stage::ALL {
            let dir = root().join("tests/goldens/prompts").join(id);
            let n = stage.ordinal();
            check_golden(&dir.join(format!("s{n}-detection.txt")), &prompts.render_detection(stage, s).unwrap());
            check_golden(&dir.join(format!("s{n}-repair.txt")), &prompts.render_repair(stage, s).unwrap());
        }
    }
}

#[test]
fn anchors_for_every_overflow_snippet() {
    let prompts = PromptEngine::builtin();
    let corpus = corpus("demo");
    for s in corpus.snippets() {
        assert_eq!(s.cwe.weakness, "buffer overflow", "{}", s.id);
        let missing = missing_anchors(&prompts, s);
        assert!(missing.is_empty(), "{missing:?}");
    }
}

#[test]
fn first_stage_discloses_nothing() {
    let prompts = PromptEngine::builtin();
    for name in ["demo", "demo-other"] {
        for s in corpus(name).snippets() {
            let leaks = s1_leaks(&prompts, s);
            assert!(leaks.is_empty(), "{leaks:?}");
        }
    }
}

#[test]
fn context_only_grows() {
    let prompts = PromptEngine::builtin();
    for name in ["demo", "demo-other"] {
        for s in corpus(name).snippets() {
            let repair = |stage| prompts.render_repair(stage, s).unwrap();
            let fragment = |stage| prompts.cwe_context_fragment(&s.cwe, stage, s.truth.as_ref()).unwrap();
            // S2 and S3 add security context that S1 lacks
            assert!(!repair(Stage::S1).contains(&fragment(Stage::S2)), "{}", s.id);
            assert!(repair(Stage::S2).contains(&fragment(Stage::S2)), "{}", s.id);
            assert!(repair(Stage::S3).contains(&fragment(Stage::S3)), "{}", s.id);
            assert!(!repair(Stage::S2).contains(&fragment(Stage::S3)), "{}", s.id);
            for k in 5..=7 {
                let (prev, cur) = (Stage::from_ordinal(k - 1).unwrap(), Stage::from_ordinal(k).unwrap());
                let (p, c) = (fragment(prev), fragment(cur));
                assert!(c.starts_with(&p) && c.len() > p.len(), "{} {cur}", s.id);
                assert!(repair(cur).contains(&c), "{} {cur}", s.id);
            }
        }
    }
}

#[test]
fn rendering_is_deterministic() {
    let a = PromptEngine::builtin();
    let b = PromptEngine::builtin();
    assert_eq!(a.digest(), b.digest());
    for s in corpus("demo-other").snippets() {
        for stage in Stage::ALL {
            assert_eq!(a.bundle(stage, s).unwrap(), b.bundle(stage, s).unwrap());
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repair-cascade")).current_dir(root()).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn all_reproduces_the_table_with_a_manifest() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&["all", "--corpus", "fixtures/table1", "--script", "fixtures/table1.json", "--strict-script", "--out", path(out.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("156 snippets"), "{text}");
    for rate in ["detect-no-knowledge=76%", "repair-no-knowledge=15%", "repair-with-vulnerability=20%", "repair-with-cwe=31%", "waterfall=63%"] {
        assert!(text.contains(rate), "{rate} missing from {text}");
    }

    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.path().join("manifest.json")).unwrap()).unwrap();
    for key in ["config_digest", "corpus_digest", "prompt_digest", "script_digest"] {
        let digest = manifest[key].as_str().unwrap();
        assert_eq!(digest.len(), 64, "{key}");
        assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
    }
    assert_eq!(manifest["backend_kind"], "scripted");
    assert_eq!(manifest["conditions"].as_array().unwrap().len(), 5);
    for f in ["report.json", "report.csv", "report.md", "curve.csv", "results/waterfall.json"] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
    assert!(out.path().join("sessions").read_dir().unwrap().count() >= 156);

    // re-rendering from stored results gives the same files
    let before: Vec<String> =
        ["report.json", "report.csv", "report.md", "curve.csv"].iter().map(|f| std::fs::read_to_string(out.path().join(f)).unwrap()).collect();
    let o = run(&["report", "--out", path(out.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let after: Vec<String> =
        ["report.json", "report.csv", "report.md", "curve.csv"].iter().map(|f| std::fs::read_to_string(out.path().join(f)).unwrap()).collect();
    assert_eq!(before, after);
}

#[test]
fn same_inputs_give_the_same_digests() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, par) in [(&a, "1"), (&b, "8")] {
        let o = run(&["waterfall", "--corpus", "fixtures/table2", "--script", "fixtures/table2.json", "--parallelism", par, "--out", path(dir.path())]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read_to_string(d.path().join(f)).unwrap();
    assert_eq!(read(&a, "report.csv"), read(&b, "report.csv"));
    assert_eq!(read(&a, "results/waterfall.json"), read(&b, "results/waterfall.json"));
    let digest = |d: &tempfile::TempDir| -> Value { serde_json::from_str(&read(d, "manifest.json")).unwrap() };
    assert_eq!(digest(&a)["corpus_digest"], digest(&b)["corpus_digest"]);
    assert_eq!(digest(&a)["script_digest"], digest(&b)["script_digest"]);
}

#[test]
fn empty_corpus_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["repair", "--condition", "with-cwe", "--corpus", path(dir.path()), "--script", "fixtures/table1.json", "--out", path(&dir.path().join("out"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("no snippets"), "{}", stderr(&o));
}

#[test]
fn unknown_repair_condition_is_a_config_error() {
    let o = run(&["repair", "--condition", "waterfall", "--corpus", "fixtures/table1", "--script", "fixtures/table1.json"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn report_without_results_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["report", "--out", path(dir.path())]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn missing_script_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["detect", "--corpus", "fixtures/table1", "--script", path(&dir.path().join("nope.json")), "--out", path(dir.path())]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn scripted_miss_is_a_backend_error() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("empty.json");
    std::fs::write(&script, "[]").unwrap();
    let o = run(&["detect", "--corpus", "fixtures/table1", "--script", path(&script), "--out", path(&dir.path().join("out"))]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error: "), "{}", stderr(&o));
}

#[test]
fn fixtures_can_be_listed_and_written() {
    let o = run(&["fixture", "--list"]);
    assert_eq!(code(&o), 0);
    for name in ["table1", "table2", "dependence-split"] {
        assert!(stdout(&o).contains(name), "{}", stdout(&o));
    }
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fixture", "--name", "table2", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("table2.json")).unwrap(),
        std::fs::read_to_string(root().join("fixtures/table2.json")).unwrap()
    );
    let o = run(&["fixture", "--name", "nope", "--out", path(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_static_only_reports_no_agreement() {
    let o = run(&["oracle", "--static-only"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("not measured"), "{}", stdout(&o));
}

//! The shipped fixtures must be exactly what the generator produces. Set
//! `UPDATE_FIXTURES=1` to rewrite them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use repair_cascade::fixtures::{self, NAMES_AVAILABLE};
use repair_cascade::gateway::load_script;
use repair_cascade::load_corpus;

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn shipped_fixtures_match_generator() {
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        let dir = shipped();
        if dir.exists() {
            std::fs::remove_dir_all(&dir).unwrap();
        }
        for name in NAMES_AVAILABLE {
            fixtures::write_fixture(&fixtures::by_name(name).unwrap(), &dir).unwrap();
        }
    }
    let fresh = tempfile::tempdir().unwrap();
    for name in NAMES_AVAILABLE {
        fixtures::write_fixture(&fixtures::by_name(name).unwrap(), fresh.path()).unwrap();
    }
    let expected = tree(fresh.path());
    let actual = tree(&shipped());
    let missing: Vec<_> = expected.keys().filter(|k| !actual.contains_key(*k)).collect();
    let extra: Vec<_> = actual.keys().filter(|k| !expected.contains_key(*k)).collect();
    assert!(missing.is_empty() && extra.is_empty(), "missing {missing:?}, extra {extra:?}");
    for (path, bytes) in &expected {
        assert!(actual[path] == *bytes, "{} differs from the generator; rerun with UPDATE_FIXTURES=1", path.display());
    }
}

#[test]
fn shipped_fixtures_load() {
    for name in NAMES_AVAILABLE {
        let corpus = load_corpus(&shipped().join(name)).unwrap();
        let rules = load_script(&shipped().join(format!("{name}.json"))).unwrap();
        assert_eq!(rules.len(), corpus.len() * 14, "{name}");
        assert!(rules.iter().all(|r| r.prompt_digest.is_some()));
    }
}

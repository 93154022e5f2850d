//! Annotated vulnerable-snippet corpus.
//!
//! On disk a corpus is a directory tree `<root>/<family>/<id>/source.<ext>`
//! plus `<root>/<family>/<id>/meta.json`. An optional `taxonomy.json` at the
//! root extends the built-in taxonomy and an optional `counts.json` pins the
//! expected per-family totals.

use std::fs;
use std::path::{Path, PathBuf};

use base64::Engine as _;
use base64::engine::general_purpose::STANDARD as BASE64;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CorpusError;
use crate::taxonomy::{CweClass, Dependence, Taxonomy, parse_cwe_id};

/// 1-based inclusive line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct LineSpan {
    pub start: usize,
    pub end: usize,
}

impl LineSpan {
    pub fn new(start: usize, end: usize) -> Self {
        LineSpan { start, end }
    }

    pub fn contains(&self, line: usize) -> bool {
        (self.start..=self.end).contains(&line)
    }

    pub fn is_valid_for(&self, line_count: usize) -> bool {
        self.start >= 1 && self.start <= self.end && self.end <= line_count
    }
}

impl From<[usize; 2]> for LineSpan {
    fn from(v: [usize; 2]) -> Self {
        LineSpan::new(v[0], v[1])
    }
}

impl From<LineSpan> for [usize; 2] {
    fn from(s: LineSpan) -> Self {
        [s.start, s.end]
    }
}

impl std::fmt::Display for LineSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}-{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalCase {
    #[serde(with = "b64")]
    pub input: Vec<u8>,
    #[serde(with = "b64")]
    pub expected_output: Vec<u8>,
}

/// Ground-truth annotations. Each field backs one code-context stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub vulnerable_symbol: String,
    pub vulnerable_lines: LineSpan,
    pub correct_bound: Option<String>,
    pub required_check: String,
    pub placement_hint: String,
    #[serde(with = "b64_opt")]
    pub exploit_input: Option<Vec<u8>>,
    pub functional_cases: Vec<FunctionalCase>,
}

impl GroundTruth {
    /// Dynamic validation is enabled for snippets that carry an exploit input.
    pub fn dynamic_enabled(&self) -> bool {
        self.exploit_input.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub id: String,
    pub language: String,
    pub source: String,
    pub cwe: CweClass,
    pub dependence: Dependence,
    pub truth: Option<GroundTruth>,
}

impl Snippet {
    pub fn family(&self) -> &str {
        &self.cwe.family
    }

    pub fn line_count(&self) -> usize {
        self.source.lines().count()
    }

    pub fn extension(&self) -> &str {
        source_extension(&self.language)
    }
}

pub fn source_extension(language: &str) -> &str {
    match language.to_ascii_lowercase().as_str() {
        "c" => "c",
        "cpp" | "c++" | "cxx" => "cpp",
        "python" | "py" => "py",
        _ => "txt",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    snippets: Vec<Snippet>,
    counts: IndexMap<String, usize>,
    taxonomy: Taxonomy,
}

impl Corpus {
    /// Builds a corpus from snippets, enforcing id uniqueness and the
    /// dependence invariant. Snippets are kept in the given order.
    pub fn new(taxonomy: Taxonomy, snippets: Vec<Snippet>) -> Result<Self, CorpusError> {
        for (i, s) in snippets.iter().enumerate() {
            if snippets[..i].iter().any(|o| o.id == s.id) {
                return Err(CorpusError::DuplicateId { id: s.id.clone(), path: PathBuf::new() });
            }
            validate_snippet(&taxonomy, s, Path::new(&s.id))?;
        }
        let counts = tally(&taxonomy, &snippets);
        Ok(Corpus { snippets, counts, taxonomy })
    }

    pub fn empty(taxonomy: Taxonomy) -> Self {
        Corpus { snippets: Vec::new(), counts: IndexMap::new(), taxonomy }
    }

    pub fn snippets(&self) -> &[Snippet] {
        &self.snippets
    }

    pub fn len(&self) -> usize {
        self.snippets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snippets.is_empty()
    }

    /// Per-family totals in taxonomy order.
    pub fn counts(&self) -> &IndexMap<String, usize> {
        &self.counts
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn get(&self, id: &str) -> Option<&Snippet> {
        self.snippets.iter().find(|s| s.id == id)
    }

    /// Subset matching `predicate`, order preserved, counts recomputed.
    pub fn filter(&self, predicate: impl Fn(&Snippet) -> bool) -> Corpus {
        let snippets: Vec<Snippet> = self.snippets.iter().filter(|s| predicate(s)).cloned().collect();
        let counts = tally(&self.taxonomy, &snippets);
        Corpus { snippets, counts, taxonomy: self.taxonomy.clone() }
    }

    pub fn filter_family(&self, family: &str) -> Corpus {
        self.filter(|s| s.cwe.family.eq_ignore_ascii_case(family))
    }

    pub fn filter_dependence(&self, dependence: Dependence) -> Corpus {
        self.filter(|s| s.dependence == dependence)
    }

    /// Content digest over ids, sources and annotations.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for s in &self.snippets {
            hasher.update(s.id.as_bytes());
            hasher.update([0]);
            hasher.update(s.source.as_bytes());
            hasher.update([0]);
            let meta = serde_json::to_vec(&MetaSidecar::from_snippet(s)).expect("meta serializes");
            hasher.update(&meta);
        }
        hex::encode(hasher.finalize())
    }
}

fn tally(taxonomy: &Taxonomy, snippets: &[Snippet]) -> IndexMap<String, usize> {
    let mut counts: IndexMap<String, usize> = IndexMap::new();
    for s in snippets {
        *counts.entry(s.cwe.family.clone()).or_default() += 1;
    }
    counts.sort_by(|a, _, b, _| taxonomy.family_rank(a).cmp(&taxonomy.family_rank(b)).then(a.cmp(b)));
    counts
}

fn validate_snippet(taxonomy: &Taxonomy, s: &Snippet, path: &Path) -> Result<(), CorpusError> {
    let err = |msg: String| CorpusError::Invalid { path: path.to_path_buf(), message: msg };
    if s.id.trim().is_empty() {
        return Err(err("empty id".into()));
    }
    if s.source.trim().is_empty() {
        return Err(err(format!("snippet {} has empty source", s.id)));
    }
    let expected = taxonomy
        .classify_dependence(s.cwe.id)
        .map_err(|_| CorpusError::UnknownCwe { cwe: s.cwe.id, path: path.to_path_buf() })?;
    if s.dependence != expected {
        return Err(err(format!("snippet {} dependence {} disagrees with taxonomy", s.id, s.dependence)));
    }
    match &s.truth {
        None if s.dependence == Dependence::CodeDependent => {
            return Err(CorpusError::MissingAnnotation {
                id: s.id.clone(),
                field: "vulnerable_symbol",
                path: path.to_path_buf(),
            });
        }
        None => {}
        Some(truth) => {
            let lines = s.line_count();
            if !truth.vulnerable_lines.is_valid_for(lines) {
                return Err(CorpusError::SpanOutOfRange {
                    id: s.id.clone(),
                    span: truth.vulnerable_lines,
                    line_count: lines,
                    path: path.to_path_buf(),
                });
            }
            if truth.vulnerable_symbol.trim().is_empty() {
                return Err(err(format!("snippet {} has an empty vulnerable_symbol", s.id)));
            }
            if truth.dynamic_enabled() && truth.functional_cases.is_empty() {
                return Err(err(format!(
                    "snippet {} has an exploit input but no functional cases",
                    s.id
                )));
            }
        }
    }
    Ok(())
}

/// The `meta.json` sidecar document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetaSidecar {
    pub id: String,
    pub cwe: serde_json::Value,
    pub family: String,
    pub language: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vulnerable_symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vulnerable_lines: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required_check: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement_hint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exploit_input_b64: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functional_cases: Vec<FunctionalCaseB64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalCaseB64 {
    pub input_b64: String,
    pub expected_output_b64: String,
}

impl MetaSidecar {
    pub fn from_snippet(s: &Snippet) -> Self {
        let t = s.truth.as_ref();
        MetaSidecar {
            id: s.id.clone(),
            cwe: serde_json::Value::from(s.cwe.id),
            family: s.cwe.family.clone(),
            language: s.language.clone(),
            vulnerable_symbol: t.map(|t| t.vulnerable_symbol.clone()),
            vulnerable_lines: t.map(|t| t.vulnerable_lines.into()),
            correct_bound: t.and_then(|t| t.correct_bound.clone()),
            required_check: t.map(|t| t.required_check.clone()),
            placement_hint: t.map(|t| t.placement_hint.clone()),
            exploit_input_b64: t.and_then(|t| t.exploit_input.as_ref()).map(|b| BASE64.encode(b)),
            functional_cases: t
                .map(|t| {
                    t.functional_cases
                        .iter()
                        .map(|c| FunctionalCaseB64 {
                            input_b64: BASE64.encode(&c.input),
                            expected_output_b64: BASE64.encode(&c.expected_output),
                        })
                        .collect()
                })
                .unwrap_or_default(),
        }
    }

    fn into_snippet(self, taxonomy: &Taxonomy, source: String, path: &Path) -> Result<Snippet, CorpusError> {
        let malformed = |message: String| CorpusError::Malformed { path: path.to_path_buf(), message };
        let cwe_id = match &self.cwe {
            serde_json::Value::Number(n) => n.as_u64().and_then(|n| u32::try_from(n).ok()),
            serde_json::Value::String(s) => parse_cwe_id(s),
            _ => None,
        }
        .ok_or_else(|| malformed(format!("bad cwe value {}", self.cwe)))?;
        let cwe = taxonomy
            .get(cwe_id)
            .cloned()
            .ok_or(CorpusError::UnknownCwe { cwe: cwe_id, path: path.to_path_buf() })?;
        if !cwe.family.eq_ignore_ascii_case(&self.family) {
            return Err(malformed(format!(
                "family `{}` does not match taxonomy family `{}` for CWE-{}",
                self.family, cwe.family, cwe.id
            )));
        }
        let decode = |field: &str, text: &str| {
            BASE64
                .decode(text.trim())
                .map_err(|e| malformed(format!("{field}: invalid base64: {e}")))
        };
        let truth = match (self.vulnerable_symbol, self.vulnerable_lines) {
            (None, None) => None,
            (Some(symbol), Some(lines)) => {
                let required_check = self.required_check.ok_or(CorpusError::MissingAnnotation {
                    id: self.id.clone(),
                    field: "required_check",
                    path: path.to_path_buf(),
                })?;
                let placement_hint = self.placement_hint.ok_or(CorpusError::MissingAnnotation {
                    id: self.id.clone(),
                    field: "placement_hint",
                    path: path.to_path_buf(),
                })?;
                let exploit_input = self
                    .exploit_input_b64
                    .as_deref()
                    .map(|t| decode("exploit_input_b64", t))
                    .transpose()?;
                let functional_cases = self
                    .functional_cases
                    .iter()
                    .map(|c| {
                        Ok(FunctionalCase {
                            input: decode("input_b64", &c.input_b64)?,
                            expected_output: decode("expected_output_b64", &c.expected_output_b64)?,
                        })
                    })
                    .collect::<Result<Vec<_>, CorpusError>>()?;
                Some(GroundTruth {
                    vulnerable_symbol: symbol,
                    vulnerable_lines: lines.into(),
                    correct_bound: self.correct_bound,
                    required_check,
                    placement_hint,
                    exploit_input,
                    functional_cases,
                })
            }
            (None, Some(_)) => {
                return Err(CorpusError::MissingAnnotation {
                    id: self.id,
                    field: "vulnerable_symbol",
                    path: path.to_path_buf(),
                });
            }
            (Some(_), None) => {
                return Err(CorpusError::MissingAnnotation {
                    id: self.id,
                    field: "vulnerable_lines",
                    path: path.to_path_buf(),
                });
            }
        };
        Ok(Snippet {
            id: self.id,
            language: self.language,
            source,
            dependence: cwe.dependence,
            cwe,
            truth,
        })
    }
}

/// Loads and validates a corpus. Any error fails the whole load.
pub fn load_corpus(root: &Path) -> Result<Corpus, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::Io { path: root.to_path_buf(), message: "not a directory".into() });
    }
    let mut taxonomy = Taxonomy::builtin();
    let taxonomy_path = root.join("taxonomy.json");
    if taxonomy_path.is_file() {
        let extra = Taxonomy::load(&taxonomy_path)
            .map_err(|e| CorpusError::Malformed { path: taxonomy_path.clone(), message: e.to_string() })?;
        taxonomy
            .extend_with(extra)
            .map_err(|e| CorpusError::Malformed { path: taxonomy_path.clone(), message: e.to_string() })?;
    }

    let mut snippets: Vec<(Snippet, PathBuf)> = Vec::new();
    for family_dir in sorted_subdirs(root)? {
        for snippet_dir in sorted_subdirs(&family_dir)? {
            let snippet = load_snippet(&taxonomy, &snippet_dir)?;
            if let Some((_, first)) = snippets.iter().find(|(s, _)| s.id == snippet.id) {
                return Err(CorpusError::DuplicateId {
                    id: snippet.id,
                    path: format!("{} and {}", first.display(), snippet_dir.display()).into(),
                });
            }
            validate_snippet(&taxonomy, &snippet, &snippet_dir)?;
            snippets.push((snippet, snippet_dir));
        }
    }
    snippets.sort_by(|(a, _), (b, _)| {
        taxonomy
            .family_rank(&a.cwe.family)
            .cmp(&taxonomy.family_rank(&b.cwe.family))
            .then_with(|| a.id.cmp(&b.id))
    });
    let snippets: Vec<Snippet> = snippets.into_iter().map(|(s, _)| s).collect();
    let counts = tally(&taxonomy, &snippets);

    let counts_path = root.join("counts.json");
    if counts_path.is_file() {
        let text = read(&counts_path)?;
        let declared: IndexMap<String, usize> = serde_json::from_str(&text)
            .map_err(|e| CorpusError::Malformed { path: counts_path.clone(), message: e.to_string() })?;
        let mismatch = declared.len() != counts.len()
            || declared.iter().any(|(family, n)| counts.get(family) != Some(n));
        if mismatch {
            return Err(CorpusError::CountsMismatch {
                path: counts_path,
                declared: format!("{declared:?}"),
                found: format!("{counts:?}"),
            });
        }
    }
    Ok(Corpus { snippets, counts, taxonomy })
}

fn load_snippet(taxonomy: &Taxonomy, dir: &Path) -> Result<Snippet, CorpusError> {
    let meta_path = dir.join("meta.json");
    if !meta_path.is_file() {
        return Err(CorpusError::MissingSidecar { path: dir.to_path_buf() });
    }
    let meta: MetaSidecar = serde_json::from_str(&read(&meta_path)?)
        .map_err(|e| CorpusError::Malformed { path: meta_path.clone(), message: e.to_string() })?;
    let source_path = find_source(dir)?;
    let source = read(&source_path)?;
    meta.into_snippet(taxonomy, source, dir)
}

fn find_source(dir: &Path) -> Result<PathBuf, CorpusError> {
    let entries = fs::read_dir(dir).map_err(|e| io_err(dir, e))?;
    let mut found: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.file_stem().is_some_and(|s| s == "source"))
        .collect();
    found.sort();
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(CorpusError::MissingSource { path: dir.to_path_buf() }),
        _ => Err(CorpusError::Malformed {
            path: dir.to_path_buf(),
            message: "more than one source.* file".into(),
        }),
    }
}

fn sorted_subdirs(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .filter(|p| !p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.')))
        .collect();
    dirs.sort();
    Ok(dirs)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, e: std::io::Error) -> CorpusError {
    CorpusError::Io { path: path.to_path_buf(), message: e.to_string() }
}

/// Directory name used for a family, e.g. `out-bound-read`.
pub fn family_slug(family: &str) -> String {
    let mut slug = String::new();
    for ch in family.chars() {
        if ch.is_ascii_alphanumeric() {
            slug.push(ch.to_ascii_lowercase());
        } else if !slug.ends_with('-') {
            slug.push('-');
        }
    }
    slug.trim_matches('-').to_string()
}

/// Writes a corpus in the on-disk layout; the inverse of [`load_corpus`].
pub fn write_corpus(corpus: &Corpus, root: &Path) -> Result<(), CorpusError> {
    fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
    if *corpus.taxonomy() != Taxonomy::builtin() {
        let path = root.join("taxonomy.json");
        fs::write(&path, corpus.taxonomy().to_json()).map_err(|e| io_err(&path, e))?;
    }
    for s in corpus.snippets() {
        let dir = root.join(family_slug(&s.cwe.family)).join(&s.id);
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        let src = dir.join(format!("source.{}", s.extension()));
        fs::write(&src, &s.source).map_err(|e| io_err(&src, e))?;
        let meta = dir.join("meta.json");
        let text = serde_json::to_string_pretty(&MetaSidecar::from_snippet(s)).expect("meta serializes");
        fs::write(&meta, text + "\n").map_err(|e| io_err(&meta, e))?;
    }
    let counts = root.join("counts.json");
    let text = serde_json::to_string_pretty(corpus.counts()).expect("counts serialize");
    fs::write(&counts, text + "\n").map_err(|e| io_err(&counts, e))?;
    Ok(())
}

mod b64 {
    use base64::Engine as _;
    use base64::engine::general_purpose::STANDARD;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&STANDARD.encode(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        STANDARD.decode(text).map_err(serde::de::Error::custom)
    }
}

mod b64_opt {
    use base64::Engine as _;
    use base64::engine::general_purpose::STANDARD;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<u8>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(bytes) => s.serialize_some(&STANDARD.encode(bytes)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<u8>>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| STANDARD.decode(t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snippet(id: &str, cwe: u32, source: &str) -> Snippet {
        let taxonomy = Taxonomy::builtin();
        let cwe = taxonomy.get(cwe).unwrap().clone();
        let truth = (cwe.dependence == Dependence::CodeDependent).then(|| GroundTruth {
            vulnerable_symbol: "buf".into(),
            vulnerable_lines: LineSpan::new(1, 1),
            correct_bound: Some("sizeof(buf)".into()),
            required_check: "length guard before copy".into(),
            placement_hint: "before the copy".into(),
            exploit_input: None,
            functional_cases: vec![],
        });
        Snippet {
            id: id.into(),
            language: "c".into(),
            source: source.into(),
            dependence: cwe.dependence,
            cwe,
            truth,
        }
    }

    #[test]
    fn empty_directory_gives_empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = load_corpus(dir.path()).unwrap();
        assert!(corpus.is_empty());
        assert!(corpus.counts().is_empty());
    }

    #[test]
    fn span_beyond_file_length_names_snippet() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = snippet("bc-900", 120, "int main(void) {\n  return 0;\n}\n");
        s.truth.as_mut().unwrap().vulnerable_lines = LineSpan::new(2, 9);
        let corpus = Corpus { snippets: vec![s], counts: IndexMap::new(), taxonomy: Taxonomy::builtin() };
        write_corpus(&corpus, dir.path()).unwrap();
        std::fs::remove_file(dir.path().join("counts.json")).unwrap();
        let err = load_corpus(dir.path()).unwrap_err();
        assert!(matches!(&err, CorpusError::SpanOutOfRange { id, .. } if id == "bc-900"), "{err}");
        assert!(err.to_string().contains("bc-900"));
    }

    #[test]
    fn missing_sidecar_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let snip = dir.path().join("buffer-copy").join("bc-1");
        std::fs::create_dir_all(&snip).unwrap();
        std::fs::write(snip.join("source.c"), "int x;\n").unwrap();
        let err = load_corpus(dir.path()).unwrap_err();
        assert!(matches!(err, CorpusError::MissingSidecar { .. }));
    }

    #[test]
    fn duplicate_ids_rejected_across_families() {
        let dir = tempfile::tempdir().unwrap();
        let a = snippet("dup", 120, "strcpy(buf, s);\n");
        let b = snippet("dup", 121, "strcpy(buf, s);\n");
        for s in [a, b] {
            let d = dir.path().join(family_slug(&s.cwe.family)).join(&s.id);
            std::fs::create_dir_all(&d).unwrap();
            std::fs::write(d.join("source.c"), &s.source).unwrap();
            std::fs::write(d.join("meta.json"), serde_json::to_string(&MetaSidecar::from_snippet(&s)).unwrap())
                .unwrap();
        }
        assert!(matches!(load_corpus(dir.path()), Err(CorpusError::DuplicateId { .. })));
    }

    #[test]
    fn malformed_meta_and_counts_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = Corpus::new(Taxonomy::builtin(), vec![snippet("a", 120, "strcpy(buf, s);\n")]).unwrap();
        write_corpus(&corpus, dir.path()).unwrap();
        std::fs::write(dir.path().join("counts.json"), r#"{"Buffer Copy": 2}"#).unwrap();
        assert!(matches!(load_corpus(dir.path()), Err(CorpusError::CountsMismatch { .. })));
        std::fs::remove_file(dir.path().join("counts.json")).unwrap();
        std::fs::write(dir.path().join("buffer-copy/a/meta.json"), "{not json").unwrap();
        assert!(matches!(load_corpus(dir.path()), Err(CorpusError::Malformed { .. })));
    }

    #[test]
    fn code_dependent_requires_annotations() {
        let mut s = snippet("x", 476, "p->x = 1;\n");
        s.truth = None;
        let err = Corpus::new(Taxonomy::builtin(), vec![s]).unwrap_err();
        assert!(matches!(err, CorpusError::MissingAnnotation { field: "vulnerable_symbol", .. }));
        // code-independent snippets may omit them
        assert!(Corpus::new(Taxonomy::builtin(), vec![snippet("y", 327, "MD5(d, n, out);\n")]).is_ok());
    }

    #[test]
    fn filter_preserves_order_and_recounts() {
        let corpus = Corpus::new(
            Taxonomy::builtin(),
            vec![
                snippet("a", 120, "x\n"),
                snippet("b", 327, "x\n"),
                snippet("c", 121, "x\n"),
                snippet("d", 338, "x\n"),
            ],
        )
        .unwrap();
        let ind = corpus.filter_dependence(Dependence::CodeIndependent);
        assert_eq!(ind.snippets().iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["b", "d"]);
        assert_eq!(ind.counts().values().sum::<usize>(), 2);
        assert!(corpus.filter(|_| false).is_empty());
        assert_eq!(corpus.filter_family("stack overflow").len(), 1);
    }

    #[test]
    fn family_slugs() {
        assert_eq!(family_slug("Out-Bound Read"), "out-bound-read");
        assert_eq!(family_slug("Divide-by-zero"), "divide-by-zero");
    }
}

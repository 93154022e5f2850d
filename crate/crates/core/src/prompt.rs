//! Stage-specific detection and repair prompts.
//!
//! Templates are plain text with `{name}` placeholders. Substitution is a
//! single pass over the template, so placeholder-like text inside values
//! (C code is full of braces) is never expanded.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{GroundTruth, LineSpan, Snippet};
use crate::error::PromptError;
use crate::stage::Stage;
use crate::taxonomy::{CweClass, RuleSet};

pub const PLACEHOLDERS: &[&str] = &[
    "code", "language", "family", "symbol", "lines", "bound", "check", "placement", "subject", "context",
    "focus",
];

/// Security-context sentence disclosed at S2.
pub const DISCLOSURE_FRAGMENT: &str = "The following code contains a weakness.";

macro_rules! builtin_templates {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../assets/templates/", $name, ".txt")))),*]
    };
}

const BUILTIN: &[(&str, &str)] = builtin_templates!(
    "detection",
    "focus_s4",
    "focus_s5",
    "focus_s6",
    "focus_s7",
    "repair_s1",
    "repair_s2",
    "repair_s3",
    "repair_context",
    "intervention_detection",
    "intervention_focus",
    "fragments/buffer-overflow/s4",
    "fragments/buffer-overflow/s5",
    "fragments/buffer-overflow/s6",
    "fragments/buffer-overflow/s7",
    "fragments/off-by-one/s4",
    "fragments/off-by-one/s5",
    "fragments/off-by-one/s6",
    "fragments/off-by-one/s7",
    "fragments/sql-injection/s4",
    "fragments/sql-injection/s5",
    "fragments/sql-injection/s6",
    "fragments/sql-injection/s7",
    "fragments/null-dereference/s4",
    "fragments/null-dereference/s5",
    "fragments/null-dereference/s6",
    "fragments/null-dereference/s7",
    "fragments/divide-by-zero/s4",
    "fragments/divide-by-zero/s5",
    "fragments/divide-by-zero/s6",
    "fragments/divide-by-zero/s7",
    "fragments/weak-api/s4",
    "fragments/weak-api/s5",
    "fragments/weak-api/s6",
    "fragments/weak-api/s7",
    "fragments/generic/s4",
    "fragments/generic/s5",
    "fragments/generic/s6",
    "fragments/generic/s7",
);

/// Templates that must embed the snippet source exactly once.
const CODE_TEMPLATES: &[&str] = &["detection", "repair_s1", "repair_s2", "repair_s3", "repair_context"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub stage: Stage,
    pub detection_text: String,
    pub repair_text: String,
    pub context_fragment: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptEngine {
    templates: BTreeMap<String, String>,
}

impl Default for PromptEngine {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PromptEngine {
    pub fn builtin() -> Self {
        let templates = BUILTIN.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        PromptEngine { templates }
    }

    /// Built-in templates overridden by any `<name>.txt` found under `dir`.
    pub fn with_overrides(dir: &Path) -> Result<Self, PromptError> {
        let mut engine = Self::builtin();
        let names: Vec<String> = engine.templates.keys().cloned().collect();
        for name in names {
            let path = dir.join(format!("{name}.txt"));
            if path.is_file() {
                let text = std::fs::read_to_string(&path).map_err(|e| PromptError::Template {
                    name: name.clone(),
                    message: format!("{}: {e}", path.display()),
                })?;
                let text = text.strip_suffix('\n').unwrap_or(&text).to_string();
                engine.templates.insert(name, text);
            }
        }
        engine.check()?;
        Ok(engine)
    }

    fn check(&self) -> Result<(), PromptError> {
        for name in CODE_TEMPLATES {
            let count = self.template(name)?.matches("{code}").count();
            if count != 1 {
                return Err(PromptError::Template {
                    name: name.to_string(),
                    message: format!("must contain {{code}} exactly once, found {count}"),
                });
            }
        }
        Ok(())
    }

    fn template(&self, name: &str) -> Result<&str, PromptError> {
        self.templates.get(name).map(String::as_str).ok_or_else(|| PromptError::Template {
            name: name.to_string(),
            message: "no such template".into(),
        })
    }

    /// Stable digest of all templates, recorded in run manifests.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for (k, v) in &self.templates {
            h.update(k.as_bytes());
            h.update([0]);
            h.update(v.as_bytes());
            h.update([0]);
        }
        hex::encode(h.finalize())
    }

    pub fn render_detection(&self, stage: Stage, snippet: &Snippet) -> Result<String, PromptError> {
        ensure_source(snippet)?;
        let focus = if stage.is_code_context() {
            let mut vars = Vars::new();
            vars.insert("subject", snippet.cwe.rule_set.subject().to_string());
            format!("\n{}", render(self.template(&format!("focus_s{}", stage.ordinal()))?, &vars))
        } else {
            String::new()
        };
        let mut vars = Vars::new();
        vars.insert("focus", focus);
        vars.insert("code", snippet.source.clone());
        vars.insert("language", snippet.language.clone());
        Ok(render(self.template("detection")?, &vars))
    }

    pub fn render_repair(&self, stage: Stage, snippet: &Snippet) -> Result<String, PromptError> {
        ensure_source(snippet)?;
        let mut vars = Vars::new();
        vars.insert("code", snippet.source.clone());
        vars.insert("language", snippet.language.clone());
        vars.insert("family", snippet.cwe.weakness.clone());
        let template = match stage {
            Stage::Bare => "repair_s1",
            Stage::VulnDisclosed => "repair_s2",
            Stage::CweDetail => "repair_s3",
            _ => {
                vars.insert("context", self.code_context(&snippet.id, &snippet.cwe, stage, snippet.truth.as_ref())?);
                "repair_context"
            }
        };
        Ok(render(self.template(template)?, &vars))
    }

    /// The sentence(s) a stage injects. Empty at S1; for S4–S7 the fragments
    /// of every code-context stage up to `stage`, in order.
    pub fn cwe_context_fragment(
        &self,
        cwe: &CweClass,
        stage: Stage,
        truth: Option<&GroundTruth>,
    ) -> Result<String, PromptError> {
        match stage {
            Stage::Bare => Ok(String::new()),
            Stage::VulnDisclosed => Ok(DISCLOSURE_FRAGMENT.to_string()),
            Stage::CweDetail => Ok(weakness_fragment(cwe)),
            _ => self.code_context("-", cwe, stage, truth),
        }
    }

    fn code_context(
        &self,
        snippet_id: &str,
        cwe: &CweClass,
        stage: Stage,
        truth: Option<&GroundTruth>,
    ) -> Result<String, PromptError> {
        let mut parts = Vec::new();
        for s in Stage::ALL.into_iter().filter(|s| s.is_code_context() && *s <= stage) {
            parts.push(self.stage_fragment(snippet_id, cwe, s, truth)?);
        }
        Ok(parts.join(" "))
    }

    fn stage_fragment(
        &self,
        snippet_id: &str,
        cwe: &CweClass,
        stage: Stage,
        truth: Option<&GroundTruth>,
    ) -> Result<String, PromptError> {
        let set = match cwe.rule_set {
            RuleSet::WeakCrypto | RuleSet::WeakPrng => "weak-api",
            other => other.as_str(),
        };
        let name = format!("fragments/{set}/s{}", stage.ordinal());
        let template = match self.template(&name) {
            Ok(t) => t,
            Err(_) => self.template(&format!("fragments/generic/s{}", stage.ordinal()))?,
        };
        let missing = |field| PromptError::MissingField { snippet: snippet_id.to_string(), stage, field };
        let mut vars = Vars::new();
        vars.insert("subject", cwe.rule_set.subject().to_string());
        vars.insert("family", cwe.weakness.clone());
        for field in used_placeholders(template) {
            let value = match field {
                "symbol" => truth.map(|t| t.vulnerable_symbol.clone()).ok_or(missing("vulnerable_symbol"))?,
                "lines" => truth.map(|t| describe_lines(t.vulnerable_lines)).ok_or(missing("vulnerable_lines"))?,
                "bound" => truth.and_then(|t| t.correct_bound.clone()).ok_or(missing("correct_bound"))?,
                "check" => truth.map(|t| t.required_check.clone()).ok_or(missing("required_check"))?,
                "placement" => truth.map(|t| t.placement_hint.clone()).ok_or(missing("placement_hint"))?,
                _ => continue,
            };
            vars.insert(field, value);
        }
        Ok(render(template, &vars))
    }

    pub fn bundle(&self, stage: Stage, snippet: &Snippet) -> Result<PromptBundle, PromptError> {
        let context_fragment = match stage {
            Stage::Bare | Stage::VulnDisclosed | Stage::CweDetail => {
                self.cwe_context_fragment(&snippet.cwe, stage, snippet.truth.as_ref())?
            }
            _ => self.stage_fragment(&snippet.id, &snippet.cwe, stage, snippet.truth.as_ref())?,
        };
        Ok(PromptBundle {
            stage,
            detection_text: self.render_detection(stage, snippet)?,
            repair_text: self.render_repair(stage, snippet)?,
            context_fragment,
        })
    }

    /// The correct answer supplied after an incorrect detection.
    pub fn intervention_text(&self, stage: Stage, snippet: &Snippet) -> Result<String, PromptError> {
        let mut vars = Vars::new();
        vars.insert("family", snippet.cwe.weakness.clone());
        vars.insert("subject", snippet.cwe.rule_set.subject().to_string());
        let template = match (stage.is_code_context(), snippet.truth.as_ref()) {
            (true, Some(truth)) => {
                vars.insert("symbol", truth.vulnerable_symbol.clone());
                "intervention_focus"
            }
            (true, None) => {
                return Err(PromptError::MissingField {
                    snippet: snippet.id.clone(),
                    stage,
                    field: "vulnerable_symbol",
                });
            }
            (false, _) => "intervention_detection",
        };
        Ok(render(self.template(template)?, &vars))
    }

    /// Code-context correction naming an operator-supplied identifier.
    pub fn intervention_with_symbol(&self, snippet: &Snippet, symbol: &str) -> Result<String, PromptError> {
        let mut vars = Vars::new();
        vars.insert("family", snippet.cwe.weakness.clone());
        vars.insert("subject", snippet.cwe.rule_set.subject().to_string());
        vars.insert("symbol", symbol.to_string());
        Ok(render(self.template("intervention_focus")?, &vars))
    }
}

/// S3 security-context sentence for a class.
pub fn weakness_fragment(cwe: &CweClass) -> String {
    format!("The following code contains a {} weakness.", cwe.weakness)
}

fn ensure_source(snippet: &Snippet) -> Result<(), PromptError> {
    if snippet.source.trim().is_empty() {
        Err(PromptError::EmptySource(snippet.id.clone()))
    } else {
        Ok(())
    }
}

pub fn describe_lines(span: LineSpan) -> String {
    if span.start == span.end {
        format!("line {}", span.start)
    } else {
        format!("lines {}-{}", span.start, span.end)
    }
}

type Vars = BTreeMap<&'static str, String>;

/// Single-pass placeholder substitution. Unknown `{...}` sequences are kept.
pub fn render(template: &str, vars: &BTreeMap<&'static str, String>) -> String {
    let mut out = String::with_capacity(template.len() + vars.values().map(String::len).sum::<usize>());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) if vars.contains_key(&after[..close]) => {
                out.push_str(&vars[&after[..close]]);
                rest = &after[close + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

fn used_placeholders(template: &str) -> Vec<&'static str> {
    PLACEHOLDERS
        .iter()
        .copied()
        .filter(|p| template.contains(&format!("{{{p}}}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::Taxonomy;

    fn snippet(cwe: u32) -> Snippet {
        let cwe = Taxonomy::builtin().get(cwe).unwrap().clone();
        Snippet {
            id: "bc-001".into(),
            language: "c".into(),
            source: "int main(void) {\n  char buf[8];\n  gets(buf);\n  return 0;\n}".into(),
            dependence: cwe.dependence,
            cwe,
            truth: Some(GroundTruth {
                vulnerable_symbol: "buf".into(),
                vulnerable_lines: LineSpan::new(3, 3),
                correct_bound: Some("len+1".into()),
                required_check: "length guard before copy".into(),
                placement_hint: "immediately before the copy".into(),
                exploit_input: None,
                functional_cases: vec![],
            }),
        }
    }

    #[test]
    fn render_is_single_pass() {
        let mut vars = Vars::new();
        vars.insert("code", "if (x) { y = {bound}; }".into());
        vars.insert("bound", "nope".into());
        assert_eq!(render("A {code} B {unknown}", &vars), "A if (x) { y = {bound}; } B {unknown}");
    }

    #[test]
    fn s1_detection_is_template_then_code() {
        let p = PromptEngine::builtin();
        let s = snippet(120);
        let text = p.render_detection(Stage::Bare, &s).unwrap();
        let expected = format!(
            "You are a security expert skilled in static program analysis. Please analyze the following code snippet and indicate your analysis result using one of the following options:\n(1) YES: A security vulnerability detected.\n(2) NO: No security vulnerability is present.\n\n```c\n{}\n```",
            s.source
        );
        assert_eq!(text, expected);
    }

    #[test]
    fn s4_detection_asks_focus_without_leaking() {
        let p = PromptEngine::builtin();
        let s = snippet(120);
        let text = p.render_detection(Stage::BufferIdentification, &s).unwrap();
        assert!(text.contains("FOCUS: <identifier>"));
        let without_code = text.replace(&s.source, "");
        assert!(!regex::Regex::new(r"\bbuf\b").unwrap().is_match(&without_code));
    }

    #[test]
    fn repair_templates_per_stage() {
        let p = PromptEngine::builtin();
        let s = snippet(120);
        assert!(p.render_repair(Stage::Bare, &s).unwrap().contains("rewrite the code to repair those vulnerabilities"));
        assert!(p.render_repair(Stage::VulnDisclosed, &s).unwrap().contains("The following code contains a weakness."));
        assert!(p.render_repair(Stage::CweDetail, &s).unwrap().contains("contains a buffer overflow weakness"));
        for stage in Stage::ALL {
            let text = p.render_repair(stage, &s).unwrap();
            assert!(text.ends_with("Do not make any other changes to the code."), "{stage}");
            assert_eq!(text.matches(&s.source).count(), 1, "{stage}");
        }
    }

    #[test]
    fn s5_requires_bound() {
        let p = PromptEngine::builtin();
        let mut s = snippet(120);
        s.truth.as_mut().unwrap().correct_bound = None;
        assert!(p.render_repair(Stage::BufferIdentification, &s).is_ok());
        let err = p.render_repair(Stage::BoundSelection, &s).unwrap_err();
        assert!(matches!(err, PromptError::MissingField { field: "correct_bound", .. }), "{err}");
        // divide-by-zero fragments do not consume the bound
        let mut d = snippet(369);
        d.truth.as_mut().unwrap().correct_bound = None;
        assert!(p.render_repair(Stage::SuitablePlacement, &d).is_ok());
    }

    #[test]
    fn empty_source_rejected() {
        let p = PromptEngine::builtin();
        let mut s = snippet(120);
        s.source = String::new();
        assert!(matches!(p.render_detection(Stage::Bare, &s), Err(PromptError::EmptySource(_))));
    }

    #[test]
    fn per_cwe_fragments() {
        let p = PromptEngine::builtin();
        let t = Taxonomy::builtin();
        let s = snippet(120);
        let truth = s.truth.as_ref();
        let obo = p.bundle(Stage::BoundSelection, &Snippet { cwe: t.get(193).unwrap().clone(), ..s.clone() }).unwrap();
        assert!(obo.context_fragment.contains("one-byte change"));
        let sql = p.bundle(Stage::RangePrecision, &Snippet { cwe: t.get(89).unwrap().clone(), ..s.clone() }).unwrap();
        assert!(sql.context_fragment.contains("Sanitize") && sql.context_fragment.contains("parameterize"));
        let mut dest = s.truth.clone().unwrap();
        dest.vulnerable_symbol = "dest".into();
        let frag = p.cwe_context_fragment(t.get(120).unwrap(), Stage::BufferIdentification, Some(&dest)).unwrap();
        assert!(frag.contains("`dest`"));
        assert_eq!(p.cwe_context_fragment(t.get(120).unwrap(), Stage::Bare, truth).unwrap(), "");
    }

    #[test]
    fn overrides_must_keep_code_placeholder() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("repair_s1.txt"), "no code here\n").unwrap();
        assert!(matches!(PromptEngine::with_overrides(dir.path()), Err(PromptError::Template { .. })));
        std::fs::write(dir.path().join("repair_s1.txt"), "Fix it:\n{code}\n").unwrap();
        let p = PromptEngine::with_overrides(dir.path()).unwrap();
        let s = snippet(120);
        assert_eq!(p.render_repair(Stage::Bare, &s).unwrap(), format!("Fix it:\n{}", s.source));
        assert_ne!(p.digest(), PromptEngine::builtin().digest());
    }
}

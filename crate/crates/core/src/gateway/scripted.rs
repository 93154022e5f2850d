use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ChatBackend, ChatTurn, PromptKey, PromptKind, check_transcript};
use crate::error::GatewayError;
use crate::stage::Stage;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedRule {
    pub snippet_id: String,
    pub stage: Stage,
    pub prompt_kind: PromptKind,
    pub response: String,
    /// SHA-256 of the prompt text, checked in strict mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_digest: Option<String>,
}

pub fn prompt_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Reads a rule file. An empty (or whitespace-only) file is an empty set.
pub fn load_script(path: &Path) -> Result<Vec<ScriptedRule>, GatewayError> {
    let err = |message: String| GatewayError::Script { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let rules: Vec<ScriptedRule> = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    check_unique(&rules).map_err(err)?;
    Ok(rules)
}

fn check_unique(rules: &[ScriptedRule]) -> Result<(), String> {
    let mut seen = HashMap::new();
    for (i, r) in rules.iter().enumerate() {
        if let Some(first) = seen.insert((&r.snippet_id, r.stage, r.prompt_kind), i) {
            return Err(format!(
                "rules {first} and {i} both match snippet {}, stage {}, {} prompt",
                r.snippet_id,
                r.stage,
                r.prompt_kind.as_str()
            ));
        }
    }
    Ok(())
}

/// Deterministic backend answering from a fixed rule table.
#[derive(Debug, Clone)]
pub struct ScriptedBackend {
    rules: HashMap<(String, Stage, PromptKind), ScriptedRule>,
    strict: bool,
}

impl ScriptedBackend {
    pub fn new(rules: Vec<ScriptedRule>, strict: bool) -> Result<Self, GatewayError> {
        check_unique(&rules).map_err(|m| GatewayError::Script { path: "<memory>".into(), message: m })?;
        let rules = rules.into_iter().map(|r| ((r.snippet_id.clone(), r.stage, r.prompt_kind), r)).collect();
        Ok(ScriptedBackend { rules, strict })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl ChatBackend for ScriptedBackend {
    fn complete(&self, key: &PromptKey, transcript: &[ChatTurn]) -> Result<String, GatewayError> {
        let prompt = check_transcript(transcript)?;
        let rule = self.rules.get(&(key.snippet_id.clone(), key.stage, key.kind)).ok_or_else(|| GatewayError::ScriptedMiss {
            snippet_id: key.snippet_id.clone(),
            stage: key.stage,
            kind: key.kind.as_str().into(),
        })?;
        if self.strict {
            let actual = prompt_digest(prompt);
            let expected = rule.prompt_digest.clone().unwrap_or_else(|| "<none>".into());
            if expected != actual {
                return Err(GatewayError::PromptDrift {
                    snippet_id: key.snippet_id.clone(),
                    stage: key.stage,
                    kind: key.kind.as_str().into(),
                    expected,
                    actual,
                });
            }
        }
        Ok(rule.response.clone())
    }

    fn kind(&self) -> &'static str {
        "scripted"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(id: &str, stage: Stage, kind: PromptKind, response: &str) -> ScriptedRule {
        ScriptedRule { snippet_id: id.into(), stage, prompt_kind: kind, response: response.into(), prompt_digest: None }
    }

    fn key(id: &str, stage: Stage, kind: PromptKind) -> PromptKey {
        PromptKey { snippet_id: id.into(), stage, kind }
    }

    #[test]
    fn lookup_and_miss() {
        let b = ScriptedBackend::new(vec![rule("bc-001", Stage::S1, PromptKind::Detection, "YES buffer overflow")], false).unwrap();
        let t = [ChatTurn::user("prompt")];
        assert_eq!(b.complete(&key("bc-001", Stage::S1, PromptKind::Detection), &t).unwrap(), "YES buffer overflow");
        let miss = b.complete(&key("bc-001", Stage::S1, PromptKind::Repair), &t).unwrap_err();
        assert!(matches!(miss, GatewayError::ScriptedMiss { .. }));
    }

    #[test]
    fn script_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.json");
        std::fs::write(&p, "").unwrap();
        assert!(load_script(&p).unwrap().is_empty());
        let two = vec![rule("a", Stage::S1, PromptKind::Detection, "x"), rule("a", Stage::S1, PromptKind::Repair, "y")];
        std::fs::write(&p, serde_json::to_string(&two).unwrap()).unwrap();
        assert_eq!(load_script(&p).unwrap().len(), 2);
        let dup = vec![rule("a", Stage::S2, PromptKind::Detection, "x"), rule("a", Stage::S2, PromptKind::Detection, "y")];
        std::fs::write(&p, serde_json::to_string(&dup).unwrap()).unwrap();
        assert!(load_script(&p).is_err());
        std::fs::write(&p, r#"[{"snippet_id":"a","stage":3,"prompt_kind":"repair","response":"r"}]"#).unwrap();
        assert_eq!(load_script(&p).unwrap()[0].stage, Stage::S3);
    }

    #[test]
    fn strict_mode_checks_digest() {
        let mut r = rule("a", Stage::S1, PromptKind::Detection, "x");
        r.prompt_digest = Some(prompt_digest("the prompt"));
        let b = ScriptedBackend::new(vec![r], true).unwrap();
        let k = key("a", Stage::S1, PromptKind::Detection);
        assert!(b.complete(&k, &[ChatTurn::user("the prompt")]).is_ok());
        assert!(matches!(b.complete(&k, &[ChatTurn::user("edited prompt")]), Err(GatewayError::PromptDrift { .. })));
    }
}

//! Cross-checks the static rules against the instrumented run on a set of
//! hand-written fixes.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ToolchainConfig, ValidationStatus, dynamic_check, static_check};
use crate::corpus::{Corpus, load_corpus};
use crate::error::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixIntent {
    Correct,
    Incorrect,
    FunctionalityBroken,
}

/// One hand-written candidate and the verdicts it is expected to receive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixCase {
    pub snippet: String,
    /// Relative to the manifest directory.
    pub file: String,
    pub intent: FixIntent,
    #[serde(rename = "static")]
    pub expected_static: ValidationStatus,
    #[serde(rename = "dynamic")]
    pub expected_dynamic: ValidationStatus,
    /// Why the two oracles are expected to disagree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixManifest {
    /// Corpus the fixes apply to, relative to the manifest directory.
    pub corpus: PathBuf,
    pub fixes: Vec<FixCase>,
}

/// A manifest together with its source text and corpus.
#[derive(Debug)]
pub struct FixSet {
    pub dir: PathBuf,
    pub manifest: FixManifest,
    pub corpus: Corpus,
    pub sources: Vec<String>,
}

pub fn load_fix_set(manifest_path: &Path) -> Result<FixSet, CorpusError> {
    let io = |path: &Path, e: std::io::Error| CorpusError::Io { path: path.to_path_buf(), message: e.to_string() };
    let text = std::fs::read_to_string(manifest_path).map_err(|e| io(manifest_path, e))?;
    let manifest: FixManifest = serde_json::from_str(&text)
        .map_err(|e| CorpusError::Malformed { path: manifest_path.to_path_buf(), message: e.to_string() })?;
    let dir = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let corpus = load_corpus(&dir.join(&manifest.corpus))?;
    let mut sources = Vec::with_capacity(manifest.fixes.len());
    for case in &manifest.fixes {
        if corpus.get(&case.snippet).is_none() {
            return Err(CorpusError::Invalid {
                path: manifest_path.to_path_buf(),
                message: format!("fix `{}` names unknown snippet `{}`", case.file, case.snippet),
            });
        }
        let path = dir.join(&case.file);
        sources.push(std::fs::read_to_string(&path).map_err(|e| io(&path, e))?);
    }
    Ok(FixSet { dir, manifest, corpus, sources })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixVerdict {
    pub case: FixCase,
    pub static_status: ValidationStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamic_status: Option<ValidationStatus>,
}

impl FixVerdict {
    /// `None` when either side says nothing about memory safety.
    pub fn agrees(&self) -> Option<bool> {
        let dynamic = self.dynamic_status?;
        let (Some(a), Some(b)) = (security_verdict(self.static_status), security_verdict(dynamic)) else {
            return None;
        };
        Some(a == b)
    }

    pub fn matches_expectation(&self) -> bool {
        self.static_status == self.case.expected_static
            && self.dynamic_status.is_none_or(|d| d == self.case.expected_dynamic)
    }
}

/// Vulnerable or not. A functional mismatch still means the exploit ran
/// clean; compile failures and skipped runs say nothing.
pub fn security_verdict(status: ValidationStatus) -> Option<bool> {
    match status {
        ValidationStatus::StillVulnerable | ValidationStatus::NewVulnerability => Some(true),
        ValidationStatus::Repaired | ValidationStatus::FunctionalityBroken => Some(false),
        ValidationStatus::NotCompilable | ValidationStatus::Inconclusive => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdicts: Vec<FixVerdict>,
    /// Original snippets the static rules do not flag.
    pub unflagged_originals: Vec<String>,
    pub originals: usize,
    pub dynamic_ran: bool,
}

impl OracleReport {
    /// Cases where both oracles gave a security verdict.
    pub fn compared(&self) -> usize {
        self.verdicts.iter().filter(|v| v.agrees().is_some()).count()
    }

    pub fn agreements(&self) -> usize {
        self.verdicts.iter().filter(|v| v.agrees() == Some(true)).count()
    }

    pub fn agreement(&self) -> Option<f64> {
        let n = self.compared();
        (n > 0).then(|| self.agreements() as f64 / n as f64)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &FixVerdict> {
        self.verdicts.iter().filter(|v| v.agrees() == Some(false))
    }
}

/// Runs the static rules on every original and fix, plus the instrumented
/// run on every fix when a toolchain is given.
pub fn evaluate_fix_set(set: &FixSet, toolchain: Option<&ToolchainConfig>) -> OracleReport {
    let unflagged_originals = set
        .corpus
        .snippets()
        .iter()
        .filter(|s| static_check(&s.source, &s.cwe, s.truth.as_ref()).status != ValidationStatus::StillVulnerable)
        .map(|s| s.id.clone())
        .collect();
    let verdicts = set
        .manifest
        .fixes
        .par_iter()
        .zip(set.sources.par_iter())
        .map(|(case, source)| {
            // load_fix_set checked the snippet exists
            let snippet = set.corpus.get(&case.snippet).expect("validated snippet id");
            let truth = snippet.truth.as_ref();
            let static_status = static_check(source, &snippet.cwe, truth).status;
            let dynamic_status = match (toolchain, truth) {
                (Some(tc), Some(t)) if t.dynamic_enabled() => Some(dynamic_check(source, snippet.extension(), t, tc).status),
                _ => None,
            };
            FixVerdict { case: case.clone(), static_status, dynamic_status }
        })
        .collect();
    OracleReport { verdicts, unflagged_originals, originals: set.corpus.len(), dynamic_ran: toolchain.is_some() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(s: ValidationStatus, d: Option<ValidationStatus>) -> FixVerdict {
        FixVerdict {
            case: FixCase {
                snippet: "x".into(),
                file: "x.c".into(),
                intent: FixIntent::Correct,
                expected_static: s,
                expected_dynamic: d.unwrap_or(s),
                disagreement: None,
            },
            static_status: s,
            dynamic_status: d,
        }
    }

    #[test]
    fn agreement_ignores_silent_verdicts() {
        use ValidationStatus::*;
        assert_eq!(verdict(Repaired, Some(FunctionalityBroken)).agrees(), Some(true));
        assert_eq!(verdict(NewVulnerability, Some(StillVulnerable)).agrees(), Some(true));
        assert_eq!(verdict(Repaired, Some(StillVulnerable)).agrees(), Some(false));
        assert_eq!(verdict(Repaired, Some(NotCompilable)).agrees(), None);
        assert_eq!(verdict(Inconclusive, Some(Repaired)).agrees(), None);
        assert_eq!(verdict(Repaired, None).agrees(), None);
    }

    #[test]
    fn report_ratio() {
        use ValidationStatus::*;
        let report = OracleReport {
            verdicts: vec![
                verdict(Repaired, Some(Repaired)),
                verdict(Repaired, Some(StillVulnerable)),
                verdict(StillVulnerable, Some(StillVulnerable)),
                verdict(Repaired, Some(Inconclusive)),
            ],
            unflagged_originals: vec![],
            originals: 0,
            dynamic_ran: true,
        };
        assert_eq!(report.compared(), 3);
        assert_eq!(report.agreements(), 2);
        assert_eq!(report.disagreements().count(), 1);
        assert!((report.agreement().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }
}

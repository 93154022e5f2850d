//! Repair validation: syntactic rules per weakness class, an instrumented
//! compile-and-run oracle, and a line-diff scope report.

pub mod bounds;
pub mod dynamic;
pub mod lexer;
pub mod oracle;
pub mod program;
pub mod rules;
pub mod scope;

use serde::{Deserialize, Serialize};

use crate::corpus::Snippet;

pub use dynamic::{ToolchainConfig, dynamic_check};
pub use rules::static_check;
pub use scope::{ScopeReport, check_scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationStatus {
    Repaired,
    StillVulnerable,
    NewVulnerability,
    FunctionalityBroken,
    NotCompilable,
    Inconclusive,
}

impl ValidationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ValidationStatus::Repaired => "repaired",
            ValidationStatus::StillVulnerable => "still-vulnerable",
            ValidationStatus::NewVulnerability => "new-vulnerability",
            ValidationStatus::FunctionalityBroken => "functionality-broken",
            ValidationStatus::NotCompilable => "not-compilable",
            ValidationStatus::Inconclusive => "inconclusive",
        }
    }

    /// Statuses that block a repaired verdict from the other mode.
    pub fn is_vulnerable(self) -> bool {
        matches!(self, ValidationStatus::StillVulnerable | ValidationStatus::NewVulnerability)
    }
}

impl std::fmt::Display for ValidationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ValidationStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown validation status `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Static,
    Dynamic,
    Combined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// Rule id (`buffer.unbounded-copy`) or runtime signal (`runtime.asan`).
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl Finding {
    pub fn new(rule: &str, line: Option<usize>, message: impl Into<String>) -> Finding {
        Finding { rule: rule.to_string(), line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub status: ValidationStatus,
    pub evidence: Vec<Finding>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<ScopeReport>,
}

impl ValidationResult {
    pub fn new(status: ValidationStatus, mode: Mode, evidence: Vec<Finding>) -> Self {
        ValidationResult { status, evidence, mode, scope: None }
    }

    pub fn is_repaired(&self) -> bool {
        self.status == ValidationStatus::Repaired
    }
}

/// Validates a candidate against the snippet's ground truth. The dynamic
/// verdict wins when it is conclusive, except that it can never upgrade a
/// statically vulnerable candidate to repaired.
pub fn validate(snippet: &Snippet, repaired: &str, toolchain: Option<&ToolchainConfig>) -> ValidationResult {
    let truth = snippet.truth.as_ref();
    let stat = static_check(repaired, &snippet.cwe, truth);
    let scope = truth.map(|t| check_scope(&snippet.source, repaired, t, scope::DEFAULT_WINDOW));
    let dynamic = match (toolchain, truth) {
        (Some(tc), Some(t)) if t.dynamic_enabled() => Some(dynamic_check(repaired, snippet.extension(), t, tc)),
        _ => None,
    };
    let mut result = combine(stat, dynamic);
    if let Some(scope) = scope {
        if scope.out_of_scope {
            result.evidence.push(Finding::new(
                "scope.out-of-scope",
                scope.changed_line_spans.first().map(|s| s.start),
                "changes outside the annotated lines (advisory)",
            ));
        }
        result.scope = Some(scope);
    }
    result
}

pub fn combine(stat: ValidationResult, dynamic: Option<ValidationResult>) -> ValidationResult {
    let Some(dynamic) = dynamic.filter(|d| d.status != ValidationStatus::Inconclusive) else {
        return stat;
    };
    let mut evidence = stat.evidence.clone();
    evidence.extend(dynamic.evidence.iter().cloned());
    let status = if dynamic.status == ValidationStatus::Repaired && stat.status.is_vulnerable() {
        stat.status
    } else {
        dynamic.status
    };
    ValidationResult::new(status, Mode::Combined, evidence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(status: ValidationStatus, mode: Mode) -> ValidationResult {
        ValidationResult::new(status, mode, vec![])
    }

    #[test]
    fn combination_policy() {
        use ValidationStatus::*;
        let c = combine(r(Repaired, Mode::Static), None);
        assert_eq!((c.status, c.mode), (Repaired, Mode::Static));
        let c = combine(r(Repaired, Mode::Static), Some(r(StillVulnerable, Mode::Dynamic)));
        assert_eq!((c.status, c.mode), (StillVulnerable, Mode::Combined));
        let c = combine(r(Inconclusive, Mode::Static), Some(r(Inconclusive, Mode::Dynamic)));
        assert_eq!(c.status, Inconclusive);
        let c = combine(r(NewVulnerability, Mode::Static), Some(r(Repaired, Mode::Dynamic)));
        assert_eq!(c.status, NewVulnerability);
        let c = combine(r(StillVulnerable, Mode::Static), Some(r(FunctionalityBroken, Mode::Dynamic)));
        assert_eq!(c.status, FunctionalityBroken);
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [
            ValidationStatus::Repaired,
            ValidationStatus::StillVulnerable,
            ValidationStatus::NewVulnerability,
            ValidationStatus::FunctionalityBroken,
            ValidationStatus::NotCompilable,
            ValidationStatus::Inconclusive,
        ] {
            assert_eq!(s.as_str().parse::<ValidationStatus>().unwrap(), s);
        }
    }
}

//! Anchor phrases and the no-leak rule for the first three stages.

use regex::Regex;
use repair_cascade::{PromptEngine, Snippet, Stage};

/// (stage, detection or repair, phrase) that must appear verbatim.
pub const ANCHORS: [(Stage, bool, &str); 4] = [
    (Stage::Bare, true, "YES: A security vulnerability detected."),
    (Stage::Bare, false, "rewrite the code to repair those vulnerabilities"),
    (Stage::VulnDisclosed, false, "The following code contains a weakness"),
    (Stage::CweDetail, false, "contains a buffer overflow weakness"),
];

/// Missing anchors for a buffer-overflow snippet, as messages.
pub fn missing_anchors(prompts: &PromptEngine, snippet: &Snippet) -> Vec<String> {
    let mut out = Vec::new();
    for (stage, detection, phrase) in ANCHORS {
        let text = if detection { prompts.render_detection(stage, snippet) } else { prompts.render_repair(stage, snippet) };
        match text {
            Ok(t) if t.contains(phrase) => {}
            Ok(_) => out.push(format!("{}: {stage} lacks {phrase:?}", snippet.id)),
            Err(e) => out.push(format!("{}: {stage} failed to render: {e}", snippet.id)),
        }
    }
    out
}

/// Phrases asserting that a weakness is present.
const ASSERTIONS: [&str; 5] = ["vulnerability exists", "contains a weakness", "contains a vulnerability", "is vulnerable", "weakness"];

/// Facts disclosed by the S1 prompts outside the code itself.
pub fn s1_leaks(prompts: &PromptEngine, snippet: &Snippet) -> Vec<String> {
    let mut out = Vec::new();
    for (kind, text) in [
        ("detection", prompts.render_detection(Stage::Bare, snippet)),
        ("repair", prompts.render_repair(Stage::Bare, snippet)),
    ] {
        let Ok(text) = text else {
            out.push(format!("{}: S1 {kind} failed to render", snippet.id));
            continue;
        };
        let prose = text.replace(&snippet.source, "").to_lowercase();
        let mut secrets = vec![snippet.cwe.family.to_lowercase(), snippet.cwe.weakness.to_lowercase()];
        secrets.extend(ASSERTIONS.iter().map(|a| a.to_string()));
        if let Some(t) = &snippet.truth {
            secrets.extend(t.correct_bound.iter().map(|b| b.to_lowercase()));
            let symbol = Regex::new(&format!(r"\b{}\b", regex::escape(&t.vulnerable_symbol.to_lowercase()))).unwrap();
            if symbol.is_match(&prose) {
                out.push(format!("{}: S1 {kind} names {}", snippet.id, t.vulnerable_symbol));
            }
        }
        for s in secrets.iter().filter(|s| !s.is_empty()) {
            if prose.contains(s.as_str()) {
                out.push(format!("{}: S1 {kind} contains {s:?}", snippet.id));
            }
        }
    }
    out
}

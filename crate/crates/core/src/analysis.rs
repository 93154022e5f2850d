//! Detection-verdict parsing and repaired-code extraction.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::GroundTruth;
use crate::stage::Stage;
use crate::taxonomy::{CweClass, Taxonomy, normalize_phrase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub answer: Answer,
    /// Families whose lexicon matched, in taxonomy order.
    pub mentioned_families: Vec<String>,
    pub correct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus_answer: Option<String>,
}

static ANSWER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(yes|no)\b").expect("static regex"));
static FOCUS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?im)^[\s>*_`#-]*focus[*_`]*\s*:\s*[`'\x22*_]*([A-Za-z_][A-Za-z0-9_]*)").expect("static regex")
});

/// Lowercased words separated by single spaces, punctuation dropped.
fn words(text: &str) -> String {
    let cleaned: String = text.chars().map(|c| if c.is_alphanumeric() { c } else { ' ' }).collect();
    format!(" {} ", normalize_phrase(&cleaned))
}

fn mentions(haystack: &str, class: &CweClass) -> bool {
    class.keywords.iter().any(|k| {
        let needle = words(k);
        !needle.trim().is_empty() && haystack.contains(&needle)
    })
}

pub fn parse_detection(
    response: &str,
    expected: &CweClass,
    stage: Stage,
    truth: Option<&GroundTruth>,
    taxonomy: &Taxonomy,
) -> DetectionVerdict {
    let answer = match ANSWER.captures(response).map(|c| c[1].to_ascii_lowercase()) {
        Some(w) if w == "yes" => Answer::Yes,
        Some(_) => Answer::No,
        None => Answer::Unparseable,
    };
    let haystack = words(response);
    let mut mentioned_families: Vec<String> = taxonomy
        .classes()
        .iter()
        .filter(|c| mentions(&haystack, c))
        .map(|c| c.family.clone())
        .collect();
    // classes outside the taxonomy still count for themselves
    if !taxonomy.classes().iter().any(|c| c.id == expected.id) && mentions(&haystack, expected) {
        mentioned_families.push(expected.family.clone());
    }
    let focus_answer = FOCUS.captures(response).map(|c| c[1].to_string());
    let mut correct = answer == Answer::Yes && mentioned_families.contains(&expected.family);
    if stage.is_code_context() {
        let matches = match (truth, &focus_answer) {
            (Some(t), Some(f)) => f.eq_ignore_ascii_case(&t.vulnerable_symbol),
            _ => false,
        };
        correct &= matches;
    }
    DetectionVerdict { answer, mentioned_families, correct, focus_answer }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    pub code: String,
}

impl CodeBlock {
    pub fn line_count(&self) -> usize {
        self.code.lines().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedRepair {
    pub blocks: Vec<CodeBlock>,
    /// Index into `blocks`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen: Option<usize>,
    pub raw: String,
}

impl ExtractedRepair {
    pub fn chosen_block(&self) -> Option<&CodeBlock> {
        self.chosen.and_then(|i| self.blocks.get(i))
    }

    pub fn chosen_code(&self) -> Option<&str> {
        self.chosen_block().map(|b| b.code.as_str())
    }
}

/// Fenced blocks: a line starting with three backticks opens a block (an
/// optional language tag follows), the next such line closes it, and an
/// unterminated block runs to the end of the text.
pub fn fenced_blocks(text: &str) -> Vec<CodeBlock> {
    let mut blocks = Vec::new();
    let mut current: Option<(Option<String>, Vec<&str>)> = None;
    for line in text.lines() {
        let fence = line.trim_start().starts_with("```");
        match (&mut current, fence) {
            (None, true) => {
                let tag = line.trim_start().trim_start_matches('`').trim();
                let language = tag.split_whitespace().next().map(str::to_string);
                current = Some((language, Vec::new()));
            }
            (Some(_), true) => {
                let (language, lines) = current.take().unwrap_or_default();
                blocks.push(CodeBlock { language, code: join_lines(&lines) });
            }
            (Some((_, lines)), false) => lines.push(line),
            (None, false) => {}
        }
    }
    if let Some((language, lines)) = current {
        blocks.push(CodeBlock { language, code: join_lines(&lines) });
    }
    blocks
}

fn join_lines(lines: &[&str]) -> String {
    let mut s = lines.join("\n");
    if !lines.is_empty() {
        s.push('\n');
    }
    s
}

/// Picks the longest block with at least half the original's lines (the
/// first on ties); otherwise the last block.
pub fn extract_repair(response: &str, original: &str) -> ExtractedRepair {
    let blocks = fenced_blocks(response);
    let original_lines = original.lines().count();
    let mut chosen: Option<usize> = None;
    for (i, b) in blocks.iter().enumerate() {
        if b.line_count() * 2 < original_lines {
            continue;
        }
        if chosen.is_none_or(|c| b.line_count() > blocks[c].line_count()) {
            chosen = Some(i);
        }
    }
    if chosen.is_none() && !blocks.is_empty() {
        chosen = Some(blocks.len() - 1);
    }
    ExtractedRepair { blocks, chosen, raw: response.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::LineSpan;

    fn truth(symbol: &str) -> GroundTruth {
        GroundTruth {
            vulnerable_symbol: symbol.into(),
            vulnerable_lines: LineSpan::new(1, 1),
            correct_bound: None,
            required_check: String::new(),
            placement_hint: String::new(),
            exploit_input: None,
            functional_cases: vec![],
        }
    }

    #[test]
    fn detection_examples() {
        let tax = Taxonomy::builtin();
        let bc = tax.get(120).unwrap();
        let v = parse_detection("YES. This code has a buffer overflow in strcpy.", bc, Stage::S1, None, &tax);
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.correct);
        assert!(v.mentioned_families.contains(&"Buffer Copy".to_string()));
        let v = parse_detection("NO vulnerabilities found.", bc, Stage::S1, None, &tax);
        assert_eq!((v.answer, v.correct), (Answer::No, false));
        assert!(v.mentioned_families.is_empty());
        let v = parse_detection("The snippet is risky.", bc, Stage::S1, None, &tax);
        assert_eq!((v.answer, v.correct), (Answer::Unparseable, false));
    }

    #[test]
    fn first_answer_token_wins() {
        let tax = Taxonomy::builtin();
        let bc = tax.get(120).unwrap();
        let v = parse_detection("No doubt: yes, a buffer-overflow.", bc, Stage::S1, None, &tax);
        assert_eq!(v.answer, Answer::No);
        // `yesterday` and `know` are not answers
        let v = parse_detection("I know it yesterday... Yes: Buffer Overflow", bc, Stage::S2, None, &tax);
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.correct);
    }

    #[test]
    fn focus_must_match_at_code_stages() {
        let tax = Taxonomy::builtin();
        let bc = tax.get(120).unwrap();
        let text = "YES: A security vulnerability detected. It is a buffer overflow.\nFOCUS: `Dest`";
        let v = parse_detection(text, bc, Stage::S4, Some(&truth("dest")), &tax);
        assert_eq!(v.focus_answer.as_deref(), Some("Dest"));
        assert!(v.correct);
        let v = parse_detection(text, bc, Stage::S4, Some(&truth("src")), &tax);
        assert!(!v.correct);
        let v = parse_detection("YES, buffer overflow.", bc, Stage::S5, Some(&truth("dest")), &tax);
        assert!(!v.correct);
    }

    #[test]
    fn fence_grammar() {
        let b = fenced_blocks("intro\n```c\nint a;\n```\ntext\n```\nx\ny");
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].language.as_deref(), Some("c"));
        assert_eq!(b[0].code, "int a;\n");
        assert_eq!(b[1].code, "x\ny\n");
        assert!(fenced_blocks("no code here").is_empty());
    }

    #[test]
    fn selection_prefers_full_program() {
        let original = "a\nb\nc\nd\ne\nf\n";
        let resp = "Change this:\n```c\nstrncpy(a, b, n);\nfix();\n```\nFull program:\n```c\na\nb\nc\nd\ne\nf2\n```\n";
        let r = extract_repair(resp, original);
        assert_eq!(r.chosen, Some(1));
        let r = extract_repair("```\none\n```\n```\ntwo\n```", original);
        assert_eq!(r.chosen, Some(1));
        let r = extract_repair("prose only", original);
        assert_eq!(r.chosen, None);
        assert!(r.blocks.is_empty());
    }
}

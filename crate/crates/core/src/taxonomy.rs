//! CWE taxonomy: families, detection lexicon and dependence classes.
//!
//! The built-in taxonomy covers the six buffer-overflow families, the four
//! other code-dependent weaknesses and two code-independent weaknesses used
//! for the dependence comparison. A corpus may extend or override it with a
//! `taxonomy.json` file at its root.
//!
//! The mapping of buffer-overflow families onto concrete CWE ids (e.g.
//! "Stack Overflow" as CWE-121) is a local convention.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::TaxonomyError;

const BUILTIN_TAXONOMY: &str = include_str!("../assets/taxonomy.json");

/// Whether repairing a weakness requires analysing the surrounding code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dependence {
    CodeIndependent,
    CodeDependent,
}

impl Dependence {
    pub fn as_str(self) -> &'static str {
        match self {
            Dependence::CodeIndependent => "code-independent",
            Dependence::CodeDependent => "code-dependent",
        }
    }
}

impl fmt::Display for Dependence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dependence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "code-independent" => Ok(Dependence::CodeIndependent),
            "code-dependent" => Ok(Dependence::CodeDependent),
            other => Err(format!("unknown dependence `{other}`")),
        }
    }
}

/// Which static rules and which context fragments apply to a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleSet {
    BufferOverflow,
    OffByOne,
    SqlInjection,
    NullDereference,
    DivideByZero,
    WeakCrypto,
    WeakPrng,
    /// No syntactic rules; only the generic context fragments apply.
    Generic,
}

impl RuleSet {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleSet::BufferOverflow => "buffer-overflow",
            RuleSet::OffByOne => "off-by-one",
            RuleSet::SqlInjection => "sql-injection",
            RuleSet::NullDereference => "null-dereference",
            RuleSet::DivideByZero => "divide-by-zero",
            RuleSet::WeakCrypto => "weak-crypto",
            RuleSet::WeakPrng => "weak-prng",
            RuleSet::Generic => "generic",
        }
    }

    /// Noun used in prompts for the at-risk program element.
    pub fn subject(self) -> &'static str {
        match self {
            RuleSet::BufferOverflow | RuleSet::OffByOne => "buffer",
            RuleSet::SqlInjection => "variable",
            RuleSet::NullDereference => "pointer",
            RuleSet::DivideByZero => "divisor",
            RuleSet::WeakCrypto | RuleSet::WeakPrng | RuleSet::Generic => "program element",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CweClass {
    pub id: u32,
    /// Reporting name, e.g. "Buffer Copy".
    pub family: String,
    /// Phrase substituted into the CWE-detail prompt, e.g. "buffer overflow".
    pub weakness: String,
    pub dependence: Dependence,
    pub rule_set: RuleSet,
    pub keywords: Vec<String>,
}

impl CweClass {
    pub fn label(&self) -> String {
        format!("CWE-{}", self.id)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TaxonomyEntry {
    family: String,
    weakness: String,
    dependence: Dependence,
    rule_set: RuleSet,
    keywords: Vec<String>,
}

/// Ordered set of CWE classes. Order is the reporting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    classes: Vec<CweClass>,
}

impl Taxonomy {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_TAXONOMY).expect("built-in taxonomy is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, TaxonomyError> {
        let raw: IndexMap<String, TaxonomyEntry> =
            serde_json::from_str(text).map_err(|e| TaxonomyError::Malformed(e.to_string()))?;
        let mut classes = Vec::with_capacity(raw.len());
        for (key, entry) in raw {
            let id = parse_cwe_id(&key).ok_or_else(|| TaxonomyError::BadId(key.clone()))?;
            classes.push(CweClass {
                id,
                family: entry.family,
                weakness: entry.weakness,
                dependence: entry.dependence,
                rule_set: entry.rule_set,
                keywords: entry.keywords,
            });
        }
        let taxonomy = Taxonomy { classes };
        taxonomy.check()?;
        Ok(taxonomy)
    }

    pub fn load(path: &Path) -> Result<Self, TaxonomyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TaxonomyError::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let map: IndexMap<String, TaxonomyEntry> = self
            .classes
            .iter()
            .map(|c| {
                (
                    c.id.to_string(),
                    TaxonomyEntry {
                        family: c.family.clone(),
                        weakness: c.weakness.clone(),
                        dependence: c.dependence,
                        rule_set: c.rule_set,
                        keywords: c.keywords.clone(),
                    },
                )
            })
            .collect();
        serde_json::to_string_pretty(&map).expect("taxonomy serializes")
    }

    /// Extends this taxonomy: classes with known ids are replaced in place,
    /// new ids are appended.
    pub fn extend_with(&mut self, other: Taxonomy) -> Result<(), TaxonomyError> {
        for class in other.classes {
            match self.classes.iter_mut().find(|c| c.id == class.id) {
                Some(slot) => *slot = class,
                None => self.classes.push(class),
            }
        }
        self.check()
    }

    fn check(&self) -> Result<(), TaxonomyError> {
        for (i, class) in self.classes.iter().enumerate() {
            if class.keywords.iter().all(|k| k.trim().is_empty()) {
                return Err(TaxonomyError::NoKeywords(class.id));
            }
            for other in &self.classes[..i] {
                if other.id == class.id {
                    return Err(TaxonomyError::DuplicateId(class.id));
                }
                if other.family == class.family {
                    return Err(TaxonomyError::DuplicateFamily(class.family.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn classes(&self) -> &[CweClass] {
        &self.classes
    }

    pub fn get(&self, id: u32) -> Option<&CweClass> {
        self.classes.iter().find(|c| c.id == id)
    }

    pub fn by_family(&self, family: &str) -> Option<&CweClass> {
        self.classes.iter().find(|c| c.family.eq_ignore_ascii_case(family))
    }

    /// Position of a family in reporting order.
    pub fn family_rank(&self, family: &str) -> usize {
        self.classes
            .iter()
            .position(|c| c.family == family)
            .unwrap_or(usize::MAX)
    }

    pub fn classify_dependence(&self, cwe: u32) -> Result<Dependence, TaxonomyError> {
        self.get(cwe)
            .map(|c| c.dependence)
            .ok_or(TaxonomyError::UnknownCwe(cwe))
    }
}

/// Accepts `120`, `CWE-120` and `cwe120`.
pub fn parse_cwe_id(text: &str) -> Option<u32> {
    let t = text.trim();
    let digits = t
        .strip_prefix("CWE-")
        .or_else(|| t.strip_prefix("cwe-"))
        .or_else(|| t.strip_prefix("CWE"))
        .or_else(|| t.strip_prefix("cwe"))
        .unwrap_or(t);
    digits.parse().ok()
}

/// Lowercases, folds `-`/`_` to spaces and collapses whitespace so lexicon
/// phrases match regardless of hyphenation.
pub fn normalize_phrase(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last_space = true;
    for ch in text.chars() {
        let ch = match ch {
            '-' | '_' => ' ',
            c if c.is_whitespace() => ' ',
            c => c.to_ascii_lowercase(),
        };
        if ch == ' ' {
            if !last_space {
                out.push(' ');
            }
            last_space = true;
        } else {
            out.push(ch);
            last_space = false;
        }
    }
    if out.ends_with(' ') {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_twelve_classes_in_table_order() {
        let t = Taxonomy::builtin();
        let families: Vec<_> = t.classes().iter().map(|c| c.family.as_str()).collect();
        assert_eq!(
            &families[..10],
            &[
                "Buffer Copy",
                "Stack Overflow",
                "Heap Overflow",
                "Integer Overflow",
                "Out-Bound Read",
                "Out-Bound Write",
                "Off-by-one",
                "SQL Injection",
                "Null Pointer Dereference",
                "Divide-by-zero"
            ]
        );
        assert_eq!(t.classes().len(), 12);
    }

    #[test]
    fn dependence_classification() {
        let t = Taxonomy::builtin();
        assert_eq!(t.classify_dependence(327).unwrap(), Dependence::CodeIndependent);
        assert_eq!(t.classify_dependence(338).unwrap(), Dependence::CodeIndependent);
        for id in [120, 121, 122, 190, 125, 787, 193, 89, 476, 369] {
            assert_eq!(t.classify_dependence(id).unwrap(), Dependence::CodeDependent, "CWE-{id}");
        }
        assert!(matches!(t.classify_dependence(9999), Err(TaxonomyError::UnknownCwe(9999))));
    }

    #[test]
    fn duplicate_ids_and_empty_keywords_rejected() {
        let dup = r#"{"1": {"family":"A","weakness":"a","dependence":"code-dependent","rule_set":"generic","keywords":["a"]},
                      "CWE-1": {"family":"B","weakness":"b","dependence":"code-dependent","rule_set":"generic","keywords":["b"]}}"#;
        assert!(matches!(Taxonomy::from_json(dup), Err(TaxonomyError::DuplicateId(1))));
        let empty = r#"{"7": {"family":"A","weakness":"a","dependence":"code-dependent","rule_set":"generic","keywords":[]}}"#;
        assert!(matches!(Taxonomy::from_json(empty), Err(TaxonomyError::NoKeywords(7))));
    }

    #[test]
    fn json_round_trip() {
        let t = Taxonomy::builtin();
        assert_eq!(Taxonomy::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn phrase_normalization() {
        assert_eq!(normalize_phrase("Out-of-Bounds  Write"), "out of bounds write");
        assert_eq!(normalize_phrase(" divide_by-zero "), "divide by zero");
    }
}

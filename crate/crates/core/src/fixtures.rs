//! Synthetic corpora paired with scripted responses whose outcome counts are
//! fixed in advance. Each snippet is real C with a vulnerable original, a
//! correct fix and a wrong fix, so the scripted runs go through the actual
//! validator.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, GroundTruth, LineSpan, Snippet, write_corpus};
use crate::error::CorpusError;
use crate::gateway::{PromptKind, ScriptedRule, prompt_digest};
use crate::prompt::PromptEngine;
use crate::stage::Stage;
use crate::taxonomy::{CweClass, Taxonomy};

const NAMES: &[&str] = &["dest", "buf", "out", "line", "name", "path", "field", "tmp"];
const INPUTS: &[&str] = &["name", "user", "login", "email", "account"];

/// One generated snippet with its two candidate rewrites.
#[derive(Debug, Clone)]
pub struct SyntheticCase {
    pub snippet: Snippet,
    pub fixed: String,
    pub wrong: String,
}

struct Variant {
    vulnerable: String,
    fixed: String,
    wrong: String,
    symbol: String,
    /// Substrings locating the first and last vulnerable lines.
    span: (&'static str, &'static str),
    bound: Option<String>,
    check: String,
    placement: String,
}

pub fn short_code(cwe: u32) -> &'static str {
    match cwe {
        120 => "bc",
        121 => "so",
        122 => "ho",
        190 => "io",
        125 => "obr",
        787 => "obw",
        193 => "obo",
        89 => "sqli",
        476 => "npd",
        369 => "dbz",
        327 => "wc",
        338 => "wr",
        _ => "cwe",
    }
}

fn variant(cwe: u32, n: usize) -> Variant {
    let b = NAMES[n % NAMES.len()];
    let size = 8 * (1 + n % 6);
    match cwe {
        120 => {
            let head = format!("#include <stdio.h>\n#include <string.h>\n\nvoid copy_{n}(const char *src) {{\n    char {b}[{size}];\n");
            let tail = format!("    puts({b});\n}}\n");
            Variant {
                vulnerable: format!("{head}    strcpy({b}, src);\n{tail}"),
                fixed: format!("{head}    snprintf({b}, sizeof({b}), \"%s\", src);\n{tail}"),
                wrong: format!("{head}    strncpy({b}, src, sizeof({b}) + 1);\n{tail}"),
                symbol: b.into(),
                span: ("strcpy(", "strcpy("),
                bound: Some(format!("sizeof({b})")),
                check: format!("strlen(src) < sizeof({b})"),
                placement: format!("at the copy into `{b}`"),
            }
        }
        121 => {
            let head = format!(
                "#include <stddef.h>\n#include <string.h>\n\nint store_{n}(const char *data, size_t len) {{\n    char {b}[{size}];\n"
            );
            let tail = format!("    memcpy({b}, data, len);\n    return {b}[0];\n}}\n");
            Variant {
                vulnerable: format!("{head}{tail}"),
                fixed: format!("{head}    if (len > sizeof({b})) {{\n        return -1;\n    }}\n{tail}"),
                wrong: format!("{head}    if (len > sizeof({b}) + 1) {{\n        return -1;\n    }}\n{tail}"),
                symbol: b.into(),
                span: ("memcpy(", "memcpy("),
                bound: Some(format!("sizeof({b})")),
                check: format!("len <= sizeof({b})"),
                placement: "before the memcpy call".into(),
            }
        }
        122 => {
            let head = format!("#include <stdlib.h>\n#include <string.h>\n\nchar *dup_{n}(const char *src) {{\n");
            let tail = format!(
                "    if ({b} == NULL) {{\n        return NULL;\n    }}\n    strcpy({b}, src);\n    return {b};\n}}\n"
            );
            Variant {
                vulnerable: format!("{head}    char *{b} = malloc({size});\n{tail}"),
                fixed: format!("{head}    char *{b} = malloc(strlen(src) + 1);\n{tail}"),
                wrong: format!("{head}    char *{b} = malloc(strlen(src));\n{tail}"),
                symbol: b.into(),
                span: ("malloc(", "strcpy("),
                bound: Some("strlen(src) + 1".into()),
                check: format!("the allocation of `{b}` holds strlen(src) + 1 bytes"),
                placement: format!("at the allocation of `{b}`"),
            }
        }
        190 => {
            let head = format!("#include <stdlib.h>\n#include <string.h>\n\nchar *join_{n}(const char *a, const char *c) {{\n");
            let tail = format!(
                "    char *{b} = malloc(total);\n    if ({b} == NULL) {{\n        return NULL;\n    }}\n    strcpy({b}, a);\n    strcat({b}, c);\n    return {b};\n}}\n"
            );
            Variant {
                vulnerable: format!("{head}    unsigned char total = strlen(a) + strlen(c) + 1;\n{tail}"),
                fixed: format!("{head}    size_t total = strlen(a) + strlen(c) + 1;\n{tail}"),
                wrong: format!("{head}    unsigned short total = strlen(a) + strlen(c) + 1;\n{tail}"),
                symbol: b.into(),
                span: ("total =", "strcat("),
                bound: Some("strlen(a) + strlen(c) + 1".into()),
                check: "the size computation cannot wrap around".into(),
                placement: "at the declaration of `total`".into(),
            }
        }
        125 => {
            let head = format!("int lookup_{n}(int idx) {{\n    int {b}[{size}] = {{0}};\n");
            let tail = format!("    return {b}[idx];\n}}\n");
            Variant {
                vulnerable: format!("{head}{tail}"),
                fixed: format!("{head}    if (idx < 0 || idx >= {size}) {{\n        return -1;\n    }}\n{tail}"),
                wrong: format!("{head}    if (idx < 0 || idx > {size}) {{\n        return -1;\n    }}\n{tail}"),
                symbol: b.into(),
                span: ("return ", "return "),
                bound: Some(size.to_string()),
                check: format!("0 <= idx < {size}"),
                placement: format!("before `{b}` is indexed"),
            }
        }
        787 => {
            let head = format!(
                "#define SLOTS_{n} {size}\n\nint set_{n}(int idx, int value) {{\n    int {b}[SLOTS_{n}] = {{0}};\n"
            );
            let tail = format!("    {b}[idx] = value;\n    return {b}[0];\n}}\n");
            Variant {
                vulnerable: format!("{head}{tail}"),
                fixed: format!("{head}    if (idx < 0 || idx >= SLOTS_{n}) {{\n        return -1;\n    }}\n{tail}"),
                wrong: format!("{head}    if (idx < 0 || idx > SLOTS_{n}) {{\n        return -1;\n    }}\n{tail}"),
                symbol: b.into(),
                span: ("[idx] =", "[idx] ="),
                bound: Some(format!("SLOTS_{n}")),
                check: format!("0 <= idx < SLOTS_{n}"),
                placement: format!("before the write to `{b}`"),
            }
        }
        193 => {
            let head = format!("int fill_{n}(char fill) {{\n    char {b}[{size}];\n");
            let body = |cond: String| {
                format!("{head}    for (int i = 0; {cond}; i++) {{\n        {b}[i] = fill;\n    }}\n    return {b}[0];\n}}\n")
            };
            Variant {
                vulnerable: body(format!("i <= {size}")),
                fixed: body(format!("i < {size}")),
                wrong: body(format!("i < {size} + 1")),
                symbol: b.into(),
                span: ("for (", "fill;"),
                bound: Some(size.to_string()),
                check: format!("i < {size}"),
                placement: "in the loop condition".into(),
            }
        }
        89 => {
            let v = INPUTS[n % INPUTS.len()];
            let head = format!("#include <stdio.h>\n#include <sqlite3.h>\n\nint find_user_{n}(sqlite3 *db, const char *{v}) {{\n");
            let build = |quote: &str| {
                format!(
                    "{head}    char query[256];\n    snprintf(query, sizeof(query), \"SELECT id FROM users WHERE name = {quote}%s{quote}\", {v});\n    return sqlite3_exec(db, query, NULL, NULL, NULL);\n}}\n"
                )
            };
            Variant {
                vulnerable: build("'"),
                fixed: format!(
                    "{head}    sqlite3_stmt *stmt;\n    int rc = sqlite3_prepare_v2(db, \"SELECT id FROM users WHERE name = ?\", -1, &stmt, NULL);\n    if (rc != SQLITE_OK) {{\n        return rc;\n    }}\n    sqlite3_bind_text(stmt, 1, {v}, -1, SQLITE_TRANSIENT);\n    rc = sqlite3_step(stmt);\n    sqlite3_finalize(stmt);\n    return rc;\n}}\n"
                ),
                wrong: build("\\\""),
                symbol: v.into(),
                span: ("snprintf(", "sqlite3_exec("),
                bound: None,
                check: format!("`{v}` is passed as a bound parameter"),
                placement: "where the query is built".into(),
            }
        }
        476 => {
            let p = ["label", "text", "msg", "key"][n % 4];
            let head = format!("#include <string.h>\n\nsize_t length_{n}(const char *{p}) {{\n");
            Variant {
                vulnerable: format!("{head}    size_t len = strlen({p});\n    return len;\n}}\n"),
                fixed: format!("{head}    if ({p} == NULL) {{\n        return 0;\n    }}\n    size_t len = strlen({p});\n    return len;\n}}\n"),
                wrong: format!("{head}    size_t len = strlen({p});\n    if ({p} == NULL) {{\n        return 0;\n    }}\n    return len;\n}}\n"),
                symbol: p.into(),
                span: ("strlen(", "strlen("),
                bound: None,
                check: format!("{p} != NULL"),
                placement: format!("before `{p}` is first used"),
            }
        }
        369 => {
            let d = ["count", "width", "parts", "divisor"][n % 4];
            let head = format!("int average_{n}(int total, int {d}) {{\n");
            Variant {
                vulnerable: format!("{head}    return total / {d};\n}}\n"),
                fixed: format!("{head}    if ({d} == 0) {{\n        return 0;\n    }}\n    return total / {d};\n}}\n"),
                wrong: format!("{head}    if ({d} < 0) {{\n        return 0;\n    }}\n    return total / {d};\n}}\n"),
                symbol: d.into(),
                span: ("return total", "return total"),
                bound: None,
                check: format!("{d} != 0"),
                placement: "before the division".into(),
            }
        }
        327 => Variant {
            vulnerable: format!(
                "#include <stddef.h>\n#include <openssl/md5.h>\n\nvoid digest_{n}(const unsigned char *data, size_t len, unsigned char *out) {{\n    MD5(data, len, out);\n}}\n"
            ),
            fixed: format!(
                "#include <stddef.h>\n#include <openssl/sha.h>\n\nvoid digest_{n}(const unsigned char *data, size_t len, unsigned char *out) {{\n    SHA256(data, len, out);\n}}\n"
            ),
            wrong: format!(
                "#include <stddef.h>\n#include <openssl/sha.h>\n\nvoid digest_{n}(const unsigned char *data, size_t len, unsigned char *out) {{\n    SHA1(data, len, out);\n}}\n"
            ),
            symbol: "MD5".into(),
            span: ("MD5(", "MD5("),
            bound: None,
            check: "a collision-resistant hash is used".into(),
            placement: "at the hash call".into(),
        },
        338 => Variant {
            vulnerable: format!("#include <stdlib.h>\n\nunsigned int token_{n}(void) {{\n    return (unsigned int)rand();\n}}\n"),
            fixed: format!(
                "#include <sys/random.h>\n\nunsigned int token_{n}(void) {{\n    unsigned int v = 0;\n    if (getrandom(&v, sizeof(v), 0) != sizeof(v)) {{\n        return 0;\n    }}\n    return v;\n}}\n"
            ),
            wrong: format!("#include <stdlib.h>\n\nunsigned int token_{n}(void) {{\n    return (unsigned int)random();\n}}\n"),
            symbol: "rand".into(),
            span: ("rand()", "rand()"),
            bound: None,
            check: "randomness comes from the operating system".into(),
            placement: "at the call to rand".into(),
        },
        other => panic!("no synthetic template for CWE-{other}"),
    }
}

fn line_of(source: &str, needle: &str) -> usize {
    source.lines().position(|l| l.contains(needle)).map_or(1, |i| i + 1)
}

/// The `n`-th synthetic snippet of a class. Panics for classes without a
/// template (see `has_template`).
pub fn synthetic_case(cwe: &CweClass, n: usize) -> SyntheticCase {
    let v = variant(cwe.id, n);
    let start = line_of(&v.vulnerable, v.span.0);
    let end = line_of(&v.vulnerable, v.span.1).max(start);
    let snippet = Snippet {
        id: format!("{}-{:03}", short_code(cwe.id), n + 1),
        language: "c".into(),
        source: v.vulnerable,
        cwe: cwe.clone(),
        dependence: cwe.dependence,
        truth: Some(GroundTruth {
            vulnerable_symbol: v.symbol,
            vulnerable_lines: LineSpan::new(start, end),
            correct_bound: v.bound,
            required_check: v.check,
            placement_hint: v.placement,
            exploit_input: None,
            functional_cases: vec![],
        }),
    };
    SyntheticCase { snippet, fixed: v.fixed, wrong: v.wrong }
}

pub fn has_template(cwe: u32) -> bool {
    short_code(cwe) != "cwe"
}

/// Scripted outcome counts for one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPlan {
    pub cwe: u32,
    pub total: usize,
    /// Correct S1 detections.
    pub detect: usize,
    /// Successful standalone repairs at S1, S2 and S3.
    pub repair: [usize; 3],
    /// Sessions repaired by the end of the waterfall.
    pub waterfall: usize,
}

pub const TABLE1: [FamilyPlan; 6] = [
    FamilyPlan { cwe: 120, total: 30, detect: 28, repair: [4, 9, 9], waterfall: 21 },
    FamilyPlan { cwe: 121, total: 30, detect: 23, repair: [6, 7, 9], waterfall: 20 },
    FamilyPlan { cwe: 122, total: 30, detect: 25, repair: [3, 5, 9], waterfall: 19 },
    FamilyPlan { cwe: 190, total: 22, detect: 9, repair: [0, 0, 4], waterfall: 10 },
    FamilyPlan { cwe: 125, total: 22, detect: 18, repair: [4, 3, 9], waterfall: 14 },
    FamilyPlan { cwe: 787, total: 22, detect: 15, repair: [7, 7, 8], waterfall: 14 },
];

pub const TABLE2: [FamilyPlan; 4] = [
    FamilyPlan { cwe: 193, total: 22, detect: 16, repair: [3, 5, 9], waterfall: 17 },
    FamilyPlan { cwe: 89, total: 22, detect: 18, repair: [15, 15, 14], waterfall: 21 },
    FamilyPlan { cwe: 476, total: 22, detect: 17, repair: [6, 6, 6], waterfall: 18 },
    FamilyPlan { cwe: 369, total: 22, detect: 16, repair: [2, 4, 8], waterfall: 21 },
];

/// Sixty snippets split by dependence: 16 of 30 code-independent and 4 of
/// 30 code-dependent repairs succeed without context.
pub const DEPENDENCE_SPLIT: [FamilyPlan; 8] = [
    FamilyPlan { cwe: 327, total: 15, detect: 15, repair: [8, 8, 8], waterfall: 8 },
    FamilyPlan { cwe: 338, total: 15, detect: 15, repair: [8, 8, 8], waterfall: 8 },
    FamilyPlan { cwe: 120, total: 5, detect: 5, repair: [1, 1, 1], waterfall: 1 },
    FamilyPlan { cwe: 121, total: 5, detect: 5, repair: [1, 1, 1], waterfall: 1 },
    FamilyPlan { cwe: 122, total: 5, detect: 5, repair: [1, 1, 1], waterfall: 1 },
    FamilyPlan { cwe: 190, total: 5, detect: 5, repair: [1, 1, 1], waterfall: 1 },
    FamilyPlan { cwe: 125, total: 5, detect: 5, repair: [0, 0, 0], waterfall: 0 },
    FamilyPlan { cwe: 787, total: 5, detect: 5, repair: [0, 0, 0], waterfall: 0 },
];

impl FamilyPlan {
    /// Snippets repaired by some stage in `start..=S3`; these are a prefix
    /// of the family because the per-stage success sets are prefixes.
    fn early(&self, start: Stage) -> usize {
        (start.ordinal()..=3).map(|k| self.repair[usize::from(k) - 1]).max().unwrap_or(0)
    }

    /// First stage at which snippet `i` is scripted to be repaired.
    pub fn repaired_at(&self, i: usize, start: Stage) -> Option<Stage> {
        if i >= self.total {
            return None;
        }
        for k in start.ordinal()..=3 {
            if i < self.repair[usize::from(k) - 1] {
                return Stage::from_ordinal(k);
            }
        }
        let early = self.early(start);
        if i >= self.waterfall.max(early) {
            return None;
        }
        // spread the late repairs evenly over S4..S7
        let extra = self.waterfall - early;
        let slot = (i - early) * 4 / extra;
        Stage::from_ordinal(4 + slot as u8)
    }

    fn repair_succeeds(&self, i: usize, stage: Stage, start: Stage) -> bool {
        if stage.ordinal() <= 3 {
            return i < self.repair[usize::from(stage.ordinal()) - 1];
        }
        self.repaired_at(i, start).is_some_and(|s| s <= stage)
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub corpus: Corpus,
    pub rules: Vec<ScriptedRule>,
    /// First waterfall stage the script is designed for.
    pub start_stage: Stage,
    pub plans: Vec<FamilyPlan>,
}

fn detection_text(cwe: &CweClass, symbol: Option<&str>) -> String {
    let keyword = cwe.keywords.first().map_or("security", String::as_str);
    let mut text = format!("YES: A security vulnerability detected. The code has a {keyword} problem.");
    if let Some(s) = symbol {
        text.push_str(&format!("\nFOCUS: {s}"));
    }
    text
}

fn repair_text(code: &str) -> String {
    format!("Here is the repaired code:\n\n```c\n{code}```\n")
}

/// Builds the corpus and script for a set of plans. Failed repairs rotate
/// through an unchanged copy, a wrong fix and a prose-only answer. Every
/// rule carries the digest of the built-in prompt it answers.
pub fn build(name: &str, plans: &[FamilyPlan], start_stage: Stage) -> Fixture {
    let taxonomy = Taxonomy::builtin();
    let prompts = PromptEngine::builtin();
    let mut snippets = Vec::new();
    let mut rules = Vec::new();
    for plan in plans {
        let cwe = taxonomy.get(plan.cwe).unwrap_or_else(|| panic!("CWE-{} not in the built-in taxonomy", plan.cwe));
        for i in 0..plan.total {
            let case = synthetic_case(cwe, i);
            let id = case.snippet.id.clone();
            let symbol = case.snippet.truth.as_ref().map(|t| t.vulnerable_symbol.clone()).unwrap_or_default();
            for stage in Stage::ALL {
                let detection = match stage.ordinal() {
                    1 if i >= plan.detect => "NO: No security vulnerability is present.".to_string(),
                    1..=3 => detection_text(cwe, None),
                    // every fifth snippet names the wrong element at S4
                    4 if i % 5 == 4 => detection_text(cwe, Some("src_unknown")),
                    _ => detection_text(cwe, Some(&symbol)),
                };
                let repair = if plan.repair_succeeds(i, stage, start_stage) {
                    repair_text(&case.fixed)
                } else {
                    match (i + usize::from(stage.ordinal())) % 3 {
                        0 => repair_text(&case.snippet.source),
                        1 => repair_text(&case.wrong),
                        _ => "The code looks correct to me; no changes are needed.".to_string(),
                    }
                };
                let prompted = [
                    (PromptKind::Detection, detection, prompts.render_detection(stage, &case.snippet)),
                    (PromptKind::Repair, repair, prompts.render_repair(stage, &case.snippet)),
                ];
                for (kind, response, prompt) in prompted {
                    let prompt = prompt.unwrap_or_else(|e| panic!("{id} at {stage}: {e}"));
                    rules.push(ScriptedRule {
                        snippet_id: id.clone(),
                        stage,
                        prompt_kind: kind,
                        response,
                        prompt_digest: Some(prompt_digest(&prompt)),
                    });
                }
            }
            snippets.push(case.snippet);
        }
    }
    let corpus = Corpus::new(taxonomy, snippets).expect("synthetic ids are unique");
    Fixture { name: name.into(), corpus, rules, start_stage, plans: plans.to_vec() }
}

pub fn table1() -> Fixture {
    build("table1", &TABLE1, Stage::S1)
}

/// The four other-CWE families; waterfall runs start from the S3 baseline.
pub fn table2() -> Fixture {
    build("table2", &TABLE2, Stage::S3)
}

pub fn other_cwe(cwe: u32) -> Option<Fixture> {
    let plan = TABLE2.iter().find(|p| p.cwe == cwe)?;
    Some(build(&format!("cwe-{cwe}"), &[*plan], Stage::S3))
}

pub fn dependence_split() -> Fixture {
    build("dependence-split", &DEPENDENCE_SPLIT, Stage::S1)
}

pub fn by_name(name: &str) -> Option<Fixture> {
    match name {
        "table1" => Some(table1()),
        "table2" => Some(table2()),
        "dependence-split" => Some(dependence_split()),
        other => other.strip_prefix("cwe-").and_then(|n| n.parse().ok()).and_then(other_cwe),
    }
}

pub const NAMES_AVAILABLE: &[&str] = &["table1", "table2", "dependence-split", "cwe-193", "cwe-89", "cwe-476", "cwe-369"];

/// Writes `<dir>/<name>/` (corpus), `<dir>/<name>.json` (script) and
/// `<dir>/<name>-plan.json` (expected counts).
pub fn write_fixture(fixture: &Fixture, dir: &Path) -> Result<(), CorpusError> {
    let io = |path: &Path, e: std::io::Error| CorpusError::Io { path: path.to_path_buf(), message: e.to_string() };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_corpus(&fixture.corpus, &dir.join(&fixture.name))?;
    let script = dir.join(format!("{}.json", fixture.name));
    let text = serde_json::to_string_pretty(&fixture.rules).expect("rules serialize");
    std::fs::write(&script, text + "\n").map_err(|e| io(&script, e))?;
    let plan = dir.join(format!("{}-plan.json", fixture.name));
    let text = serde_json::to_string_pretty(&fixture.plans).expect("plans serialize");
    std::fs::write(&plan, text + "\n").map_err(|e| io(&plan, e))?;
    Ok(())
}

//! Batch runs per experimental condition and their aggregation.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::DetectionVerdict;
use crate::corpus::{Corpus, Snippet};
use crate::error::{EngineError, EvalError};
use crate::stage::Stage;
use crate::taxonomy::{Dependence, Taxonomy};
use crate::validator::ValidationStatus;
use crate::waterfall::{Engine, Outcome, SessionMode};

pub use report::{Manifest, Report, RunOutputs, load_results, write_outputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    DetectNoKnowledge,
    RepairNoKnowledge,
    RepairWithVulnerability,
    RepairWithCwe,
    Waterfall,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::DetectNoKnowledge,
        Condition::RepairNoKnowledge,
        Condition::RepairWithVulnerability,
        Condition::RepairWithCwe,
        Condition::Waterfall,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::DetectNoKnowledge => "detect-no-knowledge",
            Condition::RepairNoKnowledge => "repair-no-knowledge",
            Condition::RepairWithVulnerability => "repair-with-vulnerability",
            Condition::RepairWithCwe => "repair-with-cwe",
            Condition::Waterfall => "waterfall",
        }
    }

    /// Column heading in rendered tables.
    pub fn heading(self) -> &'static str {
        match self {
            Condition::DetectNoKnowledge => "Detection No Knowledge",
            Condition::RepairNoKnowledge => "Repair No Knowledge",
            Condition::RepairWithVulnerability => "Repair with Vulnerability",
            Condition::RepairWithCwe => "Repair with CWE Detail",
            Condition::Waterfall => "Waterfall",
        }
    }

    /// The stage a single-prompt condition uses.
    pub fn single_stage(self) -> Option<Stage> {
        match self {
            Condition::DetectNoKnowledge | Condition::RepairNoKnowledge => Some(Stage::S1),
            Condition::RepairWithVulnerability => Some(Stage::S2),
            Condition::RepairWithCwe => Some(Stage::S3),
            Condition::Waterfall => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = String;

    /// Accepts full names and the short repair forms (`with-cwe`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let full = match s {
            "no-knowledge" => "repair-no-knowledge",
            "with-vulnerability" => "repair-with-vulnerability",
            "with-cwe" => "repair-with-cwe",
            "detect" => "detect-no-knowledge",
            other => other,
        };
        Condition::ALL.into_iter().find(|c| c.as_str() == full).ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

/// Outcome of one snippet under one condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnippetResult {
    pub snippet_id: String,
    pub family: String,
    pub cwe: u32,
    pub dependence: Dependence,
    pub condition: Condition,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<ValidationStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages_visited: Option<usize>,
}

impl SnippetResult {
    pub fn repaired_at(&self) -> Option<Stage> {
        match self.outcome {
            Some(Outcome::RepairedAt { stage }) => Some(stage),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BatchOptions {
    pub parallelism: usize,
    pub fresh_context: bool,
    /// Start waterfall sessions at S3 instead of S1.
    pub baseline_offset: bool,
    /// Where waterfall session logs go, one file per snippet.
    pub log_dir: Option<PathBuf>,
}

impl BatchOptions {
    pub fn waterfall_start(&self) -> Stage {
        if self.baseline_offset { Stage::S3 } else { Stage::S1 }
    }
}

fn run_one(engine: &Engine, snippet: &Snippet, condition: Condition, opts: &BatchOptions) -> Result<SnippetResult, EngineError> {
    let mut result = SnippetResult {
        snippet_id: snippet.id.clone(),
        family: snippet.cwe.family.clone(),
        cwe: snippet.cwe.id,
        dependence: snippet.dependence,
        condition,
        success: false,
        detection: None,
        status: None,
        outcome: None,
        stages_visited: None,
    };
    match condition {
        Condition::DetectNoKnowledge => {
            let (_, verdict) = engine.detect_once(snippet, Stage::S1)?;
            result.success = verdict.correct;
            result.detection = Some(verdict);
        }
        Condition::RepairNoKnowledge | Condition::RepairWithVulnerability | Condition::RepairWithCwe => {
            let stage = condition.single_stage().unwrap_or(Stage::S1);
            let (_, validation) = engine.repair_once(snippet, stage)?;
            result.success = validation.is_repaired();
            result.status = Some(validation.status);
        }
        Condition::Waterfall => {
            let mut session =
                engine.start_session(&snippet.id, snippet, SessionMode::Auto, opts.waterfall_start(), opts.fresh_context);
            if let Some(dir) = &opts.log_dir {
                session.persist_to(&dir.join(format!("{}.jsonl", snippet.id)))?;
            }
            engine.run_to_completion(&mut session, snippet)?;
            result.success = matches!(session.outcome, Some(Outcome::RepairedAt { .. }));
            result.status = session.current().verdict;
            result.outcome = session.outcome;
            result.stages_visited = Some(session.stages.len());
        }
    }
    Ok(result)
}

/// One result per snippet, in corpus order. The first failing snippet (in
/// corpus order) aborts the batch.
pub fn run_batch(corpus: &Corpus, condition: Condition, engine: &Engine, opts: &BatchOptions) -> Result<Vec<SnippetResult>, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    if let Some(dir) = &opts.log_dir {
        std::fs::create_dir_all(dir).map_err(|e| EvalError::Io { path: dir.clone(), message: e.to_string() })?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| EvalError::Inconsistent(format!("worker pool: {e}")))?;
    let outcomes: Vec<Result<SnippetResult, EngineError>> =
        pool.install(|| corpus.snippets().par_iter().map(|s| run_one(engine, s, condition, opts)).collect());
    outcomes
        .into_iter()
        .zip(corpus.snippets())
        .map(|(r, s)| r.map_err(|source| EvalError::Snippet { snippet: s.id.clone(), source }))
        .collect()
}

/// `round_half_up(100 * successes / total)` in integer arithmetic.
pub fn compute_rate(successes: usize, total: usize) -> Result<u32, EvalError> {
    if total == 0 {
        return Err(EvalError::UndefinedRate);
    }
    if successes > total {
        return Err(EvalError::Inconsistent(format!("{successes} successes out of {total}")));
    }
    Ok(((200 * successes + total) / (2 * total)) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub family: String,
    pub total: usize,
    pub successes: BTreeMap<Condition, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportTable {
    pub conditions: Vec<Condition>,
    pub rows: Vec<CategoryStats>,
    pub totals: CategoryStats,
    /// Integer percents per condition.
    pub rates: BTreeMap<Condition, u32>,
}

/// Folds results into per-family counts, ordered by taxonomy rank.
pub fn aggregate(results: &[SnippetResult], taxonomy: &Taxonomy) -> Result<Vec<CategoryStats>, EvalError> {
    group(results, |r| r.family.clone(), |f| taxonomy.family_rank(f))
}

/// Same fold keyed by dependence class.
pub fn aggregate_by_dependence(results: &[SnippetResult]) -> Result<Vec<CategoryStats>, EvalError> {
    group(results, |r| r.dependence.as_str().to_string(), |k| usize::from(k != Dependence::CodeIndependent.as_str()))
}

fn group(
    results: &[SnippetResult],
    key: impl Fn(&SnippetResult) -> String,
    rank: impl Fn(&str) -> usize,
) -> Result<Vec<CategoryStats>, EvalError> {
    let mut ids: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    let mut per: BTreeMap<(String, Condition), (usize, usize)> = BTreeMap::new();
    let mut seen: BTreeSet<(&str, Condition)> = BTreeSet::new();
    for r in results {
        if !seen.insert((&r.snippet_id, r.condition)) {
            return Err(EvalError::Inconsistent(format!("snippet {} appears twice under {}", r.snippet_id, r.condition)));
        }
        let k = key(r);
        ids.entry(k.clone()).or_default().insert(&r.snippet_id);
        let e = per.entry((k, r.condition)).or_default();
        e.0 += 1;
        e.1 += usize::from(r.success);
    }
    let conditions: BTreeSet<Condition> = results.iter().map(|r| r.condition).collect();
    let mut rows = Vec::new();
    for (k, members) in &ids {
        let total = members.len();
        let mut successes = BTreeMap::new();
        for c in &conditions {
            let (n, s) = per.get(&(k.clone(), *c)).copied().unwrap_or((0, 0));
            if n != total {
                return Err(EvalError::Inconsistent(format!("{k}: {n} results under {c} for {total} snippets")));
            }
            successes.insert(*c, s);
        }
        rows.push(CategoryStats { family: k.clone(), total, successes });
    }
    rows.sort_by(|a, b| rank(&a.family).cmp(&rank(&b.family)).then_with(|| a.family.cmp(&b.family)));
    Ok(rows)
}

/// Assembles the table: rows as given, a totals row of column sums and a
/// rate row computed from the totals.
pub fn emit_table(stats: &[CategoryStats]) -> Result<ReportTable, EvalError> {
    let conditions: Vec<Condition> = match stats.first() {
        Some(first) => first.successes.keys().copied().collect(),
        None => return Err(EvalError::EmptyCorpus),
    };
    let mut totals = CategoryStats { family: "Total".into(), total: 0, successes: BTreeMap::new() };
    for row in stats {
        if row.successes.keys().copied().collect::<Vec<_>>() != conditions {
            return Err(EvalError::Inconsistent(format!("{}: condition columns differ", row.family)));
        }
        for (c, &s) in &row.successes {
            if s > row.total {
                return Err(EvalError::Inconsistent(format!("{}: {s} successes under {c} out of {}", row.family, row.total)));
            }
            *totals.successes.entry(*c).or_default() += s;
        }
        totals.total += row.total;
    }
    let mut rates = BTreeMap::new();
    for c in &conditions {
        rates.insert(*c, compute_rate(totals.successes[c], totals.total)?);
    }
    Ok(ReportTable { conditions, rows: stats.to_vec(), totals, rates })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub stage: Stage,
    pub cumulative: usize,
    pub percent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCurve {
    pub total: usize,
    pub points: Vec<CurvePoint>,
}

impl StageCurve {
    pub fn endpoint(&self) -> Option<u32> {
        self.points.last().map(|p| p.percent)
    }

    pub fn at(&self, stage: Stage) -> Option<u32> {
        self.points.iter().find(|p| p.stage == stage).map(|p| p.percent)
    }
}

/// Percent of waterfall sessions repaired at or before each stage. Results
/// under other conditions are ignored.
pub fn emit_stage_curve(results: &[SnippetResult]) -> StageCurve {
    let waterfall: Vec<&SnippetResult> = results.iter().filter(|r| r.condition == Condition::Waterfall).collect();
    let total = waterfall.len();
    let mut points = Vec::new();
    if total > 0 {
        for stage in Stage::ALL {
            let cumulative = waterfall.iter().filter(|r| r.repaired_at().is_some_and(|s| s <= stage)).count();
            let percent = compute_rate(cumulative, total).unwrap_or(0);
            points.push(CurvePoint { stage, cumulative, percent });
        }
    }
    StageCurve { total, points }
}

#[cfg(test)]
mod tests;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    CategoryStats, Condition, ReportTable, SnippetResult, StageCurve, aggregate, aggregate_by_dependence, emit_stage_curve,
    emit_table,
};
use crate::error::EvalError;
use crate::taxonomy::Taxonomy;

/// Everything needed to rerun a scripted batch and get the same bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub backend_kind: String,
    pub config_digest: String,
    pub corpus_digest: String,
    pub prompt_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script_digest: Option<String>,
    pub conditions: Vec<Condition>,
    pub parallelism: usize,
    pub fresh_context: bool,
    pub baseline_offset: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: Manifest,
    pub table: ReportTable,
    pub by_dependence: ReportTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<StageCurve>,
    pub results: Vec<SnippetResult>,
}

impl Report {
    pub fn assemble(manifest: Manifest, results: Vec<SnippetResult>, taxonomy: &Taxonomy) -> Result<Report, EvalError> {
        let table = emit_table(&aggregate(&results, taxonomy)?)?;
        let by_dependence = emit_table(&aggregate_by_dependence(&results)?)?;
        let curve = Some(emit_stage_curve(&results)).filter(|c| c.total > 0);
        Ok(Report { manifest, table, by_dependence, curve, results })
    }

    pub fn to_csv(&self) -> String {
        table_csv(&self.table)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Repair results\n\n");
        out.push_str(&table_markdown(&self.table, "Vulnerability"));
        out.push_str("\n## By dependence\n\n");
        out.push_str(&table_markdown(&self.by_dependence, "Dependence"));
        if let Some(curve) = &self.curve {
            out.push_str("\n## Cumulative waterfall success\n\n| Stage | Repaired | Percent |\n|---|---:|---:|\n");
            for p in &curve.points {
                out.push_str(&format!("| {} | {} | {}% |\n", p.stage, p.cumulative, p.percent));
            }
        }
        out
    }
}

pub fn curve_csv(curve: &StageCurve) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["stage", "cumulative_percent"]);
    for p in &curve.points {
        let _ = w.write_record([p.stage.label(), p.percent.to_string()]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn row_cells(row: &CategoryStats, conditions: &[Condition]) -> Vec<String> {
    let mut cells = vec![row.family.clone(), row.total.to_string()];
    cells.extend(conditions.iter().map(|c| row.successes.get(c).copied().unwrap_or(0).to_string()));
    cells
}

pub fn table_csv(table: &ReportTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["family".to_string(), "total".to_string()];
    header.extend(table.conditions.iter().map(|c| c.as_str().to_string()));
    let _ = w.write_record(&header);
    for row in table.rows.iter().chain([&table.totals]) {
        let _ = w.write_record(row_cells(row, &table.conditions));
    }
    let mut rates = vec!["rate".to_string(), String::new()];
    rates.extend(table.conditions.iter().map(|c| table.rates[c].to_string()));
    let _ = w.write_record(&rates);
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

pub fn table_markdown(table: &ReportTable, first: &str) -> String {
    let mut out = format!("| {first} | Total |");
    for c in &table.conditions {
        out.push_str(&format!(" {} |", c.heading()));
    }
    out.push_str("\n|---|---:|");
    out.push_str(&"---:|".repeat(table.conditions.len()));
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!("| {} |\n", row_cells(row, &table.conditions).join(" | ")));
    }
    let mut totals = row_cells(&table.totals, &table.conditions);
    totals[0] = "**Total**".into();
    out.push_str(&format!("| {} |\n", totals.join(" | ")));
    out.push_str("| **Success Rate** | |");
    for c in &table.conditions {
        out.push_str(&format!(" {}% |", table.rates[c]));
    }
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutputs {
    pub report_json: PathBuf,
    pub report_csv: PathBuf,
    pub report_md: PathBuf,
    pub curve_csv: Option<PathBuf>,
    pub manifest: PathBuf,
}

fn pretty<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default() + "\n"
}

fn write(path: &Path, text: &str) -> Result<(), EvalError> {
    std::fs::write(path, text).map_err(|e| EvalError::Io { path: path.to_path_buf(), message: e.to_string() })
}

/// Writes the report files and one raw result file per condition.
pub fn write_outputs(dir: &Path, report: &Report) -> Result<RunOutputs, EvalError> {
    let results_dir = dir.join("results");
    std::fs::create_dir_all(&results_dir).map_err(|e| EvalError::Io { path: results_dir.clone(), message: e.to_string() })?;
    let out = RunOutputs {
        report_json: dir.join("report.json"),
        report_csv: dir.join("report.csv"),
        report_md: dir.join("report.md"),
        curve_csv: report.curve.as_ref().map(|_| dir.join("curve.csv")),
        manifest: dir.join("manifest.json"),
    };
    write(&out.report_json, &pretty(report))?;
    write(&out.report_csv, &report.to_csv())?;
    write(&out.report_md, &report.to_markdown())?;
    if let (Some(path), Some(curve)) = (&out.curve_csv, &report.curve) {
        write(path, &curve_csv(curve))?;
    }
    write(&out.manifest, &pretty(&report.manifest))?;
    for c in &report.manifest.conditions {
        let rows: Vec<&SnippetResult> = report.results.iter().filter(|r| r.condition == *c).collect();
        write(&results_dir.join(format!("{c}.json")), &pretty(&rows))?;
    }
    Ok(out)
}

/// Reads a manifest and stored per-condition results from an output
/// directory written by `write_outputs`.
pub fn load_results(dir: &Path) -> Result<(Manifest, Vec<SnippetResult>), EvalError> {
    let read = |path: &Path| {
        std::fs::read_to_string(path).map_err(|e| EvalError::Io { path: path.to_path_buf(), message: e.to_string() })
    };
    let parse_err = |path: &Path, e: serde_json::Error| EvalError::Io { path: path.to_path_buf(), message: e.to_string() };
    let manifest_path = dir.join("manifest.json");
    let manifest: Manifest = serde_json::from_str(&read(&manifest_path)?).map_err(|e| parse_err(&manifest_path, e))?;
    let mut results = Vec::new();
    for c in &manifest.conditions {
        let path = dir.join("results").join(format!("{c}.json"));
        let rows: Vec<SnippetResult> = serde_json::from_str(&read(&path)?).map_err(|e| parse_err(&path, e))?;
        results.extend(rows);
    }
    if results.is_empty() {
        return Err(EvalError::Io { path: dir.join("results"), message: "no stored results".into() });
    }
    Ok((manifest, results))
}

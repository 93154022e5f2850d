//! Batch subcommands: run conditions over a corpus and write reports.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use repair_cascade::evaluation::{Report, RunOutputs, load_results, write_outputs};
use repair_cascade::validator::oracle::{evaluate_fix_set, load_fix_set};
use repair_cascade::{BatchOptions, Condition, Taxonomy, ToolchainConfig, fixtures, load_corpus, run_batch};

use crate::config::{BatchArgs, ConfigError, WaterfallFlags, config_error, prepare};

/// Runs `conditions` over the corpus and writes the outputs under `--out`.
pub fn run(batch: &BatchArgs, conditions: &[Condition], flags: WaterfallFlags, out: &mut dyn Write) -> Result<RunOutputs> {
    let prepared = prepare(&batch.engine)?;
    if prepared.corpus.is_empty() {
        return Err(config_error(format!("corpus {} has no snippets", batch.engine.corpus.display())));
    }
    let config = prepared.run_config(batch, conditions, flags);
    let manifest = prepared.manifest(&config)?;
    let opts = BatchOptions {
        parallelism: batch.parallelism,
        fresh_context: flags.fresh_context,
        baseline_offset: flags.baseline_offset,
        log_dir: conditions.contains(&Condition::Waterfall).then(|| batch.out.join("sessions")),
    };
    let mut results = Vec::new();
    for c in conditions {
        tracing::info!(condition = %c, snippets = prepared.corpus.len(), "running");
        results.extend(run_batch(&prepared.corpus, *c, &prepared.engine, &opts).with_context(|| format!("condition {c}"))?);
    }
    let report = Report::assemble(manifest, results, prepared.corpus.taxonomy())?;
    let outputs = write_outputs(&batch.out, &report)?;
    summarize(&report, &outputs, out)?;
    Ok(outputs)
}

/// Re-renders the report files from stored results.
pub fn report(dir: &Path, corpus: Option<&Path>, out: &mut dyn Write) -> Result<RunOutputs> {
    let (manifest, results) =
        load_results(dir).with_context(|| ConfigError(format!("no stored results under {}", dir.display())))?;
    let taxonomy = match corpus {
        Some(root) => load_corpus(root).with_context(|| ConfigError(format!("loading corpus {}", root.display())))?.taxonomy().clone(),
        None => Taxonomy::builtin(),
    };
    let report = Report::assemble(manifest, results, &taxonomy)?;
    let outputs = write_outputs(dir, &report)?;
    summarize(&report, &outputs, out)?;
    Ok(outputs)
}

fn summarize(report: &Report, outputs: &RunOutputs, out: &mut dyn Write) -> Result<()> {
    let t = &report.table;
    let rates: Vec<String> = t.conditions.iter().map(|c| format!("{c}={}%", t.rates[c])).collect();
    writeln!(out, "{} snippets: {}", t.totals.total, rates.join(" "))?;
    if let Some(curve) = &report.curve {
        let points: Vec<String> = curve.points.iter().map(|p| format!("{}:{}%", p.stage, p.percent)).collect();
        writeln!(out, "waterfall curve: {}", points.join(" "))?;
    }
    writeln!(out, "report: {}", outputs.report_md.display())?;
    Ok(())
}

/// Writes a named synthetic fixture (corpus, script and plan).
pub fn fixture(name: &str, dir: &Path, out: &mut dyn Write) -> Result<()> {
    let f = fixtures::by_name(name).ok_or_else(|| {
        config_error(format!("unknown fixture `{name}`; available: {}", fixtures::NAMES_AVAILABLE.join(", ")))
    })?;
    fixtures::write_fixture(&f, dir)?;
    writeln!(out, "wrote {} ({} snippets, {} rules) to {}", f.name, f.corpus.len(), f.rules.len(), dir.display())?;
    Ok(())
}

/// Compares static and instrumented verdicts over a fix manifest.
pub fn oracle(manifest: &Path, toolchain: Option<&ToolchainConfig>, out: &mut dyn Write) -> Result<()> {
    let set = load_fix_set(manifest).with_context(|| ConfigError(format!("loading {}", manifest.display())))?;
    let report = evaluate_fix_set(&set, toolchain);
    writeln!(out, "{:<10} {:<28} {:<22} {:<22} agree", "snippet", "fix", "static", "dynamic")?;
    for v in &report.verdicts {
        let dynamic = v.dynamic_status.map_or("-".to_string(), |s| s.to_string());
        let agree = match v.agrees() {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        writeln!(out, "{:<10} {:<28} {:<22} {:<22} {agree}", v.case.snippet, v.case.file, v.static_status.to_string(), dynamic)?;
    }
    writeln!(out, "originals flagged: {}/{}", report.originals - report.unflagged_originals.len(), report.originals)?;
    match report.agreement() {
        Some(a) => writeln!(out, "agreement: {}/{} ({:.1}%)", report.agreements(), report.compared(), a * 100.0)?,
        None => writeln!(out, "agreement: not measured (no instrumented run)")?,
    }
    Ok(())
}

use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{Criterion, criterion_group, criterion_main};
use repair_cascade::evaluation::CategoryStats;
use repair_cascade::validator::static_check;
use repair_cascade::{Condition, PromptEngine, Stage, emit_table, extract_repair, parse_detection};
use repair_cascade_bench::{demo_corpus, repair_reply};

fn prompts(c: &mut Criterion) {
    let corpus = demo_corpus();
    let engine = PromptEngine::builtin();
    let snippet = &corpus.snippets()[0];
    let mut g = c.benchmark_group("render");
    for stage in [Stage::S1, Stage::S4, Stage::S7] {
        g.bench_function(format!("{stage}"), |b| {
            b.iter(|| {
                let d = engine.render_detection(stage, black_box(snippet)).unwrap();
                let r = engine.render_repair(stage, black_box(snippet)).unwrap();
                d.len() + r.len()
            })
        });
    }
    g.finish();
}

fn validation(c: &mut Criterion) {
    let corpus = demo_corpus();
    c.bench_function("static_check/corpus", |b| {
        b.iter(|| {
            corpus
                .snippets()
                .iter()
                .filter(|s| static_check(black_box(&s.source), &s.cwe, s.truth.as_ref()).status.is_vulnerable())
                .count()
        })
    });
}

fn analysis(c: &mut Criterion) {
    let corpus = demo_corpus();
    let snippet = &corpus.snippets()[0];
    let taxonomy = corpus.taxonomy();
    let detection = "YES: A security vulnerability detected. This looks like a buffer overflow in the copy.\nFOCUS: dest";
    c.bench_function("parse_detection", |b| {
        b.iter(|| parse_detection(black_box(detection), &snippet.cwe, Stage::S4, snippet.truth.as_ref(), taxonomy))
    });
    let reply = repair_reply(&snippet.source);
    c.bench_function("extract_repair", |b| b.iter(|| extract_repair(black_box(&reply), &snippet.source)));
}

fn table(c: &mut Criterion) {
    let conditions = [Condition::DetectNoKnowledge, Condition::RepairNoKnowledge, Condition::Waterfall];
    let rows: Vec<CategoryStats> = (0..12)
        .map(|i| CategoryStats {
            family: format!("family-{i}"),
            total: 30,
            successes: conditions.iter().enumerate().map(|(k, c)| (*c, (i * 7 + k * 5) % 31)).collect::<BTreeMap<_, _>>(),
        })
        .collect();
    c.bench_function("emit_table", |b| b.iter(|| emit_table(black_box(&rows)).unwrap().totals.total));
}

criterion_group!(benches, prompts, validation, analysis, table);
criterion_main!(benches);

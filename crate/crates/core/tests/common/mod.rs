//! Randomized scripted sessions shared by the property suite and the
//! acceptance harness.

#![allow(dead_code)]

pub mod paraphrase;
pub mod prompts;

use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;
use repair_cascade::fixtures::{SyntheticCase, synthetic_case};
use repair_cascade::gateway::{PromptKind, ScriptedBackend, ScriptedRule};
use repair_cascade::{Engine, PromptEngine, Session, SessionMode, Stage, StandardValidator, Taxonomy};

pub const CWES: [u32; 12] = [120, 121, 122, 190, 125, 787, 193, 89, 476, 369, 327, 338];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detect {
    Correct,
    No,
    WrongFamily,
    WrongFocus,
    Garbage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reply {
    Fixed,
    Wrong,
    Unchanged,
    Prose,
    Empty,
}

#[derive(Debug, Clone)]
pub struct SessionPlan {
    pub cwe: u32,
    pub variant: usize,
    pub start: Stage,
    pub fresh_context: bool,
    pub detect: [Detect; 7],
    pub reply: [Reply; 7],
}

impl SessionPlan {
    /// Expected outcome: the first stage from `start` whose reply is the
    /// correct fix, else none.
    pub fn expected_repair(&self) -> Option<Stage> {
        Stage::ALL.into_iter().filter(|s| *s >= self.start).find(|s| self.reply[stage_index(*s)] == Reply::Fixed)
    }
}

pub fn stage_index(s: Stage) -> usize {
    usize::from(s.ordinal()) - 1
}

fn detect_strategy() -> impl Strategy<Value = Detect> {
    prop_oneof![
        3 => Just(Detect::Correct),
        1 => Just(Detect::No),
        1 => Just(Detect::WrongFamily),
        1 => Just(Detect::WrongFocus),
        1 => Just(Detect::Garbage),
    ]
}

fn reply_strategy() -> impl Strategy<Value = Reply> {
    prop_oneof![
        1 => Just(Reply::Fixed),
        2 => Just(Reply::Wrong),
        1 => Just(Reply::Unchanged),
        1 => Just(Reply::Prose),
        1 => Just(Reply::Empty),
    ]
}

pub fn plan_strategy() -> impl Strategy<Value = SessionPlan> {
    (
        prop::sample::select(CWES.to_vec()),
        0usize..30,
        1u8..=7,
        any::<bool>(),
        prop::array::uniform7(detect_strategy()),
        prop::array::uniform7(reply_strategy()),
    )
        .prop_map(|(cwe, variant, start, fresh_context, detect, reply)| SessionPlan {
            cwe,
            variant,
            start: Stage::from_ordinal(start).expect("1..=7"),
            fresh_context,
            detect,
            reply,
        })
}

pub fn case(plan: &SessionPlan) -> SyntheticCase {
    let taxonomy = Taxonomy::builtin();
    synthetic_case(taxonomy.get(plan.cwe).expect("known CWE"), plan.variant)
}

fn detection_text(plan: &SessionPlan, case: &SyntheticCase, d: Detect) -> String {
    let taxonomy = Taxonomy::builtin();
    let keyword = &taxonomy.get(plan.cwe).expect("known CWE").keywords[0];
    let other = if plan.cwe == 369 { "sql injection" } else { "division by zero" };
    let symbol = &case.snippet.truth.as_ref().expect("synthetic truth").vulnerable_symbol;
    match d {
        Detect::Correct => format!("YES: A security vulnerability detected. This is a {keyword} issue.\nFOCUS: {symbol}"),
        Detect::No => "NO: No security vulnerability is present.".into(),
        Detect::WrongFamily => format!("YES: A security vulnerability detected. It looks like {other}.\nFOCUS: {symbol}"),
        Detect::WrongFocus => format!("YES: A security vulnerability detected. This is a {keyword} issue.\nFOCUS: not_{symbol}"),
        Detect::Garbage => "I am not sure what you are asking.".into(),
    }
}

fn reply_text(case: &SyntheticCase, r: Reply) -> String {
    match r {
        Reply::Fixed => format!("Repaired:\n```c\n{}```\n", case.fixed),
        Reply::Wrong => format!("```c\n{}```", case.wrong),
        Reply::Unchanged => format!("```c\n{}```", case.snippet.source),
        Reply::Prose => "Add a bounds check before the copy.".into(),
        Reply::Empty => String::new(),
    }
}

pub fn rules(plan: &SessionPlan, case: &SyntheticCase) -> Vec<ScriptedRule> {
    let mut out = Vec::new();
    for stage in Stage::ALL {
        let i = stage_index(stage);
        for (kind, response) in [
            (PromptKind::Detection, detection_text(plan, case, plan.detect[i])),
            (PromptKind::Repair, reply_text(case, plan.reply[i])),
        ] {
            out.push(ScriptedRule {
                snippet_id: case.snippet.id.clone(),
                stage,
                prompt_kind: kind,
                response,
                prompt_digest: None,
            });
        }
    }
    out
}

pub fn engine(rules: Vec<ScriptedRule>) -> Engine {
    Engine::new(
        PromptEngine::builtin(),
        Taxonomy::builtin(),
        Arc::new(ScriptedBackend::new(rules, false).expect("unique rules")),
        Arc::new(StandardValidator::default()),
    )
}

/// Runs one planned session to completion, logging to `log`.
pub fn run(plan: &SessionPlan, log: &Path) -> Session {
    let case = case(plan);
    let e = engine(rules(plan, &case));
    let mut session = e.start_session("prop", &case.snippet, SessionMode::Auto, plan.start, plan.fresh_context);
    session.persist_to(log).expect("log is writable");
    e.run_to_completion(&mut session, &case.snippet).expect("scripted run");
    session
}

/// Everything except the log location and timestamps.
pub fn comparable(s: &Session) -> serde_json::Value {
    let mut v = serde_json::to_value(s).expect("session serializes");
    if let Some(events) = v.get_mut("events").and_then(|e| e.as_array_mut()) {
        for e in events {
            e.as_object_mut().map(|o| o.remove("timestamp_ms"));
        }
    }
    v
}

use super::*;
use crate::corpus::{GroundTruth, LineSpan};
use crate::gateway::{ScriptedBackend, ScriptedRule};
use crate::taxonomy::Dependence;

const SOURCE: &str = "void copy(const char *src) {\n    char dest[16];\n    strcpy(dest, src);\n}\n";

fn snippet() -> Snippet {
    Snippet {
        id: "bc-001".into(),
        language: "c".into(),
        source: SOURCE.into(),
        cwe: Taxonomy::builtin().get(120).unwrap().clone(),
        dependence: Dependence::CodeDependent,
        truth: Some(GroundTruth {
            vulnerable_symbol: "dest".into(),
            vulnerable_lines: LineSpan::new(3, 3),
            correct_bound: Some("sizeof(dest)".into()),
            required_check: "strlen(src) < sizeof(dest)".into(),
            placement_hint: "before the strcpy call".into(),
            exploit_input: None,
            functional_cases: vec![],
        }),
    }
}

/// Repaired iff the candidate contains the marker.
struct Marker;

impl RepairValidator for Marker {
    fn validate(&self, _snippet: &Snippet, candidate: &str) -> ValidationResult {
        let status = if candidate.contains("FIXED") { ValidationStatus::Repaired } else { ValidationStatus::StillVulnerable };
        ValidationResult::new(status, Mode::Static, vec![])
    }
}

const GOOD_DETECTION: &str = "YES: A security vulnerability detected. Buffer overflow in strcpy.\nFOCUS: dest";
const BAD_DETECTION: &str = "NO: No security vulnerability is present.";

fn rules(detections: &[(Stage, &str)], repairs: &[(Stage, &str)]) -> Vec<ScriptedRule> {
    let mut out = Vec::new();
    for (stage, text) in detections {
        out.push(ScriptedRule {
            snippet_id: "bc-001".into(),
            stage: *stage,
            prompt_kind: PromptKind::Detection,
            response: text.to_string(),
            prompt_digest: None,
        });
    }
    for (stage, text) in repairs {
        out.push(ScriptedRule {
            snippet_id: "bc-001".into(),
            stage: *stage,
            prompt_kind: PromptKind::Repair,
            response: text.to_string(),
            prompt_digest: None,
        });
    }
    out
}

fn fixed() -> String {
    format!("```c\n{}/* FIXED */\n```", SOURCE)
}

fn broken() -> String {
    format!("```c\n{SOURCE}```")
}

fn engine(rules: Vec<ScriptedRule>) -> Engine {
    Engine::new(
        PromptEngine::builtin(),
        Taxonomy::builtin(),
        Arc::new(ScriptedBackend::new(rules, false).unwrap()),
        Arc::new(Marker),
    )
}

fn all_stages(det: &str, repair_ok_at: Option<Stage>) -> Vec<ScriptedRule> {
    let dets: Vec<_> = Stage::ALL.iter().map(|s| (*s, det)).collect();
    let fixed = fixed();
    let broken = broken();
    let reps: Vec<_> = Stage::ALL
        .iter()
        .map(|s| (*s, if Some(*s) == repair_ok_at { fixed.as_str() } else { broken.as_str() }))
        .collect();
    rules(&dets, &reps)
}

fn count(session: &Session, kind: &str) -> usize {
    session.events.iter().filter(|e| e.payload.kind() == kind).count()
}

#[test]
fn repaired_at_first_stage() {
    let e = engine(all_stages(GOOD_DETECTION, Some(Stage::S1)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    assert_eq!((s.stage, s.outcome), (Stage::S1, None));
    e.run_to_completion(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S1 }));
    assert_eq!((count(&s, "detection-prompt"), count(&s, "repair-prompt")), (1, 1));
    assert!(e.step(&mut s, &sn).is_err());
}

#[test]
fn repaired_at_last_stage() {
    let e = engine(all_stages(GOOD_DETECTION, Some(Stage::S7)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    e.run_to_completion(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S7 }));
    assert_eq!((count(&s, "detection-prompt"), count(&s, "repair-prompt")), (7, 7));
    assert_eq!(s.stages.len(), 7);
}

#[test]
fn exhausted_after_last_stage() {
    let e = engine(all_stages(BAD_DETECTION, None));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    e.run_to_completion(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::Exhausted));
    // every wrong detection was corrected automatically
    assert_eq!(count(&s, "intervention"), 7);
    assert!(s.stages.iter().all(|r| r.interventions[0].actor == Actor::Auto));
}

#[test]
fn starts_at_requested_stage() {
    let e = engine(all_stages(GOOD_DETECTION, Some(Stage::S3)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S3, false);
    e.run_to_completion(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S3 }));
    assert_eq!(s.stages.len(), 1);
    assert!(Stage::from_ordinal(9).is_none());
}

#[test]
fn gateway_error_leaves_session_resumable() {
    // S2 repair rule missing
    let mut r = all_stages(GOOD_DETECTION, Some(Stage::S2));
    r.retain(|x| !(x.stage == Stage::S2 && x.prompt_kind == PromptKind::Repair));
    let e = engine(r);
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    e.step(&mut s, &sn).unwrap();
    let before_err = s.clone();
    let err = e.step(&mut s, &sn).unwrap_err();
    assert!(matches!(err, EngineError::Gateway(crate::error::GatewayError::ScriptedMiss { .. })));
    // the S2 detection half completed; only the failed call is missing
    assert_eq!(s.stage, Stage::S2);
    assert_eq!(s.phase, Phase::Repair);
    assert!(s.events.len() > before_err.events.len());
    let e2 = engine(all_stages(GOOD_DETECTION, Some(Stage::S2)));
    e2.run_to_completion(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S2 }));
    assert_eq!(count(&s, "detection-prompt"), 2);
}

#[test]
fn interactive_correction_reaches_repair_prompt() {
    let wrong = "YES: A security vulnerability detected. Buffer overflow.\nFOCUS: src";
    let e = engine(all_stages(wrong, Some(Stage::S4)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Interactive, Stage::S4, false);
    let fresh = e.intervene(&mut s.clone(), &sn, Intervention {
        stage: Stage::S4,
        kind: InterventionKind::DetectionCorrection,
        payload: "dest".into(),
        actor: Actor::Human,
    });
    assert!(matches!(fresh, Err(EngineError::State { .. })));
    e.step(&mut s, &sn).unwrap();
    assert_eq!(s.phase, Phase::AwaitingIntervention);
    assert!(e.step(&mut s, &sn).is_err());
    e.intervene(&mut s, &sn, Intervention {
        stage: Stage::S4,
        kind: InterventionKind::DetectionCorrection,
        payload: "dest".into(),
        actor: Actor::Human,
    })
    .unwrap();
    assert_eq!(s.phase, Phase::AwaitingVerdict);
    let correction = s.transcript.iter().find(|t| t.content.starts_with("Correction:")).unwrap();
    assert!(correction.content.contains("`dest`"));
    let last_user = s.transcript.iter().rev().find(|t| t.role == crate::gateway::Role::User).unwrap();
    assert!(last_user.content.contains("rewrite the code"));
    // accept the validator's verdict
    e.step(&mut s, &sn).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S4 }));
    assert_eq!(s.current().verdict_actor, Some(Actor::Human));
}

#[test]
fn verdict_override_by_operator() {
    let e = engine(all_stages(GOOD_DETECTION, None));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Interactive, Stage::S1, false);
    e.step(&mut s, &sn).unwrap();
    assert_eq!(s.phase, Phase::AwaitingVerdict);
    assert_eq!(s.current().validation.as_ref().unwrap().status, ValidationStatus::StillVulnerable);
    let bad = Intervention { stage: Stage::S1, kind: InterventionKind::VerdictOverride, payload: "fixed-ish".into(), actor: Actor::Human };
    assert!(e.intervene(&mut s, &sn, bad).is_err());
    let ok = Intervention { stage: Stage::S1, kind: InterventionKind::VerdictOverride, payload: "repaired".into(), actor: Actor::Human };
    e.intervene(&mut s, &sn, ok).unwrap();
    assert_eq!(s.outcome, Some(Outcome::RepairedAt { stage: Stage::S1 }));
    assert_eq!(s.current().interventions[0].actor, Actor::Human);
}

#[test]
fn auto_sessions_reject_interventions() {
    let e = engine(all_stages(BAD_DETECTION, None));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    let i = Intervention { stage: Stage::S1, kind: InterventionKind::DetectionCorrection, payload: String::new(), actor: Actor::Human };
    assert!(e.intervene(&mut s, &sn, i).is_err());
    e.abort(&mut s, "operator").unwrap();
    assert_eq!(s.outcome, Some(Outcome::Aborted));
    assert!(e.abort(&mut s, "again").is_err());
}

#[test]
fn fresh_context_resets_transcript() {
    let sn = snippet();
    let e = engine(all_stages(GOOD_DETECTION, Some(Stage::S3)));
    let mut carried = e.start_session("a", &sn, SessionMode::Auto, Stage::S1, false);
    let mut fresh = e.start_session("b", &sn, SessionMode::Auto, Stage::S1, true);
    e.run_to_completion(&mut carried, &sn).unwrap();
    e.run_to_completion(&mut fresh, &sn).unwrap();
    assert_eq!(carried.transcript.len(), 12);
    assert_eq!(fresh.transcript.len(), 4);
}

#[test]
fn log_replays_to_same_session() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let e = engine(all_stages(BAD_DETECTION, Some(Stage::S5)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    s.persist_to(&path).unwrap();
    e.step(&mut s, &sn).unwrap();
    let mut resumed = Session::replay(&path).unwrap();
    assert_eq!(resumed, s);
    e.run_to_completion(&mut resumed, &sn).unwrap();
    let again = Session::replay(&path).unwrap();
    assert_eq!(again, resumed);
    assert_eq!(again.outcome, Some(Outcome::RepairedAt { stage: Stage::S5 }));

    let mut other = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    e.run_to_completion(&mut other, &sn).unwrap();
    let a: Vec<_> = other.events.iter().map(Event::fingerprint).collect();
    let b: Vec<_> = again.events.iter().map(Event::fingerprint).collect();
    assert_eq!(a, b);
}

#[test]
fn tampered_log_is_rejected() {
    let e = engine(all_stages(GOOD_DETECTION, Some(Stage::S1)));
    let sn = snippet();
    let mut s = e.start_session("s", &sn, SessionMode::Auto, Stage::S1, false);
    e.run_to_completion(&mut s, &sn).unwrap();
    let mut events = s.events.clone();
    events.swap(1, 2);
    assert!(Session::from_events(events).is_err());
    let mut events = s.events.clone();
    if let EventPayload::DetectionPrompt { text } = &mut events[1].payload {
        text.push('!');
    }
    assert!(Session::from_events(events).is_err());
}

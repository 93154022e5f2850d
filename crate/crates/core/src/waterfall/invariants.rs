//! Structural checks over a session and its event log.

use super::session::{EventPayload, InterventionKind, Outcome, Session};
use crate::stage::Stage;
use crate::validator::ValidationStatus;

/// Every violated invariant, as a readable message. Empty means the session
/// is well formed.
pub fn violations(session: &Session) -> Vec<String> {
    let mut out = Vec::new();
    let stages: Vec<Stage> = session.stages.iter().map(|r| r.stage).collect();

    if stages.len() > Stage::ALL.len() {
        out.push(format!("visited {} stages", stages.len()));
    }
    if stages.first() != Some(&session.start_stage) {
        out.push(format!("first stage {:?} is not the start stage {}", stages.first(), session.start_stage));
    }
    if stages.windows(2).any(|w| w[0].next() != Some(w[1])) {
        out.push(format!("stage visits are not strictly increasing by one: {stages:?}"));
    }

    for (i, e) in session.events.iter().enumerate() {
        if e.seq != i as u64 {
            out.push(format!("event {i} has seq {}", e.seq));
        }
        if e.digest != e.payload.digest() {
            out.push(format!("event {i} digest mismatch"));
        }
    }
    if session.events.windows(2).any(|w| w[0].stage > w[1].stage) {
        out.push("event stages go backwards".into());
    }

    // a repaired verdict ends the session
    let repaired_at = session.events.iter().position(
        |e| matches!(e.payload, EventPayload::Verdict { status: ValidationStatus::Repaired, .. }),
    );
    let override_repaired = session.events.iter().position(|e| match &e.payload {
        EventPayload::Intervention { intervention } => {
            intervention.payload.parse::<ValidationStatus>() == Ok(ValidationStatus::Repaired)
                && intervention.kind == InterventionKind::VerdictOverride
        }
        _ => false,
    });
    let first_repair = match (repaired_at, override_repaired) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(k) = first_repair
        && k + 1 != session.events.len() {
            out.push(format!("{} event(s) after the repaired verdict", session.events.len() - k - 1));
        }

    let repaired_records: Vec<Stage> =
        session.stages.iter().filter(|r| r.verdict == Some(ValidationStatus::Repaired)).map(|r| r.stage).collect();
    match session.outcome {
        Some(Outcome::RepairedAt { stage }) => {
            if repaired_records != [stage] || stages.last() != Some(&stage) {
                out.push(format!("repaired at {stage} but records say {repaired_records:?}"));
            }
        }
        Some(Outcome::Exhausted) => {
            if !repaired_records.is_empty() || stages.last() != Some(&Stage::S7) {
                out.push("exhausted without failing every stage through S7".into());
            }
            if session.stages.iter().any(|r| r.verdict.is_none()) {
                out.push("exhausted with an unfinished stage".into());
            }
        }
        Some(Outcome::Aborted) => {
            if !matches!(session.events.last().map(|e| &e.payload), Some(EventPayload::Aborted { .. })) {
                out.push("aborted outcome without a final abort event".into());
            }
        }
        None => {
            if !repaired_records.is_empty() {
                out.push("repaired verdict on an unfinished session".into());
            }
        }
    }

    // every failed stage except the last has a verdict
    for r in &session.stages[..session.stages.len().saturating_sub(1)] {
        if r.verdict.is_none_or(|v| v == ValidationStatus::Repaired) {
            out.push(format!("left {} without a failing verdict", r.stage));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waterfall::SessionMode;

    #[test]
    fn fresh_session_is_clean() {
        let s = Session::new("s", "x", SessionMode::Auto, Stage::S3, false);
        assert!(violations(&s).is_empty());
    }

    #[test]
    fn tampered_logs_are_reported() {
        let mut s = Session::new("s", "x", SessionMode::Auto, Stage::S1, false);
        s.events[0].seq = 4;
        s.outcome = Some(Outcome::Exhausted);
        let v = violations(&s);
        assert!(v.iter().any(|m| m.contains("seq")), "{v:?}");
        assert!(v.iter().any(|m| m.contains("exhausted")), "{v:?}");
    }
}

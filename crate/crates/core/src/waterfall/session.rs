//! Session state as a fold over an append-only event log.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{DetectionVerdict, ExtractedRepair};
use crate::error::EngineError;
use crate::gateway::ChatTurn;
use crate::stage::Stage;
use crate::validator::{ValidationResult, ValidationStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionMode {
    Auto,
    Interactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Detect,
    AwaitingIntervention,
    Repair,
    AwaitingVerdict,
    Done,
}

impl Phase {
    pub fn is_suspended(self) -> bool {
        matches!(self, Phase::AwaitingIntervention | Phase::AwaitingVerdict)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    RepairedAt { stage: Stage },
    Exhausted,
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Auto,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterventionKind {
    DetectionCorrection,
    VerdictOverride,
}

/// A supplied fact (detection correction) or an overriding status string
/// (verdict override).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intervention {
    pub stage: Stage,
    pub kind: InterventionKind,
    pub payload: String,
    pub actor: Actor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EventPayload {
    Started { session_id: String, snippet_id: String, mode: SessionMode, start_stage: Stage, fresh_context: bool },
    DetectionPrompt { text: String },
    DetectionResponse { text: String, verdict: DetectionVerdict },
    Intervention { intervention: Intervention },
    RepairPrompt { text: String },
    RepairResponse { text: String, extraction: ExtractedRepair },
    Validation { result: ValidationResult },
    Verdict { status: ValidationStatus, actor: Actor },
    Aborted { reason: String },
}

impl EventPayload {
    pub fn kind(&self) -> &'static str {
        match self {
            EventPayload::Started { .. } => "started",
            EventPayload::DetectionPrompt { .. } => "detection-prompt",
            EventPayload::DetectionResponse { .. } => "detection-response",
            EventPayload::Intervention { .. } => "intervention",
            EventPayload::RepairPrompt { .. } => "repair-prompt",
            EventPayload::RepairResponse { .. } => "repair-response",
            EventPayload::Validation { .. } => "validation",
            EventPayload::Verdict { .. } => "verdict",
            EventPayload::Aborted { .. } => "aborted",
        }
    }

    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).unwrap_or_default();
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// One log record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub stage: Stage,
    pub digest: String,
    pub timestamp_ms: u64,
    pub payload: EventPayload,
}

impl Event {
    /// Identity of the record with the timestamp left out.
    pub fn fingerprint(&self) -> (u64, Stage, &'static str, &str) {
        (self.seq, self.stage, self.payload.kind(), &self.digest)
    }
}

/// What happened at one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub detection_prompted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interventions: Vec<Intervention>,
    pub repair_prompted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ValidationStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict_actor: Option<Actor>,
}

impl StageRecord {
    fn new(stage: Stage) -> Self {
        StageRecord {
            stage,
            detection_prompted: false,
            detection: None,
            interventions: Vec::new(),
            repair_prompted: false,
            candidate: None,
            validation: None,
            verdict: None,
            verdict_actor: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub snippet_id: String,
    pub mode: SessionMode,
    pub fresh_context: bool,
    pub start_stage: Stage,
    pub stage: Stage,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    pub stages: Vec<StageRecord>,
    pub transcript: Vec<ChatTurn>,
    pub events: Vec<Event>,
    #[serde(skip)]
    log: Option<PathBuf>,
}

impl Session {
    pub fn new(id: &str, snippet_id: &str, mode: SessionMode, start_stage: Stage, fresh_context: bool) -> Self {
        let mut s = Session {
            id: id.to_string(),
            snippet_id: snippet_id.to_string(),
            mode,
            fresh_context,
            start_stage,
            stage: start_stage,
            phase: Phase::Detect,
            outcome: None,
            stages: vec![StageRecord::new(start_stage)],
            transcript: Vec::new(),
            events: Vec::new(),
            log: None,
        };
        let started = EventPayload::Started {
            session_id: id.to_string(),
            snippet_id: snippet_id.to_string(),
            mode,
            start_stage,
            fresh_context,
        };
        s.events.push(make_event(0, start_stage, started));
        s
    }

    pub fn current(&self) -> &StageRecord {
        self.stages.last().expect("a session always has a stage record")
    }

    fn current_mut(&mut self) -> &mut StageRecord {
        self.stages.last_mut().expect("a session always has a stage record")
    }

    pub fn log_path(&self) -> Option<&Path> {
        self.log.as_deref()
    }

    /// Writes the events so far to `path` (replacing it) and appends every
    /// later event as it happens.
    pub fn persist_to(&mut self, path: &Path) -> Result<(), EngineError> {
        let mut text = String::new();
        for e in &self.events {
            text.push_str(&event_line(e, path)?);
        }
        std::fs::write(path, text).map_err(|e| log_error(path, e))?;
        self.log = Some(path.to_path_buf());
        Ok(())
    }

    fn state_error(&self, message: impl Into<String>) -> EngineError {
        EngineError::State { session: self.id.clone(), message: message.into() }
    }

    /// Appends an event: persist, then apply. A failed apply leaves the
    /// session untouched.
    pub(crate) fn record(&mut self, payload: EventPayload) -> Result<(), EngineError> {
        let mut next = self.clone();
        next.apply(&payload)?;
        let event = make_event(self.events.len() as u64, self.stage, payload);
        if let Some(path) = &self.log {
            let line = event_line(&event, path)?;
            let mut f = std::fs::OpenOptions::new().append(true).open(path).map_err(|e| log_error(path, e))?;
            f.write_all(line.as_bytes()).map_err(|e| log_error(path, e))?;
        }
        next.events.push(event);
        *self = next;
        Ok(())
    }

    fn apply(&mut self, payload: &EventPayload) -> Result<(), EngineError> {
        if self.phase == Phase::Done {
            return Err(self.state_error(format!("session finished; cannot apply {}", payload.kind())));
        }
        match payload {
            EventPayload::Started { .. } => return Err(self.state_error("duplicate start event")),
            EventPayload::DetectionPrompt { text } => {
                if self.phase != Phase::Detect || self.current().detection_prompted {
                    return Err(self.state_error(format!("no detection prompt expected at {}", self.stage)));
                }
                self.current_mut().detection_prompted = true;
                self.transcript.push(ChatTurn::user(text.clone()));
            }
            EventPayload::DetectionResponse { text, verdict } => {
                if self.phase != Phase::Detect || !self.current().detection_prompted {
                    return Err(self.state_error("detection response without a prompt"));
                }
                self.current_mut().detection = Some(verdict.clone());
                self.transcript.push(ChatTurn::assistant(text.clone()));
                self.phase = if verdict.correct { Phase::Repair } else { Phase::AwaitingIntervention };
            }
            EventPayload::Intervention { intervention } => {
                if intervention.stage != self.stage {
                    return Err(self.state_error(format!("intervention for {} while at {}", intervention.stage, self.stage)));
                }
                match (intervention.kind, self.phase) {
                    (InterventionKind::DetectionCorrection, Phase::AwaitingIntervention) => {
                        self.transcript.push(ChatTurn::user(intervention.payload.clone()));
                        self.current_mut().interventions.push(intervention.clone());
                        self.phase = Phase::Repair;
                    }
                    (InterventionKind::VerdictOverride, Phase::AwaitingVerdict) => {
                        let status: ValidationStatus =
                            intervention.payload.parse().map_err(|m: String| self.state_error(m))?;
                        self.current_mut().interventions.push(intervention.clone());
                        self.finish_stage(status, intervention.actor);
                    }
                    (kind, phase) => {
                        return Err(self.state_error(format!(
                            "{} intervention not accepted while {}",
                            serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                            serde_json::to_value(phase).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                        )));
                    }
                }
            }
            EventPayload::RepairPrompt { text } => {
                if self.phase != Phase::Repair || self.current().repair_prompted {
                    return Err(self.state_error(format!("no repair prompt expected at {}", self.stage)));
                }
                self.current_mut().repair_prompted = true;
                self.transcript.push(ChatTurn::user(text.clone()));
            }
            EventPayload::RepairResponse { text, extraction } => {
                if self.phase != Phase::Repair || !self.current().repair_prompted || self.current().candidate.is_some() {
                    return Err(self.state_error("repair response without a prompt"));
                }
                self.current_mut().candidate = Some(extraction.chosen_code().unwrap_or_default().to_string());
                self.transcript.push(ChatTurn::assistant(text.clone()));
            }
            EventPayload::Validation { result } => {
                if self.phase != Phase::Repair || self.current().candidate.is_none() {
                    return Err(self.state_error("validation without a candidate"));
                }
                self.current_mut().validation = Some(result.clone());
                self.phase = Phase::AwaitingVerdict;
            }
            EventPayload::Verdict { status, actor } => {
                if self.phase != Phase::AwaitingVerdict {
                    return Err(self.state_error("no verdict pending"));
                }
                self.finish_stage(*status, *actor);
            }
            EventPayload::Aborted { .. } => {
                self.outcome = Some(Outcome::Aborted);
                self.phase = Phase::Done;
            }
        }
        Ok(())
    }

    fn finish_stage(&mut self, status: ValidationStatus, actor: Actor) {
        let rec = self.current_mut();
        rec.verdict = Some(status);
        rec.verdict_actor = Some(actor);
        if status == ValidationStatus::Repaired {
            self.outcome = Some(Outcome::RepairedAt { stage: self.stage });
            self.phase = Phase::Done;
            return;
        }
        match self.stage.next() {
            Some(next) => {
                self.stage = next;
                self.phase = Phase::Detect;
                self.stages.push(StageRecord::new(next));
                if self.fresh_context {
                    self.transcript.clear();
                }
            }
            None => {
                self.outcome = Some(Outcome::Exhausted);
                self.phase = Phase::Done;
            }
        }
    }

    /// Rebuilds a session from its events, checking order and digests.
    pub fn from_events(events: Vec<Event>) -> Result<Session, EngineError> {
        let bad = |message: String| EngineError::State { session: "<replay>".into(), message };
        let mut iter = events.into_iter();
        let first = iter.next().ok_or_else(|| bad("empty event log".into()))?;
        let EventPayload::Started { session_id, snippet_id, mode, start_stage, fresh_context } = &first.payload else {
            return Err(bad("event log does not begin with a start event".into()));
        };
        let mut session = Session::new(session_id, snippet_id, *mode, *start_stage, *fresh_context);
        session.events[0] = first.clone();
        for event in iter {
            if event.seq != session.events.len() as u64 {
                return Err(bad(format!("event {} out of sequence", event.seq)));
            }
            if event.digest != event.payload.digest() {
                return Err(bad(format!("event {} digest mismatch", event.seq)));
            }
            if event.stage != session.stage {
                return Err(bad(format!("event {} stamped {} while at {}", event.seq, event.stage, session.stage)));
            }
            session.apply(&event.payload)?;
            session.events.push(event);
        }
        Ok(session)
    }

    /// Reads a log written by `persist_to` and continues appending to it.
    pub fn replay(path: &Path) -> Result<Session, EngineError> {
        let text = std::fs::read_to_string(path).map_err(|e| log_error(path, e))?;
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let event: Event = serde_json::from_str(line).map_err(|e| EngineError::Log {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })?;
            events.push(event);
        }
        let mut session = Session::from_events(events)?;
        session.log = Some(path.to_path_buf());
        Ok(session)
    }
}

fn make_event(seq: u64, stage: Stage, payload: EventPayload) -> Event {
    let timestamp_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
    Event { seq, stage, digest: payload.digest(), timestamp_ms, payload }
}

fn event_line(event: &Event, path: &Path) -> Result<String, EngineError> {
    let mut line = serde_json::to_string(event).map_err(|e| log_error(path, e))?;
    line.push('\n');
    Ok(line)
}

fn log_error(path: &Path, e: impl std::fmt::Display) -> EngineError {
    EngineError::Log { path: path.to_path_buf(), message: e.to_string() }
}

//! The staged detect, correct, repair and validate loop.

pub mod invariants;
mod session;

use std::sync::Arc;

use crate::analysis::{DetectionVerdict, ExtractedRepair, extract_repair, parse_detection};
use crate::corpus::Snippet;
use crate::error::EngineError;
use crate::gateway::{ChatBackend, ChatTurn, PromptKey, PromptKind};
use crate::prompt::PromptEngine;
use crate::stage::Stage;
use crate::taxonomy::Taxonomy;
use crate::validator::program::is_identifier;
use crate::validator::{Finding, Mode, ToolchainConfig, ValidationResult, ValidationStatus, validate};

pub use session::{
    Actor, Event, EventPayload, Intervention, InterventionKind, Outcome, Phase, Session, SessionMode, StageRecord,
};

pub trait RepairValidator: Send + Sync {
    fn validate(&self, snippet: &Snippet, candidate: &str) -> ValidationResult;
}

/// Static rules, plus the instrumented run when a toolchain is configured.
#[derive(Debug, Clone, Default)]
pub struct StandardValidator {
    pub toolchain: Option<ToolchainConfig>,
}

impl RepairValidator for StandardValidator {
    fn validate(&self, snippet: &Snippet, candidate: &str) -> ValidationResult {
        validate(snippet, candidate, self.toolchain.as_ref())
    }
}

/// Result for a response with no code block to validate.
pub fn no_candidate() -> ValidationResult {
    ValidationResult::new(
        ValidationStatus::Inconclusive,
        Mode::Static,
        vec![Finding::new("extract.no-code", None, "response contains no fenced code block")],
    )
}

#[derive(Clone)]
pub struct Engine {
    pub prompts: Arc<PromptEngine>,
    pub taxonomy: Arc<Taxonomy>,
    pub backend: Arc<dyn ChatBackend>,
    pub validator: Arc<dyn RepairValidator>,
}

impl Engine {
    pub fn new(
        prompts: PromptEngine,
        taxonomy: Taxonomy,
        backend: Arc<dyn ChatBackend>,
        validator: Arc<dyn RepairValidator>,
    ) -> Self {
        Engine { prompts: Arc::new(prompts), taxonomy: Arc::new(taxonomy), backend, validator }
    }

    pub fn start_session(
        &self,
        id: &str,
        snippet: &Snippet,
        mode: SessionMode,
        start_stage: Stage,
        fresh_context: bool,
    ) -> Session {
        Session::new(id, &snippet.id, mode, start_stage, fresh_context)
    }

    fn ask(&self, snippet: &Snippet, stage: Stage, kind: PromptKind, transcript: &[ChatTurn]) -> Result<String, EngineError> {
        let key = PromptKey { snippet_id: snippet.id.clone(), stage, kind };
        Ok(self.backend.complete(&key, transcript)?)
    }

    fn check_snippet(session: &Session, snippet: &Snippet) -> Result<(), EngineError> {
        if session.snippet_id != snippet.id {
            return Err(EngineError::State {
                session: session.id.clone(),
                message: format!("session belongs to snippet {}, not {}", session.snippet_id, snippet.id),
            });
        }
        Ok(())
    }

    /// Performs one transition. Gateway failures leave the session as it was.
    fn advance(&self, session: &mut Session, snippet: &Snippet) -> Result<(), EngineError> {
        let stage = session.stage;
        match session.phase {
            Phase::Done => {
                return Err(EngineError::State { session: session.id.clone(), message: "session already finished".into() });
            }
            Phase::Detect => {
                let text = self.prompts.render_detection(stage, snippet)?;
                let mut transcript = session.transcript.clone();
                transcript.push(ChatTurn::user(text.clone()));
                let response = self.ask(snippet, stage, PromptKind::Detection, &transcript)?;
                let verdict = parse_detection(&response, &snippet.cwe, stage, snippet.truth.as_ref(), &self.taxonomy);
                session.record(EventPayload::DetectionPrompt { text })?;
                session.record(EventPayload::DetectionResponse { text: response, verdict })?;
            }
            Phase::AwaitingIntervention => {
                if session.mode == SessionMode::Interactive {
                    return Err(EngineError::State {
                        session: session.id.clone(),
                        message: format!("awaiting a detection correction at {stage}"),
                    });
                }
                let payload = self.prompts.intervention_text(stage, snippet)?;
                let intervention =
                    Intervention { stage, kind: InterventionKind::DetectionCorrection, payload, actor: Actor::Auto };
                session.record(EventPayload::Intervention { intervention })?;
            }
            Phase::Repair => {
                let text = self.prompts.render_repair(stage, snippet)?;
                let mut transcript = session.transcript.clone();
                transcript.push(ChatTurn::user(text.clone()));
                let response = self.ask(snippet, stage, PromptKind::Repair, &transcript)?;
                let extraction = extract_repair(&response, &snippet.source);
                let result = match extraction.chosen_code() {
                    Some(code) => self.validator.validate(snippet, code),
                    None => no_candidate(),
                };
                session.record(EventPayload::RepairPrompt { text })?;
                session.record(EventPayload::RepairResponse { text: response, extraction })?;
                session.record(EventPayload::Validation { result })?;
            }
            Phase::AwaitingVerdict => {
                let status = session.current().validation.as_ref().map_or(ValidationStatus::Inconclusive, |v| v.status);
                let actor = match session.mode {
                    SessionMode::Auto => Actor::Auto,
                    SessionMode::Interactive => Actor::Human,
                };
                session.record(EventPayload::Verdict { status, actor })?;
            }
        }
        Ok(())
    }

    /// Runs the current stage. Auto mode finishes it; interactive mode stops
    /// at the first suspension. Stepping a session that awaits a verdict
    /// accepts the validator's status.
    pub fn step(&self, session: &mut Session, snippet: &Snippet) -> Result<(), EngineError> {
        Self::check_snippet(session, snippet)?;
        let stage = session.stage;
        loop {
            self.advance(session, snippet)?;
            if session.phase == Phase::Done || session.stage != stage {
                return Ok(());
            }
            if session.mode == SessionMode::Interactive && session.phase.is_suspended() {
                return Ok(());
            }
        }
    }

    /// Applies an operator action to a suspended interactive session and,
    /// for a detection correction, runs the repair half of the stage.
    pub fn intervene(&self, session: &mut Session, snippet: &Snippet, mut intervention: Intervention) -> Result<(), EngineError> {
        Self::check_snippet(session, snippet)?;
        let expected = match session.phase {
            Phase::AwaitingIntervention => InterventionKind::DetectionCorrection,
            Phase::AwaitingVerdict => InterventionKind::VerdictOverride,
            _ => {
                return Err(EngineError::State {
                    session: session.id.clone(),
                    message: "session is not suspended".into(),
                });
            }
        };
        if session.mode != SessionMode::Interactive || intervention.kind != expected {
            return Err(EngineError::State {
                session: session.id.clone(),
                message: "intervention does not match the pending decision".into(),
            });
        }
        intervention.stage = session.stage;
        if intervention.kind == InterventionKind::DetectionCorrection {
            intervention.payload = self.correction_text(session.stage, snippet, &intervention.payload)?;
        }
        session.record(EventPayload::Intervention { intervention })?;
        if session.phase == Phase::Repair {
            self.step(session, snippet)?;
        }
        Ok(())
    }

    /// A bare identifier becomes a full correction sentence; other text is
    /// passed on verbatim.
    fn correction_text(&self, stage: Stage, snippet: &Snippet, payload: &str) -> Result<String, EngineError> {
        let payload = payload.trim();
        if payload.is_empty() {
            return Ok(self.prompts.intervention_text(stage, snippet)?);
        }
        if stage.is_code_context() && is_identifier(payload) {
            return Ok(self.prompts.intervention_with_symbol(snippet, payload)?);
        }
        Ok(payload.to_string())
    }

    pub fn abort(&self, session: &mut Session, reason: &str) -> Result<(), EngineError> {
        session.record(EventPayload::Aborted { reason: reason.to_string() })
    }

    pub fn run_to_completion(&self, session: &mut Session, snippet: &Snippet) -> Result<(), EngineError> {
        if session.mode != SessionMode::Auto {
            return Err(EngineError::State { session: session.id.clone(), message: "run_to_completion needs auto mode".into() });
        }
        while session.outcome.is_none() {
            self.step(session, snippet)?;
        }
        Ok(())
    }

    /// A standalone detection question, outside any session.
    pub fn detect_once(&self, snippet: &Snippet, stage: Stage) -> Result<(String, DetectionVerdict), EngineError> {
        let text = self.prompts.render_detection(stage, snippet)?;
        let response = self.ask(snippet, stage, PromptKind::Detection, &[ChatTurn::user(text)])?;
        let verdict = parse_detection(&response, &snippet.cwe, stage, snippet.truth.as_ref(), &self.taxonomy);
        Ok((response, verdict))
    }

    /// A standalone repair request, outside any session.
    pub fn repair_once(&self, snippet: &Snippet, stage: Stage) -> Result<(ExtractedRepair, ValidationResult), EngineError> {
        let text = self.prompts.render_repair(stage, snippet)?;
        let response = self.ask(snippet, stage, PromptKind::Repair, &[ChatTurn::user(text)])?;
        let extraction = extract_repair(&response, &snippet.source);
        let result = match extraction.chosen_code() {
            Some(code) => self.validator.validate(snippet, code),
            None => no_candidate(),
        };
        Ok((extraction, result))
    }
}

#[cfg(test)]
mod tests;

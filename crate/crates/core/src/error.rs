use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::LineSpan;
use crate::stage::Stage;

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("malformed taxonomy: {0}")]
    Malformed(String),
    #[error("invalid CWE id `{0}`")]
    BadId(String),
    #[error("duplicate CWE id {0}")]
    DuplicateId(u32),
    #[error("duplicate family `{0}`")]
    DuplicateFamily(String),
    #[error("CWE-{0} has no detection keywords")]
    NoKeywords(u32),
    #[error("unknown CWE-{0}: not in taxonomy")]
    UnknownCwe(u32),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: missing meta.json sidecar")]
    MissingSidecar { path: PathBuf },
    #[error("{path}: missing source.* file")]
    MissingSource { path: PathBuf },
    #[error("{path}: malformed metadata: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("{path}: duplicate snippet id `{id}`")]
    DuplicateId { id: String, path: PathBuf },
    #[error("{path}: snippet {id}: vulnerable_lines {span} outside 1..={line_count}")]
    SpanOutOfRange { id: String, span: LineSpan, line_count: usize, path: PathBuf },
    #[error("{path}: unknown CWE-{cwe}")]
    UnknownCwe { cwe: u32, path: PathBuf },
    #[error("{path}: snippet {id}: missing required annotation `{field}`")]
    MissingAnnotation { id: String, field: &'static str, path: PathBuf },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("{path}: declared counts {declared} differ from corpus tally {found}")]
    CountsMismatch { path: PathBuf, declared: String, found: String },
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("snippet {snippet}: stage {stage} needs ground-truth field `{field}`")]
    MissingField { snippet: String, stage: Stage, field: &'static str },
    #[error("snippet {0}: empty source")]
    EmptySource(String),
    #[error("template `{name}`: {message}")]
    Template { name: String, message: String },
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("no scripted rule for snippet {snippet_id}, stage {stage}, {kind} prompt")]
    ScriptedMiss { snippet_id: String, stage: Stage, kind: String },
    #[error("scripted rule for snippet {snippet_id}, stage {stage}, {kind} prompt was recorded for a different prompt text (digest {expected}, got {actual})")]
    PromptDrift { snippet_id: String, stage: Stage, kind: String, expected: String, actual: String },
    #[error("gateway request failed after {attempts} attempt(s): {cause}")]
    Request { attempts: u32, cause: String },
    #[error("invalid backend configuration: {0}")]
    Config(String),
    #[error("transcript must end with a user turn and contain no empty user turns")]
    BadTranscript,
    #[error("script {path}: {message}")]
    Script { path: PathBuf, message: String },
}

impl GatewayError {
    /// True for errors caused by configuration or fixtures rather than
    /// the remote service.
    pub fn is_config(&self) -> bool {
        matches!(self, GatewayError::Config(_) | GatewayError::Script { .. })
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("session {session}: {message}")]
    State { session: String, message: String },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("session log {path}: {message}")]
    Log { path: PathBuf, message: String },
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("snippet {snippet}: {source}")]
    Snippet {
        snippet: String,
        #[source]
        source: EngineError,
    },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error("undefined rate: total is zero")]
    UndefinedRate,
    #[error("inconsistent statistics: {0}")]
    Inconsistent(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

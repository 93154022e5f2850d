//! Chat-completion access: a live HTTP backend and a scripted stand-in.

mod http;
mod ratelimit;
mod scripted;

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GatewayError;
use crate::stage::Stage;

pub use http::{API_KEY_ENV, HttpChatBackend};
pub use ratelimit::{Clock, FakeClock, RateLimiter, SystemClock};
pub use scripted::{ScriptedBackend, ScriptedRule, load_script, prompt_digest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatTurn {
    pub role: Role,
    pub content: String,
}

impl ChatTurn {
    pub fn user(content: impl Into<String>) -> Self {
        ChatTurn { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatTurn { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptKind {
    Detection,
    Repair,
}

impl PromptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptKind::Detection => "detection",
            PromptKind::Repair => "repair",
        }
    }
}

/// Identifies which prompt a transcript is asking, for scripted lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PromptKey {
    pub snippet_id: String,
    pub stage: Stage,
    pub kind: PromptKind,
}

pub trait ChatBackend: Send + Sync {
    fn complete(&self, key: &PromptKey, transcript: &[ChatTurn]) -> Result<String, GatewayError>;

    /// `http-chat` or `scripted`, recorded in run manifests.
    fn kind(&self) -> &'static str;
}

/// Checks the transcript shape shared by every backend. Assistant turns
/// may be empty, since a model can answer with nothing.
pub fn check_transcript(transcript: &[ChatTurn]) -> Result<&str, GatewayError> {
    for t in transcript {
        if t.role == Role::User && t.content.trim().is_empty() {
            return Err(GatewayError::BadTranscript);
        }
    }
    match transcript.last() {
        Some(t) if t.role == Role::User => Ok(&t.content),
        _ => Err(GatewayError::BadTranscript),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    HttpChat,
    Scripted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub endpoint: Option<String>,
    pub model: String,
    pub temperature: f64,
    pub max_retries: u32,
    pub timeout_secs: f64,
    /// Requests per minute; 0 disables limiting.
    pub rate_limit: u32,
    /// Scripted backend: path of the rule file.
    pub script: Option<PathBuf>,
    /// Scripted backend: require matching prompt digests.
    pub strict: bool,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::Scripted,
            endpoint: None,
            model: "gpt-4o-mini".into(),
            temperature: 0.0,
            max_retries: 2,
            timeout_secs: 60.0,
            rate_limit: 60,
            script: None,
            strict: false,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), GatewayError> {
        if !(0.0..=1.0).contains(&self.temperature) {
            return Err(GatewayError::Config(format!("temperature {} outside [0, 1]", self.temperature)));
        }
        if self.timeout_secs <= 0.0 {
            return Err(GatewayError::Config("timeout must be positive".into()));
        }
        match (self.kind, &self.endpoint) {
            (BackendKind::HttpChat, None) => Err(GatewayError::Config("http-chat backend needs an endpoint".into())),
            (BackendKind::Scripted, Some(_)) => Err(GatewayError::Config("scripted backend takes no endpoint".into())),
            (BackendKind::Scripted, None) if self.script.is_none() => {
                Err(GatewayError::Config("scripted backend needs a script file".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Arc<dyn ChatBackend>, GatewayError> {
        self.validate()?;
        Ok(match self.kind {
            BackendKind::HttpChat => Arc::new(HttpChatBackend::from_config(self)?),
            BackendKind::Scripted => {
                let path = self.script.as_ref().ok_or_else(|| GatewayError::Config("missing script".into()))?;
                Arc::new(ScriptedBackend::new(load_script(path)?, self.strict)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_invariants() {
        let mut c = BackendConfig { script: Some("x.json".into()), ..Default::default() };
        assert!(c.validate().is_ok());
        c.endpoint = Some("http://localhost:1".into());
        assert!(c.validate().is_err());
        c.kind = BackendKind::HttpChat;
        assert!(c.validate().is_ok());
        c.endpoint = None;
        assert!(c.validate().unwrap_err().is_config());
        let t = BackendConfig { temperature: 1.5, script: Some("x".into()), ..Default::default() };
        assert!(t.validate().is_err());
        assert_eq!(BackendConfig::default().temperature, 0.0);
    }

    #[test]
    fn transcript_shape() {
        assert!(check_transcript(&[]).is_err());
        assert!(check_transcript(&[ChatTurn::user("q"), ChatTurn::assistant("a")]).is_err());
        assert!(check_transcript(&[ChatTurn::user("  ")]).is_err());
        assert_eq!(check_transcript(&[ChatTurn::user("q")]).unwrap(), "q");
        let after_silence = [ChatTurn::user("q"), ChatTurn::assistant(""), ChatTurn::user("again")];
        assert_eq!(check_transcript(&after_silence).unwrap(), "again");
    }
}

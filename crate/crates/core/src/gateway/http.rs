use std::sync::Arc;
use std::time::Duration;

use serde_json::{Value, json};

use super::ratelimit::{Clock, RateLimiter, SystemClock};
use super::{BackendConfig, ChatBackend, ChatTurn, PromptKey, check_transcript};
use crate::error::GatewayError;

pub const API_KEY_ENV: &str = "REPAIR_CASCADE_API_KEY";

/// Client for the common `/chat/completions` wire shape.
pub struct HttpChatBackend {
    client: reqwest::blocking::Client,
    endpoint: String,
    model: String,
    temperature: f64,
    max_retries: u32,
    api_key: Option<String>,
    limiter: RateLimiter,
    clock: Arc<dyn Clock>,
    backoff: Duration,
}

enum Failure {
    Transient(String),
    Fatal(String),
}

impl HttpChatBackend {
    pub fn from_config(config: &BackendConfig) -> Result<Self, GatewayError> {
        Self::with_clock(config, Arc::new(SystemClock::default()), Duration::from_millis(500))
    }

    pub fn with_clock(config: &BackendConfig, clock: Arc<dyn Clock>, backoff: Duration) -> Result<Self, GatewayError> {
        let endpoint = config.endpoint.clone().ok_or_else(|| GatewayError::Config("http-chat backend needs an endpoint".into()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(config.timeout_secs))
            .build()
            .map_err(|e| GatewayError::Config(e.to_string()))?;
        Ok(HttpChatBackend {
            client,
            endpoint,
            model: config.model.clone(),
            temperature: config.temperature,
            max_retries: config.max_retries,
            api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
            limiter: RateLimiter::per_minute(config.rate_limit, clock.clone()),
            clock,
            backoff,
        })
    }

    fn attempt(&self, body: &Value) -> Result<String, Failure> {
        let mut req = self.client.post(&self.endpoint).json(body);
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| {
            if e.is_connect() || e.is_timeout() || e.is_request() {
                Failure::Transient(e.to_string())
            } else {
                Failure::Fatal(e.to_string())
            }
        })?;
        let status = resp.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(Failure::Transient(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(Failure::Fatal(format!("HTTP {status}")));
        }
        let v: Value = resp.json().map_err(|e| Failure::Fatal(format!("malformed response body: {e}")))?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| Failure::Fatal("response has no choices[0].message.content".into()))
    }
}

impl ChatBackend for HttpChatBackend {
    fn complete(&self, _key: &PromptKey, transcript: &[ChatTurn]) -> Result<String, GatewayError> {
        check_transcript(transcript)?;
        let body = json!({
            "model": self.model,
            "messages": transcript,
            "temperature": self.temperature,
        });
        let mut last = String::new();
        for attempt in 0..=self.max_retries {
            if attempt > 0 {
                self.clock.sleep(self.backoff * 2u32.saturating_pow(attempt - 1));
            }
            self.limiter.acquire();
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err(Failure::Fatal(cause)) => return Err(GatewayError::Request { attempts: attempt + 1, cause }),
                Err(Failure::Transient(cause)) => {
                    tracing::warn!(attempt = attempt + 1, %cause, "chat request failed");
                    last = cause;
                }
            }
        }
        Err(GatewayError::Request { attempts: self.max_retries + 1, cause: last })
    }

    fn kind(&self) -> &'static str {
        "http-chat"
    }
}

//! Run configuration assembled from flags and optional JSON files, plus the
//! mapping from failures to exit codes.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use repair_cascade::evaluation::Manifest;
use repair_cascade::{
    BackendConfig, BackendKind, Condition, Corpus, CorpusError, Engine, EngineError, EvalError, GatewayError, PromptEngine, PromptError,
    StandardValidator, ToolchainConfig, load_corpus,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_BACKEND: u8 = 3;

/// Context marking a failure as a configuration problem.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(message: impl Into<String>) -> anyhow::Error {
    ConfigError(message.into()).into()
}

fn gateway_code(g: &GatewayError) -> u8 {
    if g.is_config() { EXIT_CONFIG } else { EXIT_BACKEND }
}

/// 2 for configuration problems, 3 for backend failures, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    for cause in err.chain() {
        if let Some(g) = cause.downcast_ref::<GatewayError>() {
            return gateway_code(g);
        }
        match cause.downcast_ref::<EngineError>() {
            Some(EngineError::Gateway(g)) => return gateway_code(g),
            Some(EngineError::Prompt(_)) => return EXIT_CONFIG,
            _ => {}
        }
        match cause.downcast_ref::<EvalError>() {
            Some(EvalError::EmptyCorpus) => return EXIT_CONFIG,
            Some(EvalError::Gateway(g)) => return gateway_code(g),
            _ => {}
        }
        if cause.is::<CorpusError>() || cause.is::<PromptError>() || cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
    }
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Scripted,
    HttpChat,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BackendArgs {
    /// Model backend (defaults to the config file's, else scripted).
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    /// Rule file for the scripted backend.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Reject scripted answers recorded for a different prompt text.
    #[arg(long)]
    pub strict_script: bool,
    /// Chat-completions URL for the http-chat backend.
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// JSON backend settings; flags given on the command line win.
    #[arg(long)]
    pub backend_config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Corpus root: one directory per family, one per snippet.
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Also compile and run candidates under sanitizers.
    #[arg(long)]
    pub toolchain: bool,
    /// JSON toolchain settings; implies --toolchain.
    #[arg(long)]
    pub toolchain_config: Option<PathBuf>,
    /// Directory of `<template>.txt` overrides.
    #[arg(long)]
    pub prompts: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BatchArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, default_value_t = 4)]
    pub parallelism: usize,
    /// Output directory for the report, manifest and raw results.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct WaterfallFlags {
    /// Start every stage from an empty transcript.
    #[arg(long)]
    pub fresh_context: bool,
    /// Start waterfall sessions at S3 instead of S1.
    #[arg(long)]
    pub baseline_offset: bool,
}

/// Everything that determines a run's results. Serialized for the config
/// digest, so the output directory is left out.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub backend: BackendConfig,
    pub conditions: Vec<Condition>,
    pub parallelism: usize,
    pub toolchain: Option<ToolchainConfig>,
    pub prompts: Option<PathBuf>,
    pub fresh_context: bool,
    pub baseline_offset: bool,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn digest(&self) -> String {
        sha256_hex(serde_json::to_string(self).unwrap_or_default().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| ConfigError(format!("reading {what} {}", path.display())))?;
    serde_json::from_str(&text).with_context(|| ConfigError(format!("parsing {what} {}", path.display())))
}

pub fn resolve_backend(args: &BackendArgs) -> Result<BackendConfig> {
    let mut config: BackendConfig = match &args.backend_config {
        Some(path) => read_json(path, "backend config")?,
        None => BackendConfig::default(),
    };
    match args.backend {
        Some(BackendChoice::Scripted) => config.kind = BackendKind::Scripted,
        Some(BackendChoice::HttpChat) => config.kind = BackendKind::HttpChat,
        None if args.endpoint.is_some() => config.kind = BackendKind::HttpChat,
        None => {}
    }
    if let Some(s) = &args.script {
        config.script = Some(s.clone());
    }
    if let Some(e) = &args.endpoint {
        config.endpoint = Some(e.clone());
    }
    if let Some(m) = &args.model {
        config.model = m.clone();
    }
    config.strict |= args.strict_script;
    config.validate().map_err(|e| config_error(e.to_string()))?;
    if let (BackendKind::Scripted, Some(path)) = (config.kind, &config.script)
        && !path.is_file() {
            return Err(config_error(format!("script {} does not exist", path.display())));
        }
    Ok(config)
}

pub fn resolve_toolchain(args: &EngineArgs) -> Result<Option<ToolchainConfig>> {
    let config = match (&args.toolchain_config, args.toolchain) {
        (Some(path), _) => read_json(path, "toolchain config")?,
        (None, true) => ToolchainConfig::default(),
        (None, false) => return Ok(None),
    };
    if !config.available() {
        tracing::warn!("toolchain `{}` cannot build instrumented binaries; dynamic validation will be skipped", config.c_compiler);
    }
    Ok(Some(config))
}

/// A loaded corpus with an engine ready to run it.
pub struct Prepared {
    pub corpus: Corpus,
    pub engine: Engine,
    pub prompts: PromptEngine,
    pub backend: BackendConfig,
    pub toolchain: Option<ToolchainConfig>,
}

pub fn prepare(args: &EngineArgs) -> Result<Prepared> {
    if !args.corpus.is_dir() {
        return Err(config_error(format!("corpus {} is not a directory", args.corpus.display())));
    }
    let corpus = load_corpus(&args.corpus).with_context(|| ConfigError(format!("loading corpus {}", args.corpus.display())))?;
    let prompts = match &args.prompts {
        Some(dir) if !dir.is_dir() => return Err(config_error(format!("prompt directory {} does not exist", dir.display()))),
        Some(dir) => PromptEngine::with_overrides(dir).with_context(|| ConfigError("loading prompt overrides".into()))?,
        None => PromptEngine::builtin(),
    };
    let backend = resolve_backend(&args.backend)?;
    let toolchain = resolve_toolchain(args)?;
    let chat = backend.build().with_context(|| ConfigError("building the model backend".into()))?;
    let engine = Engine::new(
        prompts.clone(),
        corpus.taxonomy().clone(),
        chat,
        Arc::new(StandardValidator { toolchain: toolchain.clone() }),
    );
    Ok(Prepared { corpus, engine, prompts, backend, toolchain })
}

impl Prepared {
    pub fn run_config(&self, batch: &BatchArgs, conditions: &[Condition], flags: WaterfallFlags) -> RunConfig {
        RunConfig {
            corpus: batch.engine.corpus.clone(),
            backend: self.backend.clone(),
            conditions: conditions.to_vec(),
            parallelism: batch.parallelism,
            toolchain: self.toolchain.clone(),
            prompts: batch.engine.prompts.clone(),
            fresh_context: flags.fresh_context,
            baseline_offset: flags.baseline_offset,
            out: batch.out.clone(),
        }
    }

    pub fn manifest(&self, config: &RunConfig) -> Result<Manifest> {
        let script_digest = match (&self.backend.kind, &self.backend.script) {
            (BackendKind::Scripted, Some(path)) => {
                Some(sha256_hex(&std::fs::read(path).with_context(|| format!("reading {}", path.display()))?))
            }
            _ => None,
        };
        Ok(Manifest {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            backend_kind: match self.backend.kind {
                BackendKind::Scripted => "scripted".into(),
                BackendKind::HttpChat => "http-chat".into(),
            },
            config_digest: config.digest(),
            corpus_digest: self.corpus.digest(),
            prompt_digest: self.prompts.digest(),
            script_digest,
            conditions: config.conditions.clone(),
            parallelism: config.parallelism,
            fresh_context: config.fresh_context,
            baseline_offset: config.baseline_offset,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_cause() {
        assert_eq!(exit_code(&config_error("x")), EXIT_CONFIG);
        let miss = GatewayError::ScriptedMiss { snippet_id: "a".into(), stage: repair_cascade::Stage::S1, kind: "repair".into() };
        let wrapped = anyhow::Error::from(EvalError::Snippet { snippet: "a".into(), source: EngineError::Gateway(miss) });
        assert_eq!(exit_code(&wrapped), EXIT_BACKEND);
        assert_eq!(exit_code(&anyhow::Error::from(EvalError::EmptyCorpus)), EXIT_CONFIG);
        let bad = anyhow::Error::from(GatewayError::Config("no".into())).context("starting");
        assert_eq!(exit_code(&bad), EXIT_CONFIG);
        let io = anyhow::anyhow!("disk full").context(ConfigError("reading".into()));
        assert_eq!(exit_code(&io), EXIT_CONFIG);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), 1);
    }

    #[test]
    fn flags_override_the_backend_file() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("s.json");
        std::fs::write(&script, "[]").unwrap();
        let file = dir.path().join("backend.json");
        std::fs::write(&file, r#"{"kind":"http-chat","endpoint":"http://localhost:9/v1","model":"m"}"#).unwrap();
        let args = BackendArgs { backend_config: Some(file.clone()), ..Default::default() };
        let c = resolve_backend(&args).unwrap();
        assert_eq!((c.kind, c.model.as_str()), (BackendKind::HttpChat, "m"));
        // switching to scripted needs the endpoint gone, so this is rejected
        let args = BackendArgs { backend_config: Some(file), backend: Some(BackendChoice::Scripted), script: Some(script.clone()), ..Default::default() };
        assert_eq!(exit_code(&resolve_backend(&args).unwrap_err()), EXIT_CONFIG);
        let args = BackendArgs { script: Some(script), strict_script: true, ..Default::default() };
        assert!(resolve_backend(&args).unwrap().strict);
        let missing = BackendArgs { script: Some(dir.path().join("nope.json")), ..Default::default() };
        assert_eq!(exit_code(&resolve_backend(&missing).unwrap_err()), EXIT_CONFIG);
    }
}

//! Staged prompting harness for LLM vulnerability repair.
//!
//! A snippet walks through seven prompt stages. The first three add security
//! context (nothing, "a weakness exists", the weakness type); the last four
//! add code context derived from ground truth (which buffer, its bound, the
//! range check, where the fix belongs). Each stage asks a detection question,
//! corrects a wrong answer, asks for a repair and validates it; the first
//! validated repair ends the session.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod gateway;
pub mod prompt;
pub mod stage;
pub mod taxonomy;
pub mod validator;
pub mod waterfall;

pub use analysis::{Answer, CodeBlock, DetectionVerdict, ExtractedRepair, extract_repair, parse_detection};
pub use corpus::{Corpus, FunctionalCase, GroundTruth, LineSpan, Snippet, load_corpus, write_corpus};
pub use error::{CorpusError, EngineError, EvalError, GatewayError, PromptError, TaxonomyError};
pub use gateway::{BackendConfig, BackendKind, ChatBackend, ChatTurn, PromptKey, PromptKind, ScriptedBackend, ScriptedRule};
pub use prompt::{PromptBundle, PromptEngine};
pub use stage::Stage;
pub use taxonomy::{CweClass, Dependence, RuleSet, Taxonomy};
pub use validator::{Finding, Mode, ScopeReport, ToolchainConfig, ValidationResult, ValidationStatus, validate};
pub use waterfall::{Engine, Outcome, Session, SessionMode, StandardValidator};
pub use evaluation::{BatchOptions, Condition, ReportTable, SnippetResult, compute_rate, emit_stage_curve, emit_table, run_batch};

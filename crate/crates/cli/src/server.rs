//! HTTP session API for interactive review.
//!
//! Each session has one writer lock; engine calls run on the blocking pool
//! while holding it. Readers and event streams never take that lock: after
//! every mutation the writer publishes a snapshot on a watch channel.

use std::collections::BTreeMap;
use std::convert::Infallible;
use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, PoisonError, RwLock};

use anyhow::Context;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode, header};
use axum::response::sse::{Event as SseEvent, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::Stream;
use repair_cascade::waterfall::{Actor, Intervention, InterventionKind, Phase};
use repair_cascade::{Corpus, Engine, EngineError, Outcome, Session, SessionMode, Snippet, Stage, ValidationStatus};
use serde::{Deserialize, Serialize};
use serde_json::{Value, json};
use tokio::sync::watch;

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Where session event logs live; existing logs are reloaded at start.
    pub sessions_dir: Option<PathBuf>,
    /// Searched (with its immediate subdirectories) for `report.json`.
    pub reports_dir: Option<PathBuf>,
}

struct Slot {
    snippet: Snippet,
    writer: Mutex<Session>,
    view: watch::Sender<Arc<Session>>,
}

impl Slot {
    fn new(snippet: Snippet, session: Session) -> Self {
        let (view, _) = watch::channel(Arc::new(session.clone()));
        Slot { snippet, writer: Mutex::new(session), view }
    }

    fn snapshot(&self) -> Arc<Session> {
        self.view.borrow().clone()
    }
}

pub struct AppState {
    corpus: Arc<Corpus>,
    engine: Engine,
    sessions: RwLock<BTreeMap<String, Arc<Slot>>>,
    next_id: AtomicU64,
    options: ServeOptions,
}

fn session_number(id: &str) -> Option<u64> {
    id.strip_prefix('s')?.parse().ok()
}

impl AppState {
    pub fn new(corpus: Corpus, engine: Engine, options: ServeOptions) -> anyhow::Result<Self> {
        let mut sessions = BTreeMap::new();
        if let Some(dir) = &options.sessions_dir {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut logs: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
                .collect();
            logs.sort();
            for path in logs {
                let mut session = Session::replay(&path).with_context(|| format!("replaying {}", path.display()))?;
                let Some(snippet) = corpus.get(&session.snippet_id).cloned() else {
                    tracing::warn!("skipping {}: snippet {} is not in the corpus", path.display(), session.snippet_id);
                    continue;
                };
                session.persist_to(&path)?;
                sessions.insert(session.id.clone(), Arc::new(Slot::new(snippet, session)));
            }
        }
        let next = sessions.keys().filter_map(|k| session_number(k)).max().map_or(1, |n| n + 1);
        Ok(AppState {
            corpus: Arc::new(corpus),
            engine,
            sessions: RwLock::new(sessions),
            next_id: AtomicU64::new(next),
            options,
        })
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        let sessions = self.sessions.read().unwrap_or_else(PoisonError::into_inner);
        sessions.get(id).cloned().ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`")))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/corpus", get(corpus))
        .route("/sessions", get(list_sessions).post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/events", get(events))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/intervention", post(intervention))
        .route("/sessions/{id}/verdict", post(verdict))
        .route("/sessions/{id}/abort", post(abort))
        .route("/reports/latest", get(latest_report))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let status = match &e {
            EngineError::State { .. } => StatusCode::CONFLICT,
            EngineError::Gateway(g) if g.is_config() => StatusCode::INTERNAL_SERVER_ERROR,
            EngineError::Gateway(_) => StatusCode::BAD_GATEWAY,
            EngineError::Prompt(_) => StatusCode::UNPROCESSABLE_ENTITY,
            EngineError::Log { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

async fn corpus(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({ "digest": state.corpus.digest(), "snippets": state.corpus.snippets() }))
}

#[derive(Debug, Serialize)]
struct SessionSummary {
    id: String,
    snippet_id: String,
    mode: SessionMode,
    stage: Stage,
    phase: Phase,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<Outcome>,
}

async fn list_sessions(State(state): State<Arc<AppState>>) -> Json<Vec<SessionSummary>> {
    let sessions = state.sessions.read().unwrap_or_else(PoisonError::into_inner);
    Json(
        sessions
            .values()
            .map(|slot| {
                let s = slot.snapshot();
                SessionSummary {
                    id: s.id.clone(),
                    snippet_id: s.snippet_id.clone(),
                    mode: s.mode,
                    stage: s.stage,
                    phase: s.phase,
                    outcome: s.outcome,
                }
            })
            .collect(),
    )
}

fn interactive() -> SessionMode {
    SessionMode::Interactive
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    snippet_id: String,
    #[serde(default = "interactive")]
    mode: SessionMode,
    #[serde(default)]
    start_stage: Option<Stage>,
    #[serde(default)]
    fresh_context: bool,
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, [(header::HeaderName, String); 1], Json<Session>), ApiError> {
    let snippet = state
        .corpus
        .get(&req.snippet_id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no snippet `{}`", req.snippet_id)))?;
    let id = format!("s{:04}", state.next_id.fetch_add(1, Ordering::SeqCst));
    let mut session =
        state.engine.start_session(&id, &snippet, req.mode, req.start_stage.unwrap_or(Stage::S1), req.fresh_context);
    if let Some(dir) = &state.options.sessions_dir {
        session.persist_to(&dir.join(format!("{id}.jsonl")))?;
    }
    let body = session.clone();
    state.sessions.write().unwrap_or_else(PoisonError::into_inner).insert(id.clone(), Arc::new(Slot::new(snippet, session)));
    tracing::info!(session = %id, snippet = %req.snippet_id, "created");
    Ok((StatusCode::CREATED, [(header::LOCATION, format!("/sessions/{id}"))], Json(body)))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Session>, ApiError> {
    Ok(Json(state.slot(&id)?.snapshot().as_ref().clone()))
}

/// Runs `f` under the session's writer lock on the blocking pool, then
/// publishes the new state whether or not `f` succeeded.
async fn mutate<F>(state: &AppState, id: &str, f: F) -> Result<Json<Session>, ApiError>
where
    F: FnOnce(&Engine, &mut Session, &Snippet) -> Result<(), EngineError> + Send + 'static,
{
    let slot = state.slot(id)?;
    let engine = state.engine.clone();
    let result = tokio::task::spawn_blocking(move || {
        let mut session = slot.writer.lock().unwrap_or_else(PoisonError::into_inner);
        let r = f(&engine, &mut session, &slot.snippet);
        let snapshot = Arc::new(session.clone());
        slot.view.send_replace(snapshot.clone());
        r.map(|()| snapshot)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(result?.as_ref().clone()))
}

fn state_error(session: &Session, message: &str) -> EngineError {
    EngineError::State { session: session.id.clone(), message: message.into() }
}

async fn step(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Session>, ApiError> {
    mutate(&state, &id, |engine, session, snippet| engine.step(session, snippet)).await
}

#[derive(Debug, Deserialize)]
struct InterventionRequest {
    kind: InterventionKind,
    #[serde(default)]
    payload: String,
}

async fn intervention(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<InterventionRequest>,
) -> Result<Json<Session>, ApiError> {
    mutate(&state, &id, move |engine, session, snippet| {
        let i = Intervention { stage: session.stage, kind: req.kind, payload: req.payload, actor: Actor::Human };
        engine.intervene(session, snippet, i)
    })
    .await
}

#[derive(Debug, Default, Deserialize)]
struct VerdictRequest {
    /// Absent: accept the validator's status.
    #[serde(default, rename = "override")]
    status: Option<ValidationStatus>,
}

async fn verdict(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Option<Json<VerdictRequest>>,
) -> Result<Json<Session>, ApiError> {
    let req = body.map(|Json(b)| b).unwrap_or_default();
    mutate(&state, &id, move |engine, session, snippet| {
        if session.phase != Phase::AwaitingVerdict {
            return Err(state_error(session, "no verdict is pending"));
        }
        match req.status {
            Some(status) => {
                let i = Intervention {
                    stage: session.stage,
                    kind: InterventionKind::VerdictOverride,
                    payload: status.as_str().into(),
                    actor: Actor::Human,
                };
                engine.intervene(session, snippet, i)
            }
            None => engine.step(session, snippet),
        }
    })
    .await
}

#[derive(Debug, Default, Deserialize)]
struct AbortRequest {
    #[serde(default)]
    reason: Option<String>,
}

async fn abort(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Option<Json<AbortRequest>>,
) -> Result<Json<Session>, ApiError> {
    let reason = body.and_then(|Json(b)| b.reason).unwrap_or_else(|| "aborted by operator".into());
    mutate(&state, &id, move |engine, session, _| engine.abort(session, &reason)).await
}

#[derive(Debug, Deserialize)]
struct EventsQuery {
    from: Option<usize>,
}

/// Streams the log from `from` (or after `Last-Event-ID`), then live
/// events, and closes once the session has an outcome.
async fn events(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<EventsQuery>,
    headers: HeaderMap,
) -> Result<Sse<impl Stream<Item = Result<SseEvent, Infallible>>>, ApiError> {
    let slot = state.slot(&id)?;
    let resume = headers
        .get("last-event-id")
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|seq| seq + 1);
    let from = q.from.or(resume).unwrap_or(0);
    let rx = slot.view.subscribe();
    let stream = futures::stream::unfold((rx, from), |(mut rx, next)| async move {
        loop {
            let snapshot = rx.borrow_and_update().clone();
            if let Some(e) = snapshot.events.get(next) {
                let data = serde_json::to_string(e).unwrap_or_default();
                let item = SseEvent::default().id(e.seq.to_string()).event(e.payload.kind()).data(data);
                return Some((Ok(item), (rx, next + 1)));
            }
            if snapshot.outcome.is_some() || rx.changed().await.is_err() {
                return None;
            }
        }
    });
    Ok(Sse::new(stream).keep_alive(KeepAlive::default()))
}

/// Newest `report.json` in the reports directory or one level below it.
pub fn latest_report_path(dir: &FsPath) -> Option<PathBuf> {
    let mut candidates = vec![dir.join("report.json")];
    if let Ok(entries) = std::fs::read_dir(dir) {
        candidates.extend(entries.filter_map(|e| e.ok()).map(|e| e.path().join("report.json")));
    }
    candidates
        .into_iter()
        .filter_map(|p| Some((std::fs::metadata(&p).and_then(|m| m.modified()).ok()?, p)))
        .max()
        .map(|(_, p)| p)
}

async fn latest_report(State(state): State<Arc<AppState>>) -> Result<Json<Value>, ApiError> {
    let not_found = || ApiError::new(StatusCode::NOT_FOUND, "no report has been written yet");
    let dir = state.options.reports_dir.as_ref().ok_or_else(not_found)?;
    let path = latest_report_path(dir).ok_or_else(not_found)?;
    let text = std::fs::read_to_string(&path).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    let value = serde_json::from_str(&text)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("{}: {e}", path.display())))?;
    Ok(Json(value))
}

pub async fn serve(state: AppState, bind: &str) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind)
        .await
        .with_context(|| crate::config::ConfigError(format!("binding {bind}")))?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

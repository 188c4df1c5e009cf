//! HTTP/JSON API over a [`Sonifier`].
//!
//! | route | purpose |
//! |---|---|
//! | `GET /api/meta` | regions, categories, years and the active config |
//! | `POST /api/sonify/sequential` | twelve-year rendering of one series |
//! | `POST /api/sonify/comparative` | two-case comparison |
//! | `GET /api/audio/{id}` | WAV bytes of a finished render |
//!
//! Renders run synchronously on the blocking pool; finished audio lives in
//! an in-memory store until its TTL passes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::Config;
use crate::mapping::{SequentialMode, SoundEvent};
use crate::pipeline::{Axis, Comparison, Rendering, Sonifier};
use crate::spatial::GraphPoint;
use crate::SonifyError;

#[derive(Debug, Clone, PartialEq)]
pub enum JobStatus {
    Pending,
    Done,
    Failed(String),
}

/// A render request and its outcome.
#[derive(Debug, Clone)]
pub struct RenderJob {
    pub id: String,
    pub request: Value,
    pub status: JobStatus,
    pub wav: Arc<Vec<u8>>,
    pub graph: Vec<GraphPoint>,
    created: Instant,
}

/// Finished renders keyed by id, evicted after `ttl`.
#[derive(Debug)]
pub struct AudioStore {
    ttl: Duration,
    jobs: Mutex<HashMap<String, RenderJob>>,
}

impl AudioStore {
    pub fn new(ttl: Duration) -> Self {
        AudioStore {
            ttl,
            jobs: Mutex::new(HashMap::new()),
        }
    }

    /// Stores a finished rendering and returns its id.
    pub fn insert(&self, request: Value, rendering: &Rendering) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let job = RenderJob {
            id: id.clone(),
            request,
            status: JobStatus::Done,
            wav: Arc::new(rendering.wav.clone()),
            graph: rendering.graph.clone(),
            created: Instant::now(),
        };
        let mut jobs = self.jobs.lock().unwrap();
        let ttl = self.ttl;
        jobs.retain(|_, j| j.created.elapsed() <= ttl);
        jobs.insert(id.clone(), job);
        id
    }

    pub fn get(&self, id: &str) -> Option<RenderJob> {
        let mut jobs = self.jobs.lock().unwrap();
        match jobs.get(id) {
            Some(j) if j.created.elapsed() > self.ttl => {
                jobs.remove(id);
                None
            }
            Some(j) => Some(j.clone()),
            None => None,
        }
    }

    pub fn len(&self) -> usize {
        self.jobs.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub struct AppState {
    /// `None` until a dataset is loaded; the API answers 503 meanwhile.
    pub sonifier: Option<Arc<Sonifier>>,
    pub store: AudioStore,
    pub config: Config,
}

impl AppState {
    pub fn new(sonifier: Option<Sonifier>, config: Config) -> Arc<Self> {
        let ttl = Duration::from_secs_f64(config.audio_ttl_s);
        Arc::new(AppState {
            sonifier: sonifier.map(Arc::new),
            store: AudioStore::new(ttl),
            config,
        })
    }
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("dataset not loaded")]
    Unavailable,
    #[error("render failed: {0}")]
    Internal(String),
}

impl From<SonifyError> for ApiError {
    fn from(e: SonifyError) -> Self {
        if e.is_user_error() {
            ApiError::BadRequest(e.to_string())
        } else {
            ApiError::Internal(e.to_string())
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Unavailable => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": self.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn sonifier(state: &AppState) -> ApiResult<Arc<Sonifier>> {
    state.sonifier.clone().ok_or(ApiError::Unavailable)
}

pub fn router(state: Arc<AppState>) -> Router {
    let webui = state.config.webui_dir.clone();
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/sonify/sequential", post(sonify_sequential))
        .route("/api/sonify/comparative", post(sonify_comparative))
        .route("/api/audio/{id}", get(audio))
        .with_state(state);
    match webui {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

async fn meta(State(state): State<Arc<AppState>>) -> ApiResult<Json<Value>> {
    let s = sonifier(&state)?;
    Ok(Json(json!({
        "regions": s.processed().regions(),
        "categories": s.processed().categories(),
        "years": s.processed().years(),
        "config": {
            "mapping": s.mapping(),
            "spatial": s.spatial(),
            "sample_rate_hz": s.sample_rate_hz(),
            "audio_ttl_s": state.config.audio_ttl_s,
            "sample_bank": state.config.sample_bank_dir.is_some(),
        },
    })))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct SequentialRequest {
    pub region: String,
    pub category: String,
    pub mode: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SequentialResponse {
    pub id: String,
    pub audio_url: String,
    pub mode: String,
    pub graph: Vec<GraphPoint>,
    pub events: Vec<SoundEvent>,
}

async fn render_blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> Result<T, SonifyError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map_err(ApiError::from)
}

fn audio_url(id: &str) -> String {
    format!("/api/audio/{id}")
}

async fn sonify_sequential(
    State(state): State<Arc<AppState>>,
    body: Result<Json<SequentialRequest>, JsonRejection>,
) -> ApiResult<Json<SequentialResponse>> {
    let Json(req) = body?;
    let s = sonifier(&state)?;
    let mode: SequentialMode = req.mode.parse().map_err(ApiError::BadRequest)?;
    let (region, category) = (req.region.clone(), req.category.clone());
    let rendering = render_blocking(move || s.sequential(&region, &category, mode)).await?;
    let request = serde_json::to_value(&req).unwrap_or(Value::Null);
    let id = state.store.insert(request, &rendering);
    Ok(Json(SequentialResponse {
        audio_url: audio_url(&id),
        id,
        mode: rendering.plan.mode.as_str().to_string(),
        graph: rendering.graph,
        events: rendering.plan.events,
    }))
}

#[derive(Debug, Deserialize)]
pub struct ComparativeRequest {
    pub fixed: serde_json::Map<String, Value>,
    pub compare: Vec<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComparativeResponse {
    pub id: String,
    pub audio_url: String,
    pub compare: String,
    pub labels: [String; 2],
    pub values: [f64; 2],
    pub louder: String,
    pub graph: Vec<GraphPoint>,
    pub events: Vec<SoundEvent>,
}

fn scalar_text(v: &Value) -> ApiResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(ApiError::BadRequest(format!("expected a name or year, got {other}"))),
    }
}

impl ComparativeRequest {
    pub fn to_comparison(&self) -> ApiResult<Comparison> {
        if self.fixed.len() != 2 {
            return Err(ApiError::BadRequest(format!(
                "exactly two fixed variables are required, got {}",
                self.fixed.len()
            )));
        }
        let fixed = self
            .fixed
            .iter()
            .map(|(k, v)| {
                let axis = Axis::parse(k).ok_or_else(|| ApiError::BadRequest(format!("unknown variable `{k}`")))?;
                Ok((axis, scalar_text(v)?))
            })
            .collect::<ApiResult<Vec<_>>>()?;
        let [a, b] = self.compare.as_slice() else {
            return Err(ApiError::BadRequest(format!(
                "compare needs exactly two cases, got {}",
                self.compare.len()
            )));
        };
        Ok(Comparison {
            fixed,
            compare: [scalar_text(a)?, scalar_text(b)?],
        })
    }
}

async fn sonify_comparative(
    State(state): State<Arc<AppState>>,
    body: Result<Json<Value>, JsonRejection>,
) -> ApiResult<Json<ComparativeResponse>> {
    let Json(raw) = body?;
    let req: ComparativeRequest =
        serde_json::from_value(raw.clone()).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let cmp = req.to_comparison()?;
    let s = sonifier(&state)?;
    let out = render_blocking(move || s.comparative(&cmp)).await?;
    let id = state.store.insert(raw, &out.rendering);
    Ok(Json(ComparativeResponse {
        audio_url: audio_url(&id),
        id,
        compare: out.compare_axis.to_string(),
        labels: out.labels,
        values: out.values,
        louder: out.louder.as_str().to_string(),
        graph: out.rendering.graph,
        events: out.rendering.plan.events,
    }))
}

async fn audio(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let job = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::NotFound(format!("no audio with id `{id}`")))?;
    let len = job.wav.len();
    Ok((
        [
            (header::CONTENT_TYPE, "audio/wav".to_string()),
            (header::CONTENT_LENGTH, len.to_string()),
        ],
        job.wav.as_ref().clone(),
    )
        .into_response())
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error(transparent)]
    Setup(#[from] SonifyError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server: {0}")]
    Server(#[source] std::io::Error),
}

/// Loads everything named by `cfg`, binds, and serves until Ctrl-C.
pub async fn serve(cfg: Config) -> Result<(), ServeError> {
    let sonifier = Sonifier::from_config(&cfg)?;
    let listener = tokio::net::TcpListener::bind(&cfg.bind_addr)
        .await
        .map_err(|source| ServeError::Bind {
            addr: cfg.bind_addr.clone(),
            source,
        })?;
    let local = listener.local_addr().map_err(ServeError::Server)?;
    eprintln!("sonify: listening on http://{local}");
    let app = router(AppState::new(Some(sonifier), cfg));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(ServeError::Server)
}

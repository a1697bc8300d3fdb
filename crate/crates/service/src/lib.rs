//! Stateless HTTP front end for one case.
//!
//! The case is parsed once at startup into an immutable [`Case`]; each
//! request derives its own scenario from it, so handlers share nothing
//! mutable and need no locks.
//!
//! | Method | Path                          | Body          | Response         |
//! |--------|-------------------------------|---------------|------------------|
//! | GET    | `/api/health`                 |               | status           |
//! | GET    | `/api/case`                   |               | `CaseDescriptor` |
//! | POST   | `/api/evaluate`               | `ScenarioSpec`| `RunReport`      |
//! | GET    | `/api/presets/{id}/evaluate`  |               | `RunReport`      |
//!
//! Anything else falls through to the static console directory, if one is
//! configured.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use judge_core::scenario::{Case, FieldError, FieldErrorKind, ScenarioError, ScenarioSpec};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

/// What the service was started with.
#[derive(Clone)]
pub struct AppState {
    case: Result<Arc<Case>, String>,
}

impl AppState {
    pub fn new(case: Case) -> Self {
        AppState { case: Ok(Arc::new(case)) }
    }

    /// A state whose case failed to load; every endpoint answers 500.
    pub fn failed(message: impl Into<String>) -> Self {
        AppState { case: Err(message.into()) }
    }

    pub fn load(path: impl AsRef<Path>) -> Self {
        match Case::load(path) {
            Ok(case) => AppState::new(case),
            Err(e) => AppState::failed(e.to_string()),
        }
    }

    pub fn case(&self) -> Result<&Case, ApiError> {
        self.case.as_deref().map_err(|e| ApiError::unavailable(e.clone()))
    }
}

/// Error body: a message plus the offending fields, if any.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn unavailable(message: String) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody { error: format!("case failed to load: {message}"), fields: Vec::new() },
        }
    }

    fn bad_body(message: String) -> Self {
        let field = FieldError { field: "body".into(), kind: FieldErrorKind::WrongType, message: message.clone() };
        ApiError { status: StatusCode::BAD_REQUEST, body: ErrorBody { error: message, fields: vec![field] } }
    }
}

impl From<ScenarioError> for ApiError {
    fn from(e: ScenarioError) -> Self {
        let status = match &e {
            ScenarioError::Invalid(_) if e.is_out_of_range() => StatusCode::UNPROCESSABLE_ENTITY,
            ScenarioError::Invalid(_) => StatusCode::BAD_REQUEST,
            ScenarioError::UnknownPreset(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError { status, body: ErrorBody { error: e.to_string(), fields: e.fields().to_vec() } }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Serialize)]
struct Health {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

async fn health(State(state): State<AppState>) -> Response {
    match &state.case {
        Ok(case) => Json(Health { status: "ok", case: Some(case.id().to_string()), error: None }).into_response(),
        Err(e) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(Health { status: "error", case: None, error: Some(e.clone()) }),
        )
            .into_response(),
    }
}

async fn describe(State(state): State<AppState>) -> Result<Response, ApiError> {
    Ok(Json(state.case()?.descriptor()).into_response())
}

async fn evaluate(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let case = state.case()?;
    let spec: ScenarioSpec = if body.iter().all(u8::is_ascii_whitespace) {
        ScenarioSpec::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_body(format!("invalid request body: {e}")))?
    };
    Ok(Json(case.run(&spec)?).into_response())
}

#[derive(Debug, Default, Deserialize)]
struct PresetQuery {
    #[serde(default)]
    explain: bool,
}

async fn preset(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<PresetQuery>,
) -> Result<Response, ApiError> {
    Ok(Json(state.case()?.run_preset(&id, query.explain)?).into_response())
}

const NO_CONSOLE: &str = "<!doctype html><title>judge</title>\
<p>No console is installed. The API is under <code>/api</code>: \
<a href=\"/api/case\">/api/case</a>, <code>POST /api/evaluate</code>, \
<code>/api/presets/{id}/evaluate</code>.</p>";

/// The API routes, with `static_dir` (the built console) mounted at `/`.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/case", get(describe))
        .route("/api/evaluate", post(evaluate))
        .route("/api/presets/{id}/evaluate", get(preset))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(NO_CONSOLE) })),
    }
}

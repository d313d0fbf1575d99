//! HTTP/JSON API for the administration console.
//!
//! Every failure answers with `{code, message, detail}`.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};

use wsmatch_core::annotate::{AnnotateError, ManifestEntry};
use wsmatch_core::mapping::{evaluate, parse_data_expr_syntax, MatchingPlan, Value, ValidationReport};
use wsmatch_core::matcher::{CorrespondenceTable, RowSuggestions};
use wsmatch_core::similarity::RankingFailure;

use crate::session::{MatchingSession, SessionState, Workflow, WorkflowError};
use crate::store::{SessionStore, StoreError};

#[derive(Clone)]
pub struct AppState {
    pub workflow: Arc<Workflow>,
    pub store: Arc<SessionStore>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    detail: JsonValue,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            detail: JsonValue::Null,
        }
    }

    fn detail(mut self, detail: JsonValue) -> Self {
        self.detail = detail;
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"code": self.code, "message": self.message, "detail": self.detail});
        (self.status, Json(body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match &e {
            StoreError::NotFound(id) => {
                ApiError::new(StatusCode::NOT_FOUND, "not_found", e.to_string()).detail(json!({"id": id}))
            }
            StoreError::Io { .. } | StoreError::Corrupt { .. } => {
                log::error!("{e}");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", e.to_string())
            }
        }
    }
}

impl From<WorkflowError> for ApiError {
    fn from(e: WorkflowError) -> Self {
        let message = e.to_string();
        match e {
            WorkflowError::WrongState { actual, allowed } => ApiError::new(StatusCode::CONFLICT, "wrong_state", message)
                .detail(json!({"state": actual, "allowed": allowed})),
            WorkflowError::IndexOutOfRange { index, len } => {
                ApiError::new(StatusCode::BAD_REQUEST, "index_out_of_range", message)
                    .detail(json!({"index": index, "len": len}))
            }
            WorkflowError::Fetch { uri, .. } => {
                ApiError::new(StatusCode::BAD_GATEWAY, "fetch_failed", message).detail(json!({"uri": uri}))
            }
            WorkflowError::Parse { uri, .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_wsdl", message).detail(json!({"uri": uri}))
            }
            WorkflowError::Registry(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "registry", message),
            WorkflowError::Similarity(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "similarity", message),
            WorkflowError::Matcher(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "matcher", message),
            WorkflowError::Invalid(report) | WorkflowError::Annotate(AnnotateError::Invalid(report)) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation_failed", message)
                    .detail(serde_json::to_value(report).unwrap_or_default())
            }
            WorkflowError::Annotate(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "annotation_failed", message),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.body_text())
    }
}

#[derive(Debug)]
enum Failure {
    Store(StoreError),
    Workflow(WorkflowError),
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        Failure::Store(e)
    }
}

impl From<WorkflowError> for Failure {
    fn from(e: WorkflowError) -> Self {
        Failure::Workflow(e)
    }
}

impl From<Failure> for ApiError {
    fn from(f: Failure) -> Self {
        match f {
            Failure::Store(e) => e.into(),
            Failure::Workflow(e) => e.into(),
        }
    }
}

/// Runs blocking session work off the async executor.
async fn blocking<T: Send + 'static>(work: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(work)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

fn step<T: Send + 'static>(
    state: &AppState,
    id: String,
    f: impl FnOnce(&Workflow, &mut MatchingSession) -> Result<T, WorkflowError> + Send + 'static,
) -> impl std::future::Future<Output = Result<T, ApiError>> {
    let state = state.clone();
    blocking(move || {
        let workflow = state.workflow.clone();
        state
            .store
            .update(&id, |s| f(&workflow, s).map_err(Failure::from))
            .map_err(ApiError::from)
    })
}

fn read(state: &AppState, id: String) -> impl std::future::Future<Output = Result<MatchingSession, ApiError>> {
    let store = state.store.clone();
    blocking(move || store.load(&id).map_err(ApiError::from))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CreateSession {
    pub target_wsdl_uri: String,
    pub registry_uri: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankingRow {
    pub index: usize,
    pub name: String,
    pub wsdl_uri: String,
    pub score: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RankingView {
    pub state: SessionState,
    pub candidates: Vec<RankingRow>,
    pub failures: Vec<RankingFailure>,
}

impl From<&MatchingSession> for RankingView {
    fn from(s: &MatchingSession) -> Self {
        Self {
            state: s.state,
            candidates: s
                .ranking
                .iter()
                .enumerate()
                .map(|(index, c)| RankingRow {
                    index,
                    name: c.name.clone(),
                    wsdl_uri: c.wsdl_uri.clone(),
                    score: c.score,
                })
                .collect(),
            failures: s.failures.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct Select {
    pub index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TableView {
    pub state: SessionState,
    pub selected: usize,
    pub candidate: RankingRow,
    pub table: CorrespondenceTable,
    pub suggestions: Vec<RowSuggestions>,
}

impl TableView {
    fn of(s: &MatchingSession) -> Result<Self, ApiError> {
        let (Some(index), Some(table)) = (s.selected, &s.table) else {
            return Err(WorkflowError::WrongState {
                actual: s.state,
                allowed: vec![
                    SessionState::CandidateSelected,
                    SessionState::MatchingDrafted,
                    SessionState::Confirmed,
                ],
            }
            .into());
        };
        let c = &s.ranking[index];
        Ok(Self {
            state: s.state,
            selected: index,
            candidate: RankingRow {
                index,
                name: c.name.clone(),
                wsdl_uri: c.wsdl_uri.clone(),
                score: c.score,
            },
            table: table.clone(),
            suggestions: s.suggestions.clone(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DraftView {
    pub state: SessionState,
    pub plan: MatchingPlan,
    pub report: ValidationReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfirmView {
    pub state: SessionState,
    pub manifest: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
pub struct Evaluate {
    pub expr: String,
    #[serde(default)]
    pub bindings: HashMap<String, Value>,
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<MatchingSession>), ApiError> {
    let Json(req) = body?;
    let session = blocking(move || {
        let session = state
            .workflow
            .create(SessionStore::new_id(), &req.target_wsdl_uri, &req.registry_uri)?;
        state.store.save(&session)?;
        Ok(session)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<MatchingSession>, ApiError> {
    Ok(Json(read(&state, id).await?))
}

async fn rank(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<RankingView>, ApiError> {
    let view = step(&state, id, |w, s| {
        w.rank(s)?;
        Ok(RankingView::from(&*s))
    })
    .await?;
    Ok(Json(view))
}

async fn ranking(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<RankingView>, ApiError> {
    let s = read(&state, id).await?;
    if s.state == SessionState::Created {
        return Err(WorkflowError::WrongState {
            actual: s.state,
            allowed: vec![
                SessionState::Ranked,
                SessionState::CandidateSelected,
                SessionState::MatchingDrafted,
                SessionState::Confirmed,
            ],
        }
        .into());
    }
    Ok(Json(RankingView::from(&s)))
}

async fn select(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<Select>, JsonRejection>,
) -> Result<Json<TableView>, ApiError> {
    let Json(Select { index }) = body?;
    let s = step(&state, id, move |w, s| {
        w.select(s, index)?;
        Ok(s.clone())
    })
    .await?;
    Ok(Json(TableView::of(&s)?))
}

async fn table(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<TableView>, ApiError> {
    let s = read(&state, id).await?;
    Ok(Json(TableView::of(&s)?))
}

async fn put_plan(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MatchingPlan>, JsonRejection>,
) -> Result<Json<DraftView>, ApiError> {
    let Json(fragment) = body?;
    let view = step(&state, id, move |w, s| {
        w.draft(s, &fragment)?;
        Ok(DraftView {
            state: s.state,
            plan: s.plan.clone(),
            report: s.report.clone(),
        })
    })
    .await?;
    Ok(Json(view))
}

async fn confirm(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<ConfirmView>, ApiError> {
    let view = step(&state, id, |w, s| {
        w.confirm(s)?;
        let manifest = s.artifacts.as_ref().map(|a| a.manifest.clone()).unwrap_or_default();
        Ok(ConfirmView {
            state: s.state,
            manifest,
        })
    })
    .await?;
    Ok(Json(view))
}

async fn artifact(
    State(state): State<AppState>,
    Path((id, which)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let s = read(&state, id).await?;
    let Some(pair) = &s.artifacts else {
        return Err(WorkflowError::WrongState {
            actual: s.state,
            allowed: vec![SessionState::Confirmed],
        }
        .into());
    };
    let doc = match which.as_str() {
        "substituted" => pair.substituted_doc.clone(),
        "substituent" => pair.substituent_doc.clone(),
        _ => {
            return Err(ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no artifact {which}"))
                .detail(json!({"artifact": which})))
        }
    };
    let disposition = format!("attachment; filename=\"{which}.wsdl\"");
    Ok((
        [
            (header::CONTENT_TYPE, "application/xml; charset=utf-8".to_string()),
            (header::CONTENT_DISPOSITION, disposition),
        ],
        doc,
    )
        .into_response())
}

/// Sample-value preview for the expression editor.
async fn evaluate_expression(body: Result<Json<Evaluate>, JsonRejection>) -> Result<Json<JsonValue>, ApiError> {
    let Json(req) = body?;
    let expr = parse_data_expr_syntax(&req.expr).map_err(|e| {
        ApiError::new(StatusCode::BAD_REQUEST, "syntax", e.to_string()).detail(json!({"position": e.position()}))
    })?;
    let value = evaluate(&expr, &req.bindings)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "evaluation", e.to_string()))?;
    Ok(Json(json!({"expr": expr.to_string(), "value": value})))
}

async fn fallback() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/rank", post(rank))
        .route("/sessions/{id}/ranking", get(ranking))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/table", get(table))
        .route("/sessions/{id}/plan", put(put_plan))
        .route("/sessions/{id}/confirm", post(confirm))
        .route("/sessions/{id}/artifacts/{which}", get(artifact))
        .route("/expressions/evaluate", post(evaluate_expression))
        .fallback(fallback)
        .with_state(state)
}

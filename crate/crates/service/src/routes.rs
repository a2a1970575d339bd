use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use regconf::{Model, Op, Problem, Session, TraceEntry};

use crate::error::ApiError;
use crate::store::{SessionEntry, SessionHandle, Store};

pub const DEFAULT_SUGGESTIONS: usize = 5;
pub const DEFAULT_MAX_LEN: usize = 16;
const MAX_SUGGESTIONS: usize = 100;
const MAX_LEN_LIMIT: usize = 256;

type ApiResult<T> = Result<T, ApiError>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/problems", post(create_problem))
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/{id}", get(get_session))
        .route("/v1/sessions/{id}/append", post(append))
        .route("/v1/sessions/{id}/complete", post(complete))
        .route("/v1/sessions/{id}/undo", post(undo))
        .route("/v1/sessions/{id}/domain/{variable}", get(domain))
        .with_state(store)
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed request body: {e}")))
}

fn session_handle(store: &Store, id: &str) -> ApiResult<SessionHandle> {
    store.session(id).ok_or_else(|| ApiError::not_found("session", id))
}

fn variable_of(session: &Session, name: &str) -> ApiResult<usize> {
    session.variable_index(name).map_err(|e| ApiError::engine(e, name))
}

fn state_json(entry: &SessionEntry) -> serde_json::Value {
    serde_json::to_value(entry.session.view()).expect("serializable view")
}

fn persist(store: &Store, id: &str, entry: &SessionEntry) -> ApiResult<()> {
    store.save(id, entry).map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "snapshot write failed",
            json!({ "message": e.to_string() }),
        )
    })
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "ok": true }))
}

async fn create_problem(State(store): State<Arc<Store>>, body: Bytes) -> ApiResult<Response> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::bad_request("body is not UTF-8"))?;
    let problem = Problem::from_json(text).map_err(ApiError::problem)?;
    let model = Model::build(Arc::new(problem)).map_err(|e| ApiError::engine(e, ""))?;
    let stats = model.stats();
    let id = store.add_problem(Arc::new(model));
    Ok((StatusCode::CREATED, Json(json!({ "problem_id": id, "stats": stats }))).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    problem_id: String,
}

async fn create_session(State(store): State<Arc<Store>>, body: Bytes) -> ApiResult<Response> {
    let req: CreateSession = parse_body(&body)?;
    let model = store
        .problem(&req.problem_id)
        .ok_or_else(|| ApiError::not_found("problem", &req.problem_id))?;
    let (id, handle) = store.add_session(&req.problem_id, Session::new(model));
    let entry = handle.lock().await;
    persist(&store, &id, &entry)?;
    let body = json!({ "session_id": id, "state": state_json(&entry) });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_session(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let handle = session_handle(&store, &id)?;
    let entry = handle.lock().await;
    Ok(Json(json!({
        "session_id": id,
        "problem_id": entry.problem_id,
        "state": state_json(&entry),
        "trace": entry.session.trace(),
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AppendRequest {
    variable: String,
    text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableRequest {
    variable: String,
}

async fn mutate(store: &Store, id: &str, entry_op: TraceEntry) -> ApiResult<Json<serde_json::Value>> {
    let handle = session_handle(store, id)?;
    let mut entry = handle.lock().await;
    variable_of(&entry.session, &entry_op.variable)?;
    entry
        .session
        .apply(&entry_op)
        .map_err(|e| ApiError::engine(e, &entry_op.variable))?;
    persist(store, id, &entry)?;
    Ok(Json(state_json(&entry)))
}

async fn append(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let req: AppendRequest = parse_body(&body)?;
    let op = TraceEntry {
        op: Op::Append,
        variable: req.variable,
        text: req.text,
    };
    mutate(&store, &id, op).await
}

async fn complete(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let req: VariableRequest = parse_body(&body)?;
    let op = TraceEntry {
        op: Op::Complete,
        variable: req.variable,
        text: String::new(),
    };
    mutate(&store, &id, op).await
}

async fn undo(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let handle = session_handle(&store, &id)?;
    let mut entry = handle.lock().await;
    entry.session.undo().map_err(|e| ApiError::engine(e, ""))?;
    persist(&store, &id, &entry)?;
    Ok(Json(state_json(&entry)))
}

fn count_param(query: &HashMap<String, String>, name: &str, default: usize, range: (usize, usize)) -> ApiResult<usize> {
    let Some(raw) = query.get(name) else {
        return Ok(default);
    };
    let value: usize = raw
        .parse()
        .map_err(|_| ApiError::bad_request(format!("{name} must be a non-negative integer")))?;
    if value < range.0 || value > range.1 {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("{name} must be between {} and {}", range.0, range.1),
            json!({ name: value }),
        ));
    }
    Ok(value)
}

async fn domain(
    State(store): State<Arc<Store>>,
    Path((id, variable)): Path<(String, String)>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Json<serde_json::Value>> {
    let k = count_param(&query, "suggest", DEFAULT_SUGGESTIONS, (1, MAX_SUGGESTIONS))?;
    let max_len = count_param(&query, "max_len", DEFAULT_MAX_LEN, (0, MAX_LEN_LIMIT))?;
    let handle = session_handle(&store, &id)?;
    let entry = handle.lock().await;
    let i = variable_of(&entry.session, &variable)?;
    let view = entry.session.domain_view(i, k, max_len);
    Ok(Json(serde_json::to_value(view).expect("serializable view")))
}

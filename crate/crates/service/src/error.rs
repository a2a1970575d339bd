use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};

use regconf::{EngineError, ProblemError};

/// Error response: `{"error": message, "detail": object}`.
#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub error: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, error: impl Into<String>, detail: Value) -> Self {
        Self {
            status,
            error: error.into(),
            detail,
        }
    }

    pub fn bad_request(error: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, error, json!({}))
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("unknown {what}"), json!({ what: id }))
    }

    pub fn engine(e: EngineError, variable: &str) -> Self {
        let status = match &e {
            EngineError::InvalidAppend
            | EngineError::VariableCompleted(_)
            | EngineError::CompletionDisabled
            | EngineError::NothingToUndo => StatusCode::CONFLICT,
            EngineError::InfeasibleProblem => StatusCode::UNPROCESSABLE_ENTITY,
            EngineError::UnknownVariable(_) => StatusCode::NOT_FOUND,
            EngineError::Alphabet(_) | EngineError::EmptyAppend => StatusCode::BAD_REQUEST,
        };
        let kind = format!("{e:?}");
        let kind = kind.split(['(', ' ']).next().unwrap_or_default().to_string();
        let detail = if variable.is_empty() {
            json!({ "kind": kind })
        } else {
            json!({ "kind": kind, "variable": variable })
        };
        Self::new(status, e.to_string(), detail)
    }

    pub fn problem(e: ProblemError) -> Self {
        let mut detail = json!({});
        match &e {
            ProblemError::Syntax { constraint, error } => {
                detail = json!({ "constraint": constraint, "position": error.position });
            }
            ProblemError::Regex {
                constraint,
                regex,
                offset,
                error,
            } => {
                detail = json!({ "constraint": constraint, "regex": regex, "position": offset + error.position().unwrap_or(0) });
            }
            ProblemError::UnknownVariable { constraint, variable } => {
                detail = json!({ "constraint": constraint, "variable": variable });
            }
            _ => {}
        }
        Self::new(StatusCode::BAD_REQUEST, e.to_string(), detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.error, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}

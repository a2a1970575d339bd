use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use regconf::compile_regex;
use regconf_service::{router, Store};

fn fixture(name: &str) -> String {
    let path = format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, "POST", uri, Some(body.to_string())).await
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, "GET", uri, None).await
}

async fn session_for(app: &Router, fixture_name: &str) -> (String, Value) {
    let (status, body) = call(app, "POST", "/v1/problems", Some(fixture(fixture_name))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    let problem_id = body["problem_id"].as_str().unwrap().to_string();
    let (status, body) = post(app, "/v1/sessions", json!({ "problem_id": problem_id })).await;
    assert_eq!(status, StatusCode::CREATED);
    (body["session_id"].as_str().unwrap().to_string(), body["state"].clone())
}

fn app() -> Router {
    router(Arc::new(Store::new()))
}

#[tokio::test]
async fn health() {
    let (status, body) = get(&app(), "/v1/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({ "ok": true }));
}

#[tokio::test]
async fn problem_registration() {
    let app = app();
    let (status, body) = call(&app, "POST", "/v1/problems", Some(fixture("worked.json"))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["stats"]["atoms"], 3);
    assert_eq!(body["stats"]["vars"], 2);

    let contradiction = json!({
        "alphabet": ["a"], "variables": ["x"],
        "constraints": ["match(x,\"a\")", "!match(x,\"a\")"]
    });
    let (status, body) = post(&app, "/v1/problems", contradiction).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "No feasible solutions");

    let bad_regex = json!({ "alphabet": ["a"], "variables": ["x"], "constraints": ["match(x,\"a(\")"] });
    let (status, body) = post(&app, "/v1/problems", bad_regex).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    // offset 11 in the constraint text: end of `a(`
    assert_eq!(body["detail"]["position"], 11);

    let (status, _) = call(&app, "POST", "/v1/problems", Some("{".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sessions() {
    let app = app();
    let (a, state) = session_for(&app, "worked.json").await;
    let (b, _) = session_for(&app, "worked.json").await;
    assert_ne!(a, b);
    let regex = state["x2"]["domain_regex"].as_str().unwrap();
    let alphabet = Arc::new(regconf::Alphabet::new("abcd".chars(), false).unwrap());
    let abd = compile_regex("abd*", &alphabet).unwrap();
    assert!(compile_regex(regex, &alphabet).unwrap().equivalent(&abd).unwrap());
    assert_eq!(state["x1"]["value"], "");

    let (status, body) = post(&app, "/v1/sessions", json!({ "problem_id": "nope" })).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "unknown problem");
    let (status, _) = get(&app, "/v1/sessions/nope/domain/x1").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn append_and_domain() {
    let app = app();
    let (id, _) = session_for(&app, "product.json").await;
    let (status, state) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x2", "text": "ab"})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["x2"]["value"], "ab");
    let (status, _) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x1", "text": "a"})).await;
    assert_eq!(status, StatusCode::OK);

    let uri = format!("/v1/sessions/{id}/domain/x2?suggest=2");
    let (status, domain) = get(&app, &uri).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(domain["regex"], "d*");
    assert_eq!(domain["next_letters"], json!(["d"]));
    assert_eq!(domain["suggestions"], json!(["", "d"]));
    assert_eq!(domain["can_complete"], false);
    // reads are idempotent
    assert_eq!(get(&app, &uri).await.1, domain);

    let before = get(&app, &format!("/v1/sessions/{id}")).await.1;
    let (status, body) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x2", "text": "c"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "invalid append");
    assert_eq!(get(&app, &format!("/v1/sessions/{id}")).await.1, before);

    let (status, _) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x2", "text": "z"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x9", "text": "a"})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x2"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn domain_parameters() {
    let app = app();
    let (id, _) = session_for(&app, "worked.json").await;
    let (status, _) = get(&app, &format!("/v1/sessions/{id}/domain/x1?suggest=0")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = get(&app, &format!("/v1/sessions/{id}/domain/x1?max_len=-1")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = get(&app, &format!("/v1/sessions/{id}/domain/x1")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["suggestions"], json!(["a"]));

    let free = json!({ "alphabet": ["a","b","c"], "variables": ["x"], "constraints": [] });
    let (_, body) = post(&app, "/v1/problems", free).await;
    let (_, body) = post(&app, "/v1/sessions", json!({ "problem_id": body["problem_id"] })).await;
    let sid = body["session_id"].as_str().unwrap();
    let (_, body) = get(&app, &format!("/v1/sessions/{sid}/domain/x")).await;
    assert_eq!(body["next_letters"], json!(["a", "b", "c"]));
}

#[tokio::test]
async fn complete_and_undo() {
    let app = app();
    let (id, _) = session_for(&app, "eol.json").await;
    let url = |op: &str| format!("/v1/sessions/{id}/{op}");
    let (status, body) = post(&app, &url("undo"), json!({})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "nothing to undo");
    post(&app, &url("append"), json!({"variable": "x", "text": "ab"})).await;
    let (status, state) = post(&app, &url("complete"), json!({"variable": "x"})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["x"]["completed"], true);
    assert_eq!(state["x"]["value"], "ab$");
    let (status, body) = post(&app, &url("append"), json!({"variable": "x", "text": "a"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["detail"]["kind"], "VariableCompleted");
    let (status, state) = post(&app, &url("undo"), json!({})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["x"]["completed"], false);
    assert_eq!(state["x"]["can_complete"], true);

    let (id, _) = session_for(&app, "worked.json").await;
    let (status, body) = post(&app, &format!("/v1/sessions/{id}/complete"), json!({"variable": "x1"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["detail"]["kind"], "CompletionDisabled");
}

#[tokio::test]
async fn intro_scenario() {
    let app = app();
    let (id, _) = session_for(&app, "intro.json").await;
    let url = |op: &str| format!("/v1/sessions/{id}/{op}");
    post(&app, &url("append"), json!({"variable": "phone", "text": "+45"})).await;
    let (_, country) = get(&app, &url("domain/country")).await;
    assert_eq!(country["next_letters"], json!(["D"]));
    assert_eq!(country["suggestions"], json!(["Denmark"]));
    post(&app, &url("append"), json!({"variable": "district", "text": "Copenhagen S"})).await;
    let (status, _) = post(&app, &url("complete"), json!({"variable": "district"})).await;
    assert_eq!(status, StatusCode::OK);
    let (_, zip) = get(&app, &url("domain/zip")).await;
    assert_eq!(zip["suggestions"], json!(["2300"]));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_appends_serialize() {
    let app = app();
    let free = json!({ "alphabet": ["a"], "variables": ["x"], "constraints": [] });
    let (_, body) = post(&app, "/v1/problems", free).await;
    let (_, body) = post(&app, "/v1/sessions", json!({ "problem_id": body["problem_id"] })).await;
    let id = body["session_id"].as_str().unwrap().to_string();
    let tasks: Vec<_> = (0..32)
        .map(|_| {
            let app = app.clone();
            let id = id.clone();
            tokio::spawn(async move {
                post(&app, &format!("/v1/sessions/{id}/append"), json!({"variable": "x", "text": "a"})).await
            })
        })
        .collect();
    for t in tasks {
        assert_eq!(t.await.unwrap().0, StatusCode::OK);
    }
    let (_, body) = get(&app, &format!("/v1/sessions/{id}")).await;
    assert_eq!(body["state"]["x"]["value"], "a".repeat(32));
    assert_eq!(body["trace"].as_array().unwrap().len(), 32);
}

#[tokio::test]
async fn snapshots_replay() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(Store::with_snapshots(dir.path()).unwrap());
    let app = router(store);
    let (id, _) = session_for(&app, "intro.json").await;
    let url = |op: &str| format!("/v1/sessions/{id}/{op}");
    post(&app, &url("append"), json!({"variable": "phone", "text": "+45"})).await;
    post(&app, &url("append"), json!({"variable": "district", "text": "Copenhagen S"})).await;
    post(&app, &url("complete"), json!({"variable": "district"})).await;
    post(&app, &url("append"), json!({"variable": "zip", "text": "23"})).await;
    post(&app, &url("undo"), json!({})).await;
    let before = get(&app, &format!("/v1/sessions/{id}")).await.1;

    let store = Arc::new(Store::with_snapshots(dir.path()).unwrap());
    let (restored, failed) = store.restore().unwrap();
    assert_eq!(restored, vec![id.clone()]);
    assert!(failed.is_empty());
    let app = router(store);
    let after = get(&app, &format!("/v1/sessions/{id}")).await.1;
    assert_eq!(after, before);
    let (_, zip) = get(&app, &url("domain/zip")).await;
    assert_eq!(zip["suggestions"], json!(["2300"]));
}

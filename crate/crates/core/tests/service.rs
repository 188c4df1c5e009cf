mod common;

use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use sonify::service::{router, AppState};
use sonify::{Config, Sonifier};
use tower::ServiceExt;

fn state_with(cfg: Config) -> Arc<AppState> {
    let s = Sonifier::from_config(&cfg).unwrap();
    AppState::new(Some(s), cfg)
}

fn state() -> Arc<AppState> {
    state_with(common::fixture_config())
}

async fn call(state: &Arc<AppState>, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>, axum::http::HeaderMap) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = router(state.clone()).oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes, headers)
}

async fn json_call(state: &Arc<AppState>, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, bytes, _) = call(state, method, uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

#[tokio::test]
async fn meta_lists_axes_and_config() {
    let st = state();
    let (status, v) = json_call(&st, Method::GET, "/api/meta", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["regions"].as_array().unwrap().len(), 36);
    assert_eq!(v["categories"].as_array().unwrap().len(), 9);
    assert_eq!(v["years"].as_array().unwrap().len(), 12);
    assert_eq!(v["years"][0], 2001);
    assert_eq!(v["config"]["mapping"]["n_bands"], 5);
    assert_eq!(v["config"]["mapping"]["inter_event_gap_s"], 0.25);
    assert_eq!(v["config"]["spatial"], json!({"ring": 8, "trajectory": "rotate"}));
}

#[tokio::test]
async fn meta_before_load_is_503() {
    let st = AppState::new(None, Config::default());
    let (status, _) = json_call(&st, Method::GET, "/api/meta", None).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
}

#[tokio::test]
async fn sequential_round_trip() {
    let st = state();
    let body = json!({"region": "All India", "category": "Rape", "mode": "frequency"});
    let (status, v) = json_call(&st, Method::POST, "/api/sonify/sequential", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    let graph = v["graph"].as_array().unwrap();
    assert_eq!(graph.len(), 12);
    assert_eq!(graph[0]["label"], "2001");
    assert_eq!(graph[0]["value"], 0.0);
    assert_eq!(v["events"].as_array().unwrap().len(), 12);

    let url = v["audio_url"].as_str().unwrap();
    let (status, wav, headers) = call(&st, Method::GET, url, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(&wav[..4], b"RIFF");
    assert_eq!(headers["content-type"], "audio/wav");
    assert_eq!(headers["content-length"], wav.len().to_string());

    let (status, head_body, headers) = call(&st, Method::HEAD, url, None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(head_body.is_empty());
    assert_eq!(headers["content-length"], wav.len().to_string());
}

#[tokio::test]
async fn sequential_errors() {
    let st = state();
    for body in [
        json!({"region": "Atlantis", "category": "Rape", "mode": "frequency"}),
        json!({"region": "Goa", "category": "Theft", "mode": "amplitude"}),
        json!({"region": "Goa", "category": "Rape", "mode": "tempo"}),
        json!({"region": "Goa"}),
    ] {
        let (status, v) = json_call(&st, Method::POST, "/api/sonify/sequential", Some(body.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body} -> {v}");
        assert!(v["error"].is_string());
    }
}

#[tokio::test]
async fn comparative_contract() {
    let st = state();
    let total = "Total Crimes Against Women";
    let rising = st
        .sonifier
        .as_ref()
        .unwrap()
        .processed()
        .all_series()
        .find(|s| s.category == total && s.values[11] > 0.0)
        .expect("fixture has a rising series");
    let body = json!({"fixed": {"state": rising.region, "crime": total}, "compare": [2001, 2012]});
    let (status, v) = json_call(&st, Method::POST, "/api/sonify/comparative", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["louder"], "b");
    assert_eq!(v["compare"], "year");
    assert_eq!(v["values"][0], 0.0);
    assert!(v["values"][1].as_f64().unwrap() > 0.0);

    let same = json!({"fixed": {"region": "Goa", "year": 2005}, "compare": ["Rape", "rape"]});
    let (status, v) = json_call(&st, Method::POST, "/api/sonify/comparative", Some(same)).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["louder"], "equal");
    assert_eq!(v["events"][0]["gain"], v["events"][1]["gain"]);

    let three = json!({"fixed": {"region": "Goa", "category": "Rape", "year": 2005}, "compare": ["a", "b"]});
    let (status, _) = json_call(&st, Method::POST, "/api/sonify/comparative", Some(three)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let unknown = json!({"fixed": {"region": "Goa", "year": 2005}, "compare": ["Rape", "Theft"]});
    let (status, _) = json_call(&st, Method::POST, "/api/sonify/comparative", Some(unknown)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn comparative_louder_matches_values_across_states() {
    let st = state();
    let body = json!({"fixed": {"category": "Dowry Deaths", "year": "2010"}, "compare": ["Delhi", "Bihar"]});
    let (status, v) = json_call(&st, Method::POST, "/api/sonify/comparative", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let (a, b) = (v["values"][0].as_f64().unwrap(), v["values"][1].as_f64().unwrap());
    let expect = if a > b { "a" } else if b > a { "b" } else { "equal" };
    assert_eq!(v["louder"], expect);
}

#[tokio::test]
async fn audio_ids_expire_and_unknown_ids_404() {
    let cfg = Config {
        audio_ttl_s: 0.05,
        ..common::fixture_config()
    };
    let st = state_with(cfg);
    let (_, v) = json_call(
        &st,
        Method::POST,
        "/api/sonify/sequential",
        Some(json!({"region": "Goa", "category": "Rape", "mode": "amplitude"})),
    )
    .await;
    let url = v["audio_url"].as_str().unwrap().to_string();
    tokio::time::sleep(Duration::from_millis(80)).await;
    let (status, _, _) = call(&st, Method::GET, &url, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _) = call(&st, Method::GET, "/api/audio/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn identical_requests_give_identical_audio() {
    let st = state();
    let body = json!({"region": "Kerala", "category": "Dowry Deaths", "mode": "amplitude"});
    let mut wavs = Vec::new();
    for _ in 0..2 {
        let (_, v) = json_call(&st, Method::POST, "/api/sonify/sequential", Some(body.clone())).await;
        let (_, wav, _) = call(&st, Method::GET, v["audio_url"].as_str().unwrap(), None).await;
        wavs.push(wav);
    }
    assert_eq!(wavs[0], wavs[1]);
}

#[tokio::test]
async fn serves_static_ui_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>ui</h1>").unwrap();
    let cfg = Config {
        webui_dir: Some(dir.path().to_path_buf()),
        ..common::fixture_config()
    };
    let st = state_with(cfg);
    let (status, body, _) = call(&st, Method::GET, "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<h1>ui</h1>");
}

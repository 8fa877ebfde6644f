//! Fixture loading and in-process HTTP calls for the gateway tests.
#![allow(dead_code)]

use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use deontix_cli::{router, AppState, Store};
use deontix_core::annotation::Document;
use deontix_core::prover::ResourceLimits;

pub const QUERIES: [&str; 4] = ["case-1", "case-2", "test-scenario-1", "test-scenario-2"];

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(id: &str) -> PathBuf {
    if id == "article-1" {
        fixtures().join("article-1.json")
    } else {
        fixtures().join("queries").join(format!("{id}.json"))
    }
}

pub fn fixture(id: &str) -> Document {
    serde_json::from_str(&std::fs::read_to_string(fixture_path(id)).unwrap()).unwrap()
}

pub struct Gateway {
    pub app: Router,
    pub state: AppState,
    _dir: tempfile::TempDir,
}

impl Gateway {
    pub fn new(max_provers: usize) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let state = AppState::new(Store::open(dir.path()).unwrap(), max_provers, ResourceLimits::default());
        Gateway {
            app: router(state.clone()),
            state,
            _dir: dir,
        }
    }

    /// A gateway whose store holds the article and the four query fixtures.
    pub async fn with_fixtures() -> Self {
        let g = Gateway::new(4);
        for id in std::iter::once("article-1").chain(QUERIES) {
            let (s, body) = g.post_json("/documents", &serde_json::to_value(fixture(id)).unwrap()).await;
            assert_eq!(s, StatusCode::CREATED, "{body}");
        }
        g
    }

    pub async fn call(&self, method: Method, uri: &str, body: Option<Vec<u8>>) -> (StatusCode, Value) {
        let mut req = Request::builder().method(method).uri(uri);
        if body.is_some() {
            req = req.header("content-type", "application/json");
        }
        let req = req.body(body.map_or_else(Body::empty, Body::from)).unwrap();
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let value = if bytes.is_empty() {
            Value::Null
        } else {
            serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
        };
        (status, value)
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::POST, uri, None).await
    }

    pub async fn post_json(&self, uri: &str, body: &Value) -> (StatusCode, Value) {
        self.call(Method::POST, uri, Some(serde_json::to_vec(body).unwrap())).await
    }

    pub async fn put_json(&self, uri: &str, body: &Value) -> (StatusCode, Value) {
        self.call(Method::PUT, uri, Some(serde_json::to_vec(body).unwrap())).await
    }
}

//! REST gateway over the document store and the reasoning services.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

use deontix_core::annotation::{auto_name, Document, DocumentKind};
use deontix_core::prover::ResourceLimits;

use crate::error::ApiError;
use crate::reports;
use crate::store::{Store, StoreRecord};

pub const DEFAULT_MAX_PROVERS: usize = 4;

#[derive(Clone)]
pub struct AppState {
    store: Arc<Store>,
    provers: Arc<Semaphore>,
    limits: ResourceLimits,
}

impl AppState {
    pub fn new(store: Store, max_provers: usize, limits: ResourceLimits) -> Self {
        AppState {
            store: Arc::new(store),
            provers: Arc::new(Semaphore::new(max_provers)),
            limits,
        }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Shared prover slots; holding permits makes reasoning endpoints answer 503.
    pub fn prover_slots(&self) -> Arc<Semaphore> {
        self.provers.clone()
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_json(&e))
}

/// Limit overrides from the query string: `depth`, `ms`, `atoms`.
fn limits_from(params: &HashMap<String, String>, base: ResourceLimits) -> Result<ResourceLimits, ApiError> {
    fn field<T: std::str::FromStr>(params: &HashMap<String, String>, key: &str) -> Result<Option<T>, ApiError> {
        params
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| ApiError::new(400, "invalid_limits", format!("`{key}` must be a positive integer")))
            })
            .transpose()
    }
    let limits = ResourceLimits {
        max_depth: field(params, "depth")?.unwrap_or(base.max_depth),
        time_budget_ms: field(params, "ms")?.unwrap_or(base.time_budget_ms),
        max_ground_atoms: field(params, "atoms")?.unwrap_or(base.max_ground_atoms),
    };
    limits.validate()?;
    Ok(limits)
}

/// Runs prover work on the blocking pool if a slot is free, 503 otherwise.
async fn with_prover<T, F>(state: &AppState, work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    let permit = state.provers.clone().try_acquire_owned().map_err(|_| ApiError::busy())?;
    tokio::task::spawn_blocking(move || {
        let out = work();
        drop(permit);
        out
    })
    .await
    .map_err(|e| ApiError::internal(format!("prover task failed: {e}")))?
}

async fn blocking<T, F>(work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(work)
        .await
        .map_err(|e| ApiError::internal(format!("store task failed: {e}")))?
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DocumentSummary {
    pub id: String,
    pub title: String,
    pub kind: DocumentKind,
    pub revision: u64,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

impl From<&StoreRecord> for DocumentSummary {
    fn from(r: &StoreRecord) -> Self {
        DocumentSummary {
            id: r.document.id.clone(),
            title: r.document.title.clone(),
            kind: r.document.kind,
            revision: r.revision,
            created_at: r.created_at,
            updated_at: r.updated_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateRequest {
    pub revision: u64,
    pub document: Document,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoName {
    pub name: String,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/documents", get(list_documents).post(create_document))
        .route(
            "/documents/{id}",
            get(get_document).put(update_document).delete(delete_document),
        )
        .route("/documents/{id}/consistency", post(run_consistency))
        .route("/documents/{id}/independence", post(run_independence))
        .route("/documents/{id}/vocabulary", get(document_vocabulary))
        .route("/documents/{id}/formalization", get(formalization))
        .route("/documents/{id}/export", get(export))
        .route("/documents/{id}/tests", post(run_tests))
        .route("/queries/{id}/exec", post(exec_query))
        .route("/vocabulary", get(store_vocabulary))
        .route("/vocabulary/auto-name", get(suggest_name))
        .with_state(state)
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn load(state: &AppState, id: String) -> Result<Document, ApiError> {
    let store = state.store.clone();
    blocking(move || Ok(store.get(&id)?.document)).await
}

async fn load_all(state: &AppState) -> Result<Vec<StoreRecord>, ApiError> {
    let store = state.store.clone();
    blocking(move || Ok(store.list()?)).await
}

async fn list_documents(State(state): State<AppState>) -> ApiResult<Vec<DocumentSummary>> {
    let records = load_all(&state).await?;
    Ok(Json(records.iter().map(DocumentSummary::from).collect()))
}

async fn create_document(State(state): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<StoreRecord>), ApiError> {
    let doc: Document = parse_body(&body)?;
    let store = state.store.clone();
    let record = blocking(move || Ok(store.create(doc)?)).await?;
    Ok((StatusCode::CREATED, Json(record)))
}

async fn get_document(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StoreRecord> {
    let store = state.store.clone();
    Ok(Json(blocking(move || Ok(store.get(&id)?)).await?))
}

async fn update_document(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<StoreRecord> {
    let req: UpdateRequest = parse_body(&body)?;
    if req.document.id != id {
        return Err(ApiError::new(
            422,
            "id_mismatch",
            format!("body document id `{}` differs from `{id}`", req.document.id),
        ));
    }
    let store = state.store.clone();
    Ok(Json(blocking(move || Ok(store.update(&id, req.revision, req.document)?)).await?))
}

async fn delete_document(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let store = state.store.clone();
    blocking(move || Ok(store.delete(&id)?)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn run_consistency(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<reports::ConsistencyPayload> {
    let limits = limits_from(&params, state.limits)?;
    let doc = load(&state, id).await?;
    // Compile errors are reported without taking a prover slot.
    reports::formulas(&doc)?;
    Ok(Json(with_prover(&state, move || reports::consistency(&doc, limits)).await?))
}

async fn run_independence(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<reports::IndependencePayload> {
    let limits = limits_from(&params, state.limits)?;
    let doc = load(&state, id).await?;
    reports::formulas(&doc)?;
    Ok(Json(with_prover(&state, move || reports::independence(&doc, limits)).await?))
}

async fn formalization(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<reports::FormulaListingReport> {
    let doc = load(&state, id).await?;
    Ok(Json(reports::formulas(&doc)?))
}

async fn document_vocabulary(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<deontix_core::annotation::Vocabulary> {
    let doc = load(&state, id).await?;
    Ok(Json(reports::vocabulary(&[doc])))
}

async fn store_vocabulary(State(state): State<AppState>) -> ApiResult<deontix_core::annotation::Vocabulary> {
    let docs: Vec<Document> = load_all(&state).await?.into_iter().map(|r| r.document).collect();
    Ok(Json(reports::vocabulary(&docs)))
}

async fn suggest_name(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<AutoName> {
    let text = params
        .get("text")
        .ok_or_else(|| ApiError::new(400, "missing_parameter", "`text` is required"))?;
    let docs: Vec<Document> = load_all(&state).await?.into_iter().map(|r| r.document).collect();
    let name = auto_name(text, &reports::vocabulary(&docs))
        .map_err(|e| ApiError::new(422, "no_auto_name", e.to_string()))?;
    Ok(Json(AutoName { name }))
}

async fn export(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<reports::ExportPayload> {
    let law = load(&state, id).await?;
    let query = match params.get("query") {
        Some(q) => Some(load(&state, q.clone()).await?),
        None => None,
    };
    Ok(Json(reports::export(&law, query.as_ref())?))
}

/// Test queries named in `queries` (comma separated), or every query document.
async fn run_tests(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<deontix_core::services::TestReport> {
    let limits = limits_from(&params, state.limits)?;
    let law = load(&state, id).await?;
    let queries = match params.get("queries") {
        Some(list) => {
            let mut docs = Vec::new();
            for qid in list.split(',').filter(|s| !s.is_empty()) {
                docs.push(load(&state, qid.to_owned()).await?);
            }
            docs
        }
        None => load_all(&state)
            .await?
            .into_iter()
            .map(|r| r.document)
            .filter(|d| d.kind == DocumentKind::Query)
            .collect(),
    };
    reports::problem(&law, None)?;
    Ok(Json(with_prover(&state, move || reports::tests(&law, &queries, limits)).await?))
}

async fn exec_query(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<deontix_core::services::QueryResult> {
    let limits = limits_from(&params, state.limits)?;
    let legislation = params
        .get("legislation")
        .ok_or_else(|| ApiError::new(400, "missing_parameter", "`legislation` is required"))?
        .clone();
    let query = load(&state, id).await?;
    let law = load(&state, legislation).await?;
    reports::problem(&law, Some(&query))?;
    Ok(Json(with_prover(&state, move || reports::query(&query, &law, limits)).await?))
}

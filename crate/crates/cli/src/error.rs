use serde::{Deserialize, Serialize};

use deontix_core::annotation::{AnnotationError, CompileError};
use deontix_core::prover::InvalidLimits;
use deontix_core::services::ServiceError;

use crate::store::StoreError;

/// Error body shared by the HTTP API and the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiError {
    /// HTTP status the error maps to.
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl ApiError {
    pub fn new(status: u16, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.to_owned(),
            message: message.into(),
            annotation: None,
            line: None,
            column: None,
        }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        ApiError::new(404, "not_found", format!("{what} `{id}` does not exist"))
    }

    pub fn busy() -> Self {
        ApiError::new(503, "busy", "too many prover runs in progress; retry later")
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError::new(500, "internal_error", message)
    }

    fn at(mut self, annotation: Option<&str>) -> Self {
        self.annotation = annotation.map(str::to_owned);
        self
    }

    /// Malformed JSON, with the position serde reports.
    pub fn bad_json(e: &serde_json::Error) -> Self {
        let mut err = ApiError::new(422, "invalid_document", e.to_string());
        if e.line() > 0 {
            err.line = Some(e.line());
            err.column = Some(e.column());
        }
        err
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<AnnotationError> for ApiError {
    fn from(e: AnnotationError) -> Self {
        ApiError::new(422, e.code(), e.to_string()).at(e.annotation())
    }
}

impl From<CompileError> for ApiError {
    fn from(e: CompileError) -> Self {
        ApiError::new(422, e.code(), e.to_string()).at(e.annotation())
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        match &e {
            ServiceError::Signature { source, .. } => ApiError::new(422, source.code(), e.to_string()),
        }
    }
}

impl From<InvalidLimits> for ApiError {
    fn from(e: InvalidLimits) -> Self {
        ApiError::new(400, "invalid_limits", e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(id) => ApiError::not_found("document", &id),
            StoreError::Exists(_) => ApiError::new(409, "already_exists", e.to_string()),
            StoreError::Stale { .. } => ApiError::new(409, "stale_revision", e.to_string()),
            StoreError::BadId(_) => ApiError::new(422, "invalid_id", e.to_string()),
            StoreError::Invalid(inner) => inner.into(),
            StoreError::Io(_) | StoreError::Corrupt { .. } => ApiError::internal(e.to_string()),
        }
    }
}

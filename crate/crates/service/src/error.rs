// Copyright 2026 The qsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use qsim_core::optimizer::OptimizeError;
use qsim_core::registry::RegistryError;
use qsim_core::{CatalogError, StageError};
use serde::Serialize;

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
}

#[derive(Debug)]
pub enum ApiError {
    /// A query failed in one of the pipeline stages.
    Query(StageError),
    Status {
        status: StatusCode,
        error: &'static str,
        message: String,
    },
}

impl ApiError {
    pub fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        ApiError::Status {
            status,
            error,
            message: message.into(),
        }
    }

    pub fn bad_request(error: &'static str, message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, error, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::Query(e) => (StatusCode::BAD_REQUEST, Json(e)).into_response(),
            ApiError::Status { status, error, message } => (status, Json(ErrorBody { error, message })).into_response(),
        }
    }
}

impl From<StageError> for ApiError {
    fn from(e: StageError) -> Self {
        ApiError::Query(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request("InvalidRequest", e.body_text())
    }
}

impl From<CatalogError> for ApiError {
    fn from(e: CatalogError) -> Self {
        let (status, kind) = match &e {
            CatalogError::DuplicateTable(_) => (StatusCode::CONFLICT, "DuplicateTable"),
            CatalogError::UnknownTable(_) => (StatusCode::NOT_FOUND, "UnknownTable"),
            CatalogError::UnknownType { .. } => (StatusCode::BAD_REQUEST, "UnknownType"),
            CatalogError::CellParseError { .. } => (StatusCode::BAD_REQUEST, "CellParseError"),
            CatalogError::ArityMismatch { .. } => (StatusCode::BAD_REQUEST, "ArityMismatch"),
            CatalogError::InvalidName(_) => (StatusCode::BAD_REQUEST, "InvalidName"),
            CatalogError::InvalidHeader(_) => (StatusCode::BAD_REQUEST, "InvalidHeader"),
            CatalogError::Csv(_) => (StatusCode::BAD_REQUEST, "MalformedCsv"),
            CatalogError::InvalidRelation { .. } => (StatusCode::BAD_REQUEST, "InvalidRelation"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        let (status, kind) = match &e {
            RegistryError::UnknownSyntax(_) => (StatusCode::NOT_FOUND, "UnknownSyntax"),
            RegistryError::UnknownEntryPoint(_) => (StatusCode::NOT_FOUND, "UnknownEntryPoint"),
            RegistryError::Conflict { .. } => (StatusCode::CONFLICT, "Conflict"),
            RegistryError::DuplicateSyntax(_) => (StatusCode::CONFLICT, "DuplicateSyntax"),
            RegistryError::InvalidRegistration(_) => (StatusCode::BAD_REQUEST, "InvalidRegistration"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl From<OptimizeError> for ApiError {
    fn from(e: OptimizeError) -> Self {
        let kind = match &e {
            OptimizeError::UnknownRule(_) => "UnknownRule",
            OptimizeError::DuplicateRule(_) => "DuplicateRule",
            OptimizeError::RuleViolation { .. } => "RuleViolation",
        };
        ApiError::bad_request(kind, e.to_string())
    }
}

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

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use qsim_core::cost::backend_from_name;
use qsim_core::registry::{EntryPoint, SyntaxStatus};
use qsim_core::{run_query, QueryOptions, QueryResponse, Schema};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::state::{AppState, HistoryRecord, SessionRules};
use crate::workspace::add_dataset;

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    pub sql: String,
    /// Overrides the session rules for this query only.
    pub rules: Option<Vec<String>>,
    #[serde(default = "yes")]
    pub optimize: bool,
    pub max_iterations: Option<usize>,
    /// `builtin`, `stub` or `sqlite`; defaults to the server's backend.
    pub estimator: Option<String>,
}

fn yes() -> bool {
    true
}

pub async fn query(State(state): State<AppState>, body: Result<Json<QueryRequest>, JsonRejection>) -> ApiResult<Json<QueryResponse>> {
    let Json(req) = body?;
    let snap = state.snapshot();
    let backend = match &req.estimator {
        Some(name) => backend_from_name(name).map_err(|e| ApiError::bad_request("UnknownEstimator", e.to_string()))?,
        None => state.backend(),
    };
    let options = QueryOptions {
        rules: req.rules.unwrap_or(snap.session.active_rules),
        optimize: req.optimize,
        max_iterations: req.max_iterations.unwrap_or(snap.session.max_iterations),
        backend,
    };
    let sql = req.sql;
    let outcome = tokio::task::spawn_blocking(move || {
        run_query(&sql, &snap.catalog, &snap.profile, &options).map(|o| (sql, o.response))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?;
    let (sql, mut response) = outcome?;
    response.history_id = Some(state.record(&sql, &response));
    Ok(Json(response))
}

pub async fn get_session(State(state): State<AppState>) -> Json<SessionRules> {
    Json(state.session())
}

#[derive(Debug, Deserialize)]
pub struct SessionUpdate {
    #[serde(alias = "rules")]
    pub active_rules: Vec<String>,
    pub max_iterations: Option<usize>,
}

pub async fn put_session(
    State(state): State<AppState>,
    body: Result<Json<SessionUpdate>, JsonRejection>,
) -> ApiResult<Json<SessionRules>> {
    let Json(update) = body?;
    let max_iterations = update.max_iterations.unwrap_or(state.session().max_iterations);
    if max_iterations == 0 {
        return Err(ApiError::bad_request("InvalidRequest", "max_iterations must be positive"));
    }
    let session = SessionRules {
        active_rules: update.active_rules,
        max_iterations,
    };
    Ok(Json(state.set_session(session)?))
}

#[derive(Debug, Serialize)]
pub struct RuleInfo {
    pub name: String,
    pub origin: String,
    pub description: String,
}

pub async fn list_rules(State(state): State<AppState>) -> Json<Vec<RuleInfo>> {
    let profile = state.snapshot().profile;
    Json(
        profile
            .rules()
            .iter()
            .map(|r| RuleInfo {
                name: r.rule.name().to_string(),
                origin: r.origin.to_string(),
                description: r.rule.description().to_string(),
            })
            .collect(),
    )
}

pub async fn get_history(State(state): State<AppState>) -> Json<Vec<HistoryRecord>> {
    Json(state.history())
}

pub async fn delete_history(State(state): State<AppState>) -> StatusCode {
    state.clear_history();
    StatusCode::NO_CONTENT
}

#[derive(Debug, Serialize)]
pub struct ColumnInfo {
    pub name: String,
    #[serde(rename = "type")]
    pub data_type: String,
}

#[derive(Debug, Serialize)]
pub struct DatasetInfo {
    pub name: String,
    pub row_count: usize,
    pub columns: Vec<ColumnInfo>,
}

fn columns(schema: &Schema) -> Vec<ColumnInfo> {
    schema
        .columns()
        .iter()
        .map(|c| ColumnInfo {
            name: c.name.clone(),
            data_type: c.data_type.to_string(),
        })
        .collect()
}

pub async fn list_datasets(State(state): State<AppState>) -> Json<Vec<DatasetInfo>> {
    let catalog = state.snapshot().catalog;
    Json(
        catalog
            .list_tables()
            .into_iter()
            .map(|t| DatasetInfo {
                columns: columns(&t.schema),
                name: t.name,
                row_count: t.row_count,
            })
            .collect(),
    )
}

#[derive(Debug, Deserialize)]
pub struct DatasetParams {
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
struct DatasetUpload {
    name: String,
    csv: String,
}

/// Either a JSON body `{name, csv}` or the raw CSV text with `?name=`.
pub async fn upload_dataset(
    State(state): State<AppState>,
    Query(params): Query<DatasetParams>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<DatasetInfo>)> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let (name, csv) = if is_json {
        let up: DatasetUpload =
            serde_json::from_slice(&body).map_err(|e| ApiError::bad_request("InvalidRequest", e.to_string()))?;
        (up.name, up.csv)
    } else {
        let name = params
            .name
            .ok_or_else(|| ApiError::bad_request("InvalidRequest", "missing dataset name"))?;
        let csv = String::from_utf8(body.to_vec())
            .map_err(|_| ApiError::bad_request("InvalidRequest", "CSV body is not UTF-8"))?;
        (name, csv)
    };
    let rel = state.update_catalog(|catalog, profile| -> ApiResult<_> {
        let key = add_dataset(catalog, &name, &csv, profile)?;
        if let Some(ws) = state.workspace() {
            ws.save(&key, &csv)
                .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Io", e.to_string()))?;
        }
        Ok(catalog.get_table(&key)?)
    })?;
    Ok((
        StatusCode::CREATED,
        Json(DatasetInfo {
            name: rel.name().to_string(),
            row_count: rel.len(),
            columns: columns(rel.schema()),
        }),
    ))
}

pub async fn delete_dataset(State(state): State<AppState>, Path(name): Path<String>) -> ApiResult<StatusCode> {
    state.update_catalog(|catalog, _| -> ApiResult<_> {
        catalog.drop_table(&name)?;
        if let Some(ws) = state.workspace() {
            ws.remove(&name.to_ascii_lowercase())
                .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Io", e.to_string()))?;
        }
        Ok(())
    })?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Debug, Serialize)]
pub struct EntryPointInfo {
    pub name: &'static str,
    pub enabled: bool,
    pub registrations: usize,
}

#[derive(Debug, Serialize)]
pub struct SyntaxInfo {
    pub name: String,
    pub enabled: bool,
    pub entry_points: Vec<EntryPointInfo>,
}

impl From<SyntaxStatus> for SyntaxInfo {
    fn from(s: SyntaxStatus) -> Self {
        SyntaxInfo {
            name: s.syntax.to_string(),
            enabled: s.enabled,
            entry_points: s
                .entry_points
                .into_iter()
                .map(|ep| EntryPointInfo {
                    name: ep.entry_point.as_str(),
                    enabled: ep.enabled,
                    registrations: ep.registrations,
                })
                .collect(),
        }
    }
}

pub async fn list_syntaxes(State(state): State<AppState>) -> Json<Vec<SyntaxInfo>> {
    Json(state.registry().syntaxes().into_iter().map(SyntaxInfo::from).collect())
}

#[derive(Debug, Deserialize)]
pub struct Toggle {
    #[serde(alias = "flag")]
    pub enabled: bool,
}

pub async fn set_syntax_enabled(
    State(state): State<AppState>,
    Path(name): Path<String>,
    body: Result<Json<Toggle>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let Json(toggle) = body?;
    let status = state.update_registry(|reg| {
        reg.set_syntax_enabled(&name, toggle.enabled)?;
        reg.syntax_status(&name)
    })?;
    Ok(Json(SyntaxInfo::from(status)))
}

pub async fn set_entry_point_enabled(
    State(state): State<AppState>,
    Path((name, ep)): Path<(String, String)>,
    body: Result<Json<Toggle>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let Json(toggle) = body?;
    let entry_point: EntryPoint = ep.parse()?;
    let status = state.update_registry(|reg| {
        reg.set_entry_point_enabled(&name, entry_point, toggle.enabled)?;
        reg.syntax_status(&name)
    })?;
    Ok(Json(SyntaxInfo::from(status)))
}

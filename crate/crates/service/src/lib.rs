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

//! HTTP service over the qsim kernel.
//!
//! One global session: the active rule list, the registry toggles, the
//! loaded datasets and the query history are shared by every client. Each
//! query runs against a snapshot of the catalog, profile and rules taken
//! when it starts.

pub mod api;
pub mod error;
pub mod state;
pub mod workspace;

use std::net::SocketAddr;
use std::path::Path;

use axum::routing::{delete, get, post};
use axum::Router;
use tower_http::services::{ServeDir, ServeFile};

pub use error::ApiError;
pub use state::{AppState, HistoryRecord, SessionRules, Snapshot, HISTORY_CAPACITY};
pub use workspace::Workspace;

/// All API routes. When `ui_dir` exists its files are served for every
/// other path, with `index.html` as the fallback.
pub fn router(state: AppState, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/query", post(api::query))
        .route("/session/rules", get(api::get_session).put(api::put_session))
        .route("/rules", get(api::list_rules))
        .route("/history", get(api::get_history).delete(api::delete_history))
        .route("/datasets", get(api::list_datasets).post(api::upload_dataset))
        .route("/datasets/{name}", delete(api::delete_dataset))
        .route("/syntaxes", get(api::list_syntaxes))
        .route("/syntaxes/{name}/enabled", post(api::set_syntax_enabled))
        .route(
            "/syntaxes/{name}/entrypoints/{ep}/enabled",
            post(api::set_entry_point_enabled),
        )
        .with_state(state);
    match ui_dir.filter(|d| d.is_dir()) {
        Some(dir) => api.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html")))),
        None => api,
    }
}

/// Binds `addr`; port 0 picks a free port, see `local_addr` on the result.
pub async fn bind(addr: SocketAddr) -> std::io::Result<tokio::net::TcpListener> {
    tokio::net::TcpListener::bind(addr).await
}

/// Serves until the process is stopped.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app).await
}

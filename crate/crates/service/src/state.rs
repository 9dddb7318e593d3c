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

use std::collections::VecDeque;
use std::sync::{Arc, Mutex, PoisonError, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use qsim_core::cost::EstimatorBackend;
use qsim_core::optimizer::{RuleList, DEFAULT_MAX_ITERATIONS};
use qsim_core::{Catalog, KernelProfile, QueryResponse, Registry};
use serde::Serialize;

use crate::workspace::Workspace;

pub const HISTORY_CAPACITY: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryRecord {
    pub id: u64,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
    pub sql: String,
    pub rules: Vec<String>,
    pub cost_initial: f64,
    pub cost_optimized: f64,
    pub cost_backend: String,
    pub elapsed_ms: f64,
    pub row_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionRules {
    pub active_rules: Vec<String>,
    pub max_iterations: usize,
}

impl Default for SessionRules {
    fn default() -> Self {
        SessionRules {
            active_rules: Vec::new(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Default)]
struct History {
    next_id: u64,
    records: VecDeque<HistoryRecord>,
}

/// What a query runs against, fixed when it starts.
#[derive(Clone)]
pub struct Snapshot {
    pub catalog: Arc<Catalog>,
    pub profile: Arc<KernelProfile>,
    pub session: SessionRules,
}

struct Kernel {
    registry: Registry,
    profile: Arc<KernelProfile>,
    catalog: Arc<Catalog>,
    session: SessionRules,
}

#[derive(Clone)]
pub struct AppState {
    kernel: Arc<RwLock<Kernel>>,
    history: Arc<Mutex<History>>,
    backend: Option<Arc<dyn EstimatorBackend>>,
    workspace: Option<Workspace>,
}

impl AppState {
    /// Fails if the registry's enabled syntaxes conflict.
    pub fn new(registry: Registry, catalog: Catalog) -> Result<Self, qsim_core::registry::RegistryError> {
        let profile = Arc::new(registry.build_profile()?);
        Ok(AppState {
            kernel: Arc::new(RwLock::new(Kernel {
                registry,
                profile,
                catalog: Arc::new(catalog),
                session: SessionRules::default(),
            })),
            history: Arc::new(Mutex::new(History::default())),
            backend: None,
            workspace: None,
        })
    }

    /// Default external estimator; `None` keeps the built-in one.
    pub fn with_backend(mut self, backend: Option<Arc<dyn EstimatorBackend>>) -> Self {
        self.backend = backend;
        self
    }

    /// Mirror dataset uploads and deletions into `workspace`.
    pub fn with_workspace(mut self, workspace: Workspace) -> Self {
        self.workspace = Some(workspace);
        self
    }

    pub fn backend(&self) -> Option<Arc<dyn EstimatorBackend>> {
        self.backend.clone()
    }

    pub fn workspace(&self) -> Option<&Workspace> {
        self.workspace.as_ref()
    }

    pub fn snapshot(&self) -> Snapshot {
        let k = self.kernel.read().unwrap_or_else(PoisonError::into_inner);
        Snapshot {
            catalog: k.catalog.clone(),
            profile: k.profile.clone(),
            session: k.session.clone(),
        }
    }

    pub fn session(&self) -> SessionRules {
        self.snapshot().session
    }

    /// Replaces the session rules after resolving them against the current
    /// profile.
    pub fn set_session(&self, session: SessionRules) -> Result<SessionRules, qsim_core::optimizer::OptimizeError> {
        let mut k = self.kernel.write().unwrap_or_else(PoisonError::into_inner);
        RuleList::resolve(&session.active_rules, &k.profile)?;
        k.session = session;
        Ok(k.session.clone())
    }

    /// Applies `change` to the catalog under the write lock; queries that
    /// already started keep their snapshot.
    pub fn update_catalog<T, E>(&self, change: impl FnOnce(&mut Catalog, &KernelProfile) -> Result<T, E>) -> Result<T, E> {
        let mut k = self.kernel.write().unwrap_or_else(PoisonError::into_inner);
        let mut next = (*k.catalog).clone();
        let out = change(&mut next, &k.profile)?;
        k.catalog = Arc::new(next);
        Ok(out)
    }

    /// Applies `change` to the registry and rebuilds the profile. On error
    /// (including a conflict in the rebuilt profile) nothing changes. Session
    /// rules the new profile no longer offers are dropped.
    pub fn update_registry<T>(
        &self,
        change: impl FnOnce(&mut Registry) -> Result<T, qsim_core::registry::RegistryError>,
    ) -> Result<T, qsim_core::registry::RegistryError> {
        let mut k = self.kernel.write().unwrap_or_else(PoisonError::into_inner);
        let mut registry = k.registry.clone();
        let out = change(&mut registry)?;
        let profile = registry.build_profile()?;
        k.session.active_rules.retain(|name| profile.rule(name).is_some());
        k.registry = registry;
        k.profile = Arc::new(profile);
        Ok(out)
    }

    pub fn registry(&self) -> Registry {
        self.kernel.read().unwrap_or_else(PoisonError::into_inner).registry.clone()
    }

    /// Appends a record for a successful query and returns its id.
    pub fn record(&self, sql: &str, response: &QueryResponse) -> u64 {
        let mut h = self.history.lock().unwrap_or_else(PoisonError::into_inner);
        h.next_id += 1;
        let id = h.next_id;
        if h.records.len() == HISTORY_CAPACITY {
            h.records.pop_front();
        }
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or_default();
        h.records.push_back(HistoryRecord {
            id,
            timestamp,
            sql: sql.to_string(),
            rules: response.rules.clone(),
            cost_initial: response.cost_initial,
            cost_optimized: response.cost_optimized,
            cost_backend: response.cost_backend.clone(),
            elapsed_ms: response.elapsed_ms,
            row_count: response.rows.len(),
            warning: response.warning.clone(),
        });
        id
    }

    pub fn history(&self) -> Vec<HistoryRecord> {
        let h = self.history.lock().unwrap_or_else(PoisonError::into_inner);
        h.records.iter().cloned().collect()
    }

    /// Ids keep increasing across a clear.
    pub fn clear_history(&self) {
        self.history.lock().unwrap_or_else(PoisonError::into_inner).records.clear();
    }
}

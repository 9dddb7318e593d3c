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


use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{translate_to_sql, CostError, SqlTranslation, SqliteBackend};
use crate::catalog::Catalog;
use crate::plan::LogicalPlan;
use crate::registry::KernelProfile;

/// Selects the default estimator: `builtin`, `stub` or `sqlite`.
pub const BACKEND_ENV: &str = "QSIM_ESTIMATOR_BACKEND";
/// Overrides the path of the stub estimator program.
pub const STUB_ENV: &str = "QSIM_STUB_ESTIMATOR";
const STUB_PROGRAM: &str = "qsim-stub-estimator";

pub type EstimateRequest = SqlTranslation;

/// An external cost estimator. It only estimates; it never runs the query
/// for results.
pub trait EstimatorBackend: Send + Sync {
    fn name(&self) -> &str;
    fn estimate(&self, request: &EstimateRequest) -> Result<f64, CostError>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExternalEstimate {
    pub cost: f64,
    pub backend: String,
}

#[derive(Deserialize)]
struct CostReply {
    cost: f64,
}

/// Runs a program that reads `{ddl, inserts, query}` as JSON on stdin and
/// writes `{"cost": <number>}` on stdout.
#[derive(Debug, Clone)]
pub struct SubprocessBackend {
    name: String,
    program: PathBuf,
    args: Vec<String>,
}

impl SubprocessBackend {
    pub fn new(name: impl Into<String>, program: impl Into<PathBuf>) -> Self {
        SubprocessBackend {
            name: name.into(),
            program: program.into(),
            args: Vec::new(),
        }
    }

    pub fn with_args(mut self, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.args = args.into_iter().map(Into::into).collect();
        self
    }

    /// The bundled stub: `$QSIM_STUB_ESTIMATOR`, else a `qsim-stub-estimator`
    /// next to the running executable, else one found on `PATH`.
    pub fn stub() -> Self {
        let program = std::env::var_os(STUB_ENV)
            .map(PathBuf::from)
            .or_else(sibling_stub)
            .unwrap_or_else(|| PathBuf::from(STUB_PROGRAM));
        SubprocessBackend::new("stub", program)
    }

    pub fn program(&self) -> &Path {
        &self.program
    }
}

fn sibling_stub() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let file = format!("{STUB_PROGRAM}{}", std::env::consts::EXE_SUFFIX);
    // Test binaries live one level below the built executables.
    exe.ancestors()
        .skip(1)
        .take(2)
        .map(|dir| dir.join(&file))
        .find(|p| p.is_file())
}

impl EstimatorBackend for SubprocessBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn estimate(&self, request: &EstimateRequest) -> Result<f64, CostError> {
        let unavailable = |why: String| CostError::BackendUnavailable(format!("{}: {why}", self.program.display()));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| unavailable(e.to_string()))?;
        let payload = serde_json::to_vec(request).expect("request serializes");
        if let Some(mut stdin) = child.stdin.take() {
            // A backend that exits without reading is judged by its status.
            let _ = stdin.write_all(&payload);
        }
        let output = child.wait_with_output().map_err(|e| unavailable(e.to_string()))?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(unavailable(format!("{} {}", output.status, stderr.trim())));
        }
        let raw = String::from_utf8_lossy(&output.stdout).into_owned();
        match serde_json::from_str::<CostReply>(&raw) {
            Ok(reply) if reply.cost.is_finite() && reply.cost >= 0.0 => Ok(reply.cost),
            _ => Err(CostError::BackendParseError(raw.trim().to_string())),
        }
    }
}

/// Backend for a selector name; `builtin` means no external backend.
pub fn backend_from_name(name: &str) -> Result<Option<Arc<dyn EstimatorBackend>>, CostError> {
    match name.to_ascii_lowercase().as_str() {
        "builtin" | "" => Ok(None),
        "stub" => Ok(Some(Arc::new(SubprocessBackend::stub()))),
        "sqlite" => Ok(Some(Arc::new(SqliteBackend))),
        other => Err(CostError::BackendUnavailable(format!("unknown estimator backend {other}"))),
    }
}

/// Translates `plan` and asks `backend` for its cost.
pub fn external_estimate(
    plan: &LogicalPlan,
    catalog: &Catalog,
    profile: &KernelProfile,
    backend: &dyn EstimatorBackend,
) -> Result<ExternalEstimate, CostError> {
    let request = translate_to_sql(plan, catalog, profile)?;
    Ok(ExternalEstimate {
        cost: backend.estimate(&request)?,
        backend: backend.name().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request() -> EstimateRequest {
        SqlTranslation {
            ddl: String::new(),
            inserts: String::new(),
            query: "SELECT 1".into(),
        }
    }

    #[test]
    fn missing_program_is_unavailable() {
        let backend = SubprocessBackend::new("gone", "/nonexistent/estimator");
        assert!(matches!(backend.estimate(&request()), Err(CostError::BackendUnavailable(_))));
    }

    #[cfg(unix)]
    #[test]
    fn shell_backends() {
        let ok = SubprocessBackend::new("sh", "/bin/sh").with_args(["-c", "cat >/dev/null; echo '{\"cost\": 7.5}'"]);
        assert_eq!(ok.estimate(&request()), Ok(7.5));
        let garbage = SubprocessBackend::new("sh", "/bin/sh").with_args(["-c", "cat >/dev/null; echo nope"]);
        assert_eq!(garbage.estimate(&request()), Err(CostError::BackendParseError("nope".into())));
        let failing = SubprocessBackend::new("sh", "/bin/sh").with_args(["-c", "exit 3"]);
        assert!(matches!(failing.estimate(&request()), Err(CostError::BackendUnavailable(_))));
    }

    #[test]
    fn selector_names() {
        assert!(backend_from_name("builtin").unwrap().is_none());
        assert_eq!(backend_from_name("sqlite").unwrap().unwrap().name(), "sqlite");
        assert_eq!(backend_from_name("stub").unwrap().unwrap().name(), "stub");
        assert!(backend_from_name("oracle").is_err());
    }
}

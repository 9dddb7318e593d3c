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

//! The full query path shared by the CLI and the HTTP service:
//! parse, analyze, estimate, optimize, compile, execute.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::Catalog;
use crate::cost::{self, EstimatorBackend};
use crate::executor::{self, ExecStats, ResultSet};
use crate::optimizer::{self, OptimizeTrace, RuleList, TraceStep, DEFAULT_MAX_ITERATIONS};
use crate::parser::{self, Position};
use crate::plan::{self, LogicalPlan, PlanDoc};
use crate::registry::KernelProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Analyze,
    Optimize,
    Estimate,
    Compile,
    Execute,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Parse => "parse",
            Stage::Analyze => "analyze",
            Stage::Optimize => "optimize",
            Stage::Estimate => "estimate",
            Stage::Compile => "compile",
            Stage::Execute => "execute",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{stage} error: {message}")]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Position>,
}

impl StageError {
    fn new(stage: Stage, err: impl fmt::Display, position: Option<Position>) -> Self {
        StageError {
            stage,
            message: err.to_string(),
            position,
        }
    }
}

#[derive(Clone)]
pub struct QueryOptions {
    /// Rule names, in application order.
    pub rules: Vec<String>,
    /// `false` skips optimization entirely.
    pub optimize: bool,
    pub max_iterations: usize,
    /// External estimator for the two plan costs; `None` uses the built-in one.
    pub backend: Option<Arc<dyn EstimatorBackend>>,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            rules: Vec::new(),
            optimize: true,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            backend: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnInfo {
    pub name: String,
    #[serde(rename = "type")]
    pub data_type: String,
}

/// Body of a successful query, as served over HTTP and printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryResponse {
    pub columns: Vec<ColumnInfo>,
    pub rows: Vec<Vec<serde_json::Value>>,
    pub initial_plan: PlanDoc,
    pub optimized_plan: PlanDoc,
    pub cost_initial: f64,
    pub cost_optimized: f64,
    pub cost_backend: String,
    pub elapsed_ms: f64,
    pub rules: Vec<String>,
    pub applied_rules: Vec<TraceStep>,
    pub stats: ExecStats,
    pub history_id: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub struct QueryOutcome {
    pub response: QueryResponse,
    pub initial: LogicalPlan,
    pub optimized: LogicalPlan,
    pub trace: OptimizeTrace,
    pub result: ResultSet,
}

pub fn run_query(
    sql: &str,
    catalog: &Catalog,
    profile: &KernelProfile,
    options: &QueryOptions,
) -> Result<QueryOutcome, StageError> {
    let ast = parser::parse(sql, profile).map_err(|e| StageError::new(Stage::Parse, &e, Some(e.position())))?;
    let initial =
        plan::build_logical(&ast, catalog, profile).map_err(|e| StageError::new(Stage::Analyze, &e, e.position()))?;
    let estimate_err = |e: cost::CostError| StageError::new(Stage::Estimate, e, None);
    let initial_cost = cost::estimate(&initial, catalog).map_err(estimate_err)?;

    let (optimized, trace) = if options.optimize {
        let rules = RuleList::resolve(&options.rules, profile).map_err(|e| StageError::new(Stage::Optimize, e, None))?;
        optimizer::optimize(initial.clone(), &rules, options.max_iterations)
            .map_err(|e| StageError::new(Stage::Optimize, e, None))?
    } else {
        (initial.clone(), OptimizeTrace::default())
    };
    let optimized_cost = cost::estimate(&optimized, catalog).map_err(estimate_err)?;

    let mut cost_initial = initial_cost.total_cost;
    let mut cost_optimized = optimized_cost.total_cost;
    let mut cost_backend = "builtin".to_string();
    let mut warning = None;
    if let Some(backend) = &options.backend {
        let external = cost::external_estimate(&initial, catalog, profile, backend.as_ref()).and_then(|a| {
            cost::external_estimate(&optimized, catalog, profile, backend.as_ref()).map(|b| (a, b))
        });
        match external {
            Ok((a, b)) => {
                cost_initial = a.cost;
                cost_optimized = b.cost;
                cost_backend = a.backend;
            }
            Err(e) => {
                warning = Some(format!(
                    "estimator backend {} failed, using built-in costs: {e}",
                    backend.name()
                ))
            }
        }
    }

    let physical =
        executor::compile(&optimized, catalog, profile).map_err(|e| StageError::new(Stage::Compile, e, None))?;
    let result = executor::execute(physical).map_err(|e| StageError::new(Stage::Execute, e, None))?;

    let response = QueryResponse {
        columns: result
            .schema
            .columns()
            .iter()
            .map(|c| ColumnInfo {
                name: c.qualified_name(),
                data_type: c.data_type.to_string(),
            })
            .collect(),
        rows: result
            .rows
            .iter()
            .map(|row| row.iter().map(|v| v.to_json()).collect())
            .collect(),
        initial_plan: plan::serialize_plan(&initial, Some(&initial_cost.root)),
        optimized_plan: plan::serialize_plan(&optimized, Some(&optimized_cost.root)),
        cost_initial,
        cost_optimized,
        cost_backend,
        elapsed_ms: result.elapsed.as_secs_f64() * 1000.0,
        rules: if options.optimize { options.rules.clone() } else { Vec::new() },
        applied_rules: trace.steps.clone(),
        stats: result.stats.clone(),
        history_id: None,
        warning,
    };
    Ok(QueryOutcome {
        response,
        initial,
        optimized,
        trace,
        result,
    })
}

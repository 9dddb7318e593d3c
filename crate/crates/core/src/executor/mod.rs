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

//! Physical operators, the logical-to-physical compiler and the executor.

mod ops;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use ops::{FilterExec, HashJoinExec, NestedLoopCrossExec, ProjectExec, TableScanExec};

use crate::catalog::Catalog;
use crate::cost;
use crate::plan::LogicalPlan;
use crate::registry::KernelProfile;
use crate::schema::Schema;
use crate::types::Row;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("no physical translator for {0}")]
    NoTranslator(String),
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("runtime type error in operator {path}: {message}")]
    RuntimeTypeError { path: String, message: String },
    #[error("invalid physical plan: {0}")]
    Invalid(String),
}

/// Pull-based physical operator. `next` yields rows until `None`.
pub trait ExecOperator: Send {
    fn name(&self) -> &str;
    fn schema(&self) -> &Schema;
    fn open(&mut self) -> Result<(), ExecError>;
    fn next(&mut self) -> Result<Option<Row>, ExecError>;
    fn close(&mut self);
    fn children(&self) -> Vec<&dyn ExecOperator>;
    fn rows_emitted(&self) -> u64;
    /// Operator-specific counters such as `distance_evals`.
    fn counters(&self) -> BTreeMap<String, u64> {
        BTreeMap::new()
    }
}

pub type BoxedExec = Box<dyn ExecOperator>;

/// What a translator gets to know about where it is building.
pub struct TranslateContext<'a> {
    pub catalog: &'a Catalog,
    pub profile: &'a KernelProfile,
    /// Position of the node, as in [`format_path`].
    pub path: String,
}

/// `0` for the root followed by child indices: `0.1.0`.
pub fn format_path(path: &[usize]) -> String {
    std::iter::once("0".to_string())
        .chain(path.iter().map(usize::to_string))
        .collect::<Vec<_>>()
        .join(".")
}

/// Builds the physical tree. A translator registered for a node kind takes
/// precedence over the built-in mapping.
pub fn compile(plan: &LogicalPlan, catalog: &Catalog, profile: &KernelProfile) -> Result<BoxedExec, ExecError> {
    compile_at(plan, catalog, profile, &mut Vec::new())
}

fn compile_at(
    plan: &LogicalPlan,
    catalog: &Catalog,
    profile: &KernelProfile,
    path: &mut Vec<usize>,
) -> Result<BoxedExec, ExecError> {
    let mut children = Vec::new();
    for (i, child) in plan.children().into_iter().enumerate() {
        path.push(i);
        children.push(compile_at(child, catalog, profile, path)?);
        path.pop();
    }
    let ctx = TranslateContext {
        catalog,
        profile,
        path: format_path(path),
    };
    if let Some(translator) = profile.physical_translator(plan.kind()) {
        return translator(plan, children, &ctx);
    }
    let mut children = children.into_iter();
    let mut child = || children.next().ok_or_else(|| ExecError::Invalid(format!("{} is missing an input", plan.kind())));
    Ok(match plan {
        LogicalPlan::Scan { table, schema, .. } => {
            let relation = catalog
                .get_table(table)
                .map_err(|_| ExecError::UnknownTable(table.clone()))?;
            Box::new(TableScanExec::new(relation, schema.clone()))
        }
        LogicalPlan::Filter { predicate, .. } => Box::new(FilterExec::new(predicate.clone(), child()?, ctx.path)),
        LogicalPlan::Project { items, .. } => Box::new(ProjectExec::new(items.clone(), plan.schema(), child()?, ctx.path)),
        LogicalPlan::CrossProduct { .. } => {
            let left = child()?;
            Box::new(NestedLoopCrossExec::new(left, child()?))
        }
        LogicalPlan::EquiJoin { on, left, right } => {
            let rows = |p: &LogicalPlan| {
                cost::estimate(p, catalog)
                    .map(|a| a.root.rows)
                    .map_err(|e| ExecError::Invalid(e.to_string()))
            };
            let build_left = rows(left)? <= rows(right)?;
            let l = child()?;
            Box::new(HashJoinExec::new(on.clone(), l, child()?, build_left))
        }
        LogicalPlan::Extension { node, .. } => return Err(ExecError::NoTranslator(node.kind().to_string())),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorStats {
    pub path: String,
    pub operator: String,
    pub rows_emitted: u64,
    pub counters: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExecStats {
    /// Pre-order over the physical tree.
    pub operators: Vec<OperatorStats>,
    /// Every operator counter summed by name.
    pub counters: BTreeMap<String, u64>,
}

impl ExecStats {
    pub fn counter(&self, name: &str) -> u64 {
        self.counters.get(name).copied().unwrap_or(0)
    }

    fn collect(op: &dyn ExecOperator, path: &mut Vec<usize>, out: &mut ExecStats) {
        let counters = op.counters();
        for (k, v) in &counters {
            *out.counters.entry(k.clone()).or_default() += v;
        }
        out.operators.push(OperatorStats {
            path: format_path(path),
            operator: op.name().to_string(),
            rows_emitted: op.rows_emitted(),
            counters,
        });
        for (i, child) in op.children().into_iter().enumerate() {
            path.push(i);
            Self::collect(child, path, out);
            path.pop();
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResultSet {
    pub schema: Schema,
    pub rows: Vec<Row>,
    /// Wall-clock time of open, drain and close.
    pub elapsed: Duration,
    pub stats: ExecStats,
}

/// Drains `root` completely.
pub fn execute(mut root: BoxedExec) -> Result<ResultSet, ExecError> {
    let start = Instant::now();
    root.open()?;
    let mut rows = Vec::new();
    let drained = loop {
        match root.next() {
            Ok(Some(row)) => rows.push(row),
            Ok(None) => break Ok(()),
            Err(e) => break Err(e),
        }
    };
    root.close();
    drained?;
    let elapsed = start.elapsed();
    let mut stats = ExecStats::default();
    ExecStats::collect(root.as_ref(), &mut Vec::new(), &mut stats);
    Ok(ResultSet {
        schema: root.schema().clone(),
        rows,
        elapsed,
        stats,
    })
}

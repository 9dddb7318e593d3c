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

//! Built-in cost estimator, SQL translation for external estimators, and
//! the estimator backends.

mod backend;
mod sql;
mod sqlite;

pub use backend::{
    backend_from_name, external_estimate, EstimateRequest, EstimatorBackend, ExternalEstimate, SubprocessBackend,
    BACKEND_ENV, STUB_ENV,
};
pub use sql::{translate_to_sql, SqlTranslation};
pub use sqlite::SqliteBackend;

use crate::catalog::Catalog;
use crate::plan::{BoundExpr, CmpOp, LogicalOp, LogicalPlan};

pub const SEL_EQ_LITERAL: f64 = 0.1;
pub const SEL_EQ_COLUMNS: f64 = 0.05;
pub const SEL_RANGE: f64 = 0.3;
pub const SEL_NOT_EQ: f64 = 0.9;
/// Bare boolean expressions used as predicates.
pub const SEL_OTHER: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CostError {
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("cannot translate {0} to SQL")]
    UntranslatableNode(String),
    #[error("estimator backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("unparseable estimator output: {0}")]
    BackendParseError(String),
}

/// Estimate for a single node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEstimate {
    pub rows: f64,
    pub cost: f64,
}

/// Per-node estimates mirroring the plan's shape.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeCost {
    pub rows: f64,
    pub cost: f64,
    pub children: Vec<NodeCost>,
}

impl NodeCost {
    pub fn total(&self) -> f64 {
        self.cost + self.children.iter().map(NodeCost::total).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostAnnotation {
    pub root: NodeCost,
    pub total_cost: f64,
}

/// Rounds an estimated row count up, treating values within floating-point
/// noise of an integer as that integer (`0.3 * 100` is 30, not 31).
pub fn ceil_rows(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 * r.abs().max(1.0) {
        r.max(0.0)
    } else {
        x.ceil().max(0.0)
    }
}

/// Fraction of input rows `predicate` is expected to pass.
pub fn selectivity(predicate: &BoundExpr) -> f64 {
    match predicate {
        BoundExpr::Logical {
            op: LogicalOp::And,
            left,
            right,
        } => selectivity(left) * selectivity(right),
        BoundExpr::Logical {
            op: LogicalOp::Or,
            left,
            right,
        } => (selectivity(left) + selectivity(right)).min(1.0),
        BoundExpr::Compare { op, left, right } => {
            if let Some(infix) = predicate.first_infix() {
                return infix.selectivity();
            }
            match op {
                CmpOp::Eq if is_column(left) && is_column(right) => SEL_EQ_COLUMNS,
                CmpOp::Eq => SEL_EQ_LITERAL,
                CmpOp::NotEq => SEL_NOT_EQ,
                _ => SEL_RANGE,
            }
        }
        BoundExpr::Infix { op, .. } => op.selectivity(),
        _ => SEL_OTHER,
    }
}

fn is_column(e: &BoundExpr) -> bool {
    matches!(e, BoundExpr::Column { .. })
}

/// Per-row evaluation cost of `expr`.
pub fn predicate_cost(expr: &BoundExpr) -> f64 {
    match expr {
        BoundExpr::Column { .. } | BoundExpr::Literal(_) => 0.0,
        BoundExpr::Compare { left, right, .. } => (predicate_cost(left) + predicate_cost(right)).max(1.0),
        BoundExpr::Logical { left, right, .. } => predicate_cost(left) + predicate_cost(right),
        BoundExpr::Infix { op, left, right, .. } => {
            op.predicate_cost(&left.data_type(), &right.data_type()) + predicate_cost(left) + predicate_cost(right)
        }
    }
}

/// Annotates every node bottom-up with estimated rows and cost.
pub fn estimate(plan: &LogicalPlan, catalog: &Catalog) -> Result<CostAnnotation, CostError> {
    let root = estimate_node(plan, catalog)?;
    Ok(CostAnnotation {
        total_cost: root.total(),
        root,
    })
}

fn estimate_node(plan: &LogicalPlan, catalog: &Catalog) -> Result<NodeCost, CostError> {
    let children = plan
        .children()
        .into_iter()
        .map(|c| estimate_node(c, catalog))
        .collect::<Result<Vec<_>, _>>()?;
    let input: Vec<f64> = children.iter().map(|c| c.rows).collect();
    let NodeEstimate { rows, cost } = match plan {
        LogicalPlan::Scan { table, .. } => {
            let n = catalog
                .get_table(table)
                .map_err(|_| CostError::UnknownTable(table.clone()))?
                .len() as f64;
            NodeEstimate { rows: n, cost: n }
        }
        LogicalPlan::Filter { predicate, .. } => NodeEstimate {
            rows: ceil_rows(selectivity(predicate) * input[0]),
            cost: input[0] * predicate_cost(predicate).max(1.0),
        },
        LogicalPlan::Project { .. } => NodeEstimate {
            rows: input[0],
            cost: input[0],
        },
        LogicalPlan::CrossProduct { .. } => {
            let n = input[0] * input[1];
            NodeEstimate { rows: n, cost: n }
        }
        LogicalPlan::EquiJoin { on, .. } => {
            let out = ceil_rows(SEL_EQ_COLUMNS.powi(on.len() as i32) * input[0] * input[1]);
            NodeEstimate {
                rows: out,
                cost: input[0] + input[1] + out,
            }
        }
        LogicalPlan::Extension { node, .. } => node.estimate(&input),
    };
    Ok(NodeCost { rows, cost, children })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_rows_absorbs_float_noise() {
        assert_eq!(ceil_rows(0.3 * 100.0), 30.0);
        assert_eq!(ceil_rows(0.05 * 0.3 * 100.0 * 50.0), 75.0);
        assert_eq!(ceil_rows(2.5), 3.0);
        assert_eq!(ceil_rows(0.0), 0.0);
        assert_eq!(ceil_rows(0.001), 1.0);
    }
}

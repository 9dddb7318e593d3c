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


use std::any::Any;
use std::collections::BTreeMap;

use super::{distance, syntax_id, vector_type, Vector, DISTANCE_EVALS, NODE_KIND, OPERATOR, SELECTIVITY};
use crate::cost::{ceil_rows, NodeEstimate};
use crate::executor::{BoxedExec, ExecError, ExecOperator, TranslateContext};
use crate::plan::{BoundExpr, CmpOp, ExtNode, ExtOperator, LogicalPlan};
use crate::registry::SyntaxId;
use crate::schema::Schema;
use crate::types::{Row, Value};

/// Keeps rows whose vector column lies within `threshold` of `query`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityFilter {
    syntax: SyntaxId,
    pub column: usize,
    pub column_name: String,
    pub query: Vector,
    pub threshold: f64,
    /// `<` or `<=`.
    pub comparator: CmpOp,
}

impl SimilarityFilter {
    pub fn new(column: usize, column_name: impl Into<String>, query: Vector, threshold: f64, comparator: CmpOp) -> Self {
        SimilarityFilter {
            syntax: syntax_id(),
            column,
            column_name: column_name.into(),
            query,
            threshold,
            comparator,
        }
    }

    /// Recognizes `col TO <vector literal> < t` and `<= t` with `t >= 0`.
    pub fn from_predicate(predicate: &BoundExpr) -> Option<SimilarityFilter> {
        let BoundExpr::Compare { op, left, right } = predicate else {
            return None;
        };
        if !matches!(op, CmpOp::Lt | CmpOp::LtEq) {
            return None;
        }
        let threshold = match right.as_ref() {
            BoundExpr::Literal(v) => v.as_f64()?,
            _ => return None,
        };
        let BoundExpr::Infix {
            op: infix,
            left: column,
            right: query,
            ..
        } = left.as_ref()
        else {
            return None;
        };
        if infix.name() != OPERATOR || *infix.syntax() != syntax_id() || threshold < 0.0 {
            return None;
        }
        let (BoundExpr::Column { index, name, .. }, BoundExpr::Literal(query)) = (column.as_ref(), query.as_ref())
        else {
            return None;
        };
        Some(SimilarityFilter::new(*index, name.clone(), Vector::from_value(query)?.clone(), threshold, *op))
    }

    /// The same filter reading column `column` of a different input.
    pub fn rebased(&self, column: usize) -> SimilarityFilter {
        SimilarityFilter {
            column,
            ..self.clone()
        }
    }

    pub fn over(self, input: LogicalPlan) -> LogicalPlan {
        LogicalPlan::extension(ExtNode::new(self), vec![input])
    }

    pub fn dim(&self) -> usize {
        self.query.dim()
    }

    pub fn accepts_distance(&self, d: f64) -> bool {
        match self.comparator {
            CmpOp::LtEq => d <= self.threshold,
            _ => d < self.threshold,
        }
    }

    pub fn predicate_text(&self) -> String {
        format!(
            "{} {OPERATOR} {} {} {}",
            self.column_name,
            self.query,
            self.comparator.symbol(),
            Value::Float(self.threshold)
        )
    }
}

impl ExtOperator for SimilarityFilter {
    fn syntax(&self) -> &SyntaxId {
        &self.syntax
    }

    fn kind(&self) -> &str {
        NODE_KIND
    }

    fn label(&self) -> String {
        format!("{NODE_KIND} {}", self.predicate_text())
    }

    fn attrs(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("column".to_string(), self.column_name.clone()),
            ("query".to_string(), self.query.to_string()),
            ("comparator".to_string(), self.comparator.symbol().to_string()),
            ("threshold".to_string(), Value::Float(self.threshold).to_string()),
            ("predicate".to_string(), self.predicate_text()),
        ])
    }

    fn output_schema(&self, inputs: &[Schema]) -> Schema {
        inputs.first().cloned().unwrap_or_default()
    }

    fn validate(&self, inputs: &[Schema]) -> Result<(), String> {
        let [input] = inputs else {
            return Err(format!("expects one input, has {}", inputs.len()));
        };
        let column = input
            .column(self.column)
            .ok_or_else(|| format!("column {} outside arity {}", self.column, input.len()))?;
        if !vector_type(None).accepts(&column.data_type)
            || !column.data_type.accepts(&vector_type(Some(self.dim() as u32)))
        {
            return Err(format!(
                "column {} has type {}, expected vector({})",
                column.qualified_name(),
                column.data_type,
                self.dim()
            ));
        }
        if self.threshold.is_nan() || self.threshold < 0.0 {
            return Err(format!("negative threshold {}", self.threshold));
        }
        Ok(())
    }

    fn estimate(&self, input_rows: &[f64]) -> NodeEstimate {
        let rows = input_rows.first().copied().unwrap_or(0.0);
        NodeEstimate {
            rows: ceil_rows(SELECTIVITY * rows),
            cost: rows * self.dim() as f64,
        }
    }

    fn same_as(&self, other: &dyn ExtOperator) -> bool {
        other.as_any().downcast_ref::<SimilarityFilter>() == Some(self)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub struct SimFilterExec {
    filter: SimilarityFilter,
    input: BoxedExec,
    path: String,
    emitted: u64,
    distance_evals: u64,
}

impl SimFilterExec {
    pub fn new(filter: SimilarityFilter, input: BoxedExec, path: String) -> Self {
        SimFilterExec {
            filter,
            input,
            path,
            emitted: 0,
            distance_evals: 0,
        }
    }
}

impl ExecOperator for SimFilterExec {
    fn name(&self) -> &str {
        "SimFilterExec"
    }

    fn schema(&self) -> &Schema {
        self.input.schema()
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.input.open()
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        while let Some(row) = self.input.next()? {
            let error = |message: String| ExecError::RuntimeTypeError {
                path: self.path.clone(),
                message,
            };
            let value = row
                .get(self.filter.column)
                .ok_or_else(|| error(format!("column {} outside row", self.filter.column)))?;
            let vector =
                Vector::from_value(value).ok_or_else(|| error(format!("expected vector, found {}", value.data_type())))?;
            self.distance_evals += 1;
            let d = distance(vector, &self.filter.query).map_err(|e| error(e.to_string()))?;
            if self.filter.accepts_distance(d) {
                self.emitted += 1;
                return Ok(Some(row));
            }
        }
        Ok(None)
    }

    fn close(&mut self) {
        self.input.close();
    }

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![self.input.as_ref()]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }

    fn counters(&self) -> BTreeMap<String, u64> {
        BTreeMap::from([(DISTANCE_EVALS.to_string(), self.distance_evals)])
    }
}

pub(super) fn translate(
    plan: &LogicalPlan,
    mut children: Vec<BoxedExec>,
    ctx: &TranslateContext,
) -> Result<BoxedExec, ExecError> {
    let filter = match plan {
        LogicalPlan::Extension { node, .. } => node.downcast::<SimilarityFilter>(),
        _ => None,
    }
    .ok_or_else(|| ExecError::Invalid(format!("{NODE_KIND} translator given {}", plan.kind())))?;
    let input = children
        .pop()
        .filter(|_| children.is_empty())
        .ok_or_else(|| ExecError::Invalid(format!("{NODE_KIND} expects one input")))?;
    Ok(Box::new(SimFilterExec::new(filter.clone(), input, ctx.path.clone())))
}

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


use super::{BoundExpr, LogicalPlan, PlanError};
use crate::schema::Schema;
use crate::types::DataType;

/// Checks the schema-consistency invariants of every node.
pub fn validate(plan: &LogicalPlan) -> Result<(), PlanError> {
    for child in plan.children() {
        validate(child)?;
    }
    let invalid = |msg: String| Err(PlanError::Invalid(format!("{}: {msg}", plan.kind())));
    match plan {
        LogicalPlan::Scan { schema, .. } => {
            if let Some(dup) = schema.duplicate_name() {
                return invalid(format!("duplicate column {dup}"));
            }
        }
        LogicalPlan::Filter { predicate, input } => {
            check_expr(predicate, &input.schema()).or_else(invalid)?;
            if predicate.data_type() != DataType::Bool {
                return invalid(format!("predicate {predicate} is not bool"));
            }
        }
        LogicalPlan::Project { items, input } => {
            let schema = input.schema();
            for item in items {
                check_expr(&item.expr, &schema).or_else(invalid)?;
            }
        }
        LogicalPlan::CrossProduct { left, right } => {
            if let Some(dup) = left.schema().concat(&right.schema()).duplicate_name() {
                return invalid(format!("duplicate column {dup}"));
            }
        }
        LogicalPlan::EquiJoin { on, left, right } => {
            let (ls, rs) = (left.schema(), right.schema());
            if on.is_empty() {
                return invalid("no join pairs".to_string());
            }
            for &(l, r) in on {
                match (ls.column(l), rs.column(r)) {
                    (Some(a), Some(b)) if a.data_type == b.data_type => {}
                    (Some(a), Some(b)) => {
                        return invalid(format!("pair {a} = {b} has mismatched types"));
                    }
                    _ => return invalid(format!("pair ({l}, {r}) out of range")),
                }
            }
            if let Some(dup) = ls.concat(&rs).duplicate_name() {
                return invalid(format!("duplicate column {dup}"));
            }
        }
        LogicalPlan::Extension { node, inputs } => {
            let schemas: Vec<Schema> = inputs.iter().map(LogicalPlan::schema).collect();
            node.validate(&schemas).or_else(invalid)?;
        }
    }
    Ok(())
}

/// Re-derives every annotation from the input schema.
fn check_expr(expr: &BoundExpr, schema: &Schema) -> Result<(), String> {
    match expr {
        BoundExpr::Column { index, name, data_type } => match schema.column(*index) {
            Some(c) if &c.data_type == data_type => Ok(()),
            Some(c) => Err(format!("column {name} annotated {data_type}, input has {}", c.data_type)),
            None => Err(format!("column {name} index {index} outside arity {}", schema.len())),
        },
        BoundExpr::Literal(_) => Ok(()),
        BoundExpr::Compare { left, right, .. } => {
            check_expr(left, schema)?;
            check_expr(right, schema)?;
            let (lt, rt) = (left.data_type(), right.data_type());
            if lt.accepts(&rt) || rt.accepts(&lt) {
                Ok(())
            } else {
                Err(format!("comparison {expr} between {lt} and {rt}"))
            }
        }
        BoundExpr::Logical { left, right, .. } => {
            check_expr(left, schema)?;
            check_expr(right, schema)?;
            if left.data_type() == DataType::Bool && right.data_type() == DataType::Bool {
                Ok(())
            } else {
                Err(format!("logical operands of {expr} are not bool"))
            }
        }
        BoundExpr::Infix {
            op,
            left,
            right,
            data_type,
        } => {
            check_expr(left, schema)?;
            check_expr(right, schema)?;
            match op.result_type(&left.data_type(), &right.data_type()) {
                Ok(t) if &t == data_type => Ok(()),
                Ok(t) => Err(format!("{expr} annotated {data_type}, derives {t}")),
                Err(reason) => Err(reason),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::CmpOp;
    use crate::schema::Column;
    use crate::types::Value;

    fn scan(alias: &str) -> LogicalPlan {
        LogicalPlan::Scan {
            table: "t".into(),
            alias: alias.into(),
            schema: Schema::new(vec![Column::qualified(alias, "a", DataType::Int)]),
        }
    }

    #[test]
    fn rejects_stale_indices_and_types() {
        let bad_index = LogicalPlan::filter(
            BoundExpr::compare(CmpOp::Eq, BoundExpr::column(3, "a", DataType::Int), BoundExpr::Literal(Value::Int(1))),
            scan("t"),
        );
        assert!(validate(&bad_index).is_err());
        let bad_type = LogicalPlan::filter(
            BoundExpr::compare(CmpOp::Eq, BoundExpr::column(0, "a", DataType::Str), BoundExpr::Literal(Value::Int(1))),
            scan("t"),
        );
        assert!(validate(&bad_type).is_err());
        let not_bool = LogicalPlan::filter(BoundExpr::column(0, "a", DataType::Int), scan("t"));
        assert!(validate(&not_bool).is_err());
    }

    #[test]
    fn join_checks() {
        assert!(validate(&LogicalPlan::equi_join(vec![(0, 0)], scan("x"), scan("y"))).is_ok());
        assert!(validate(&LogicalPlan::equi_join(vec![(0, 1)], scan("x"), scan("y"))).is_err());
        assert!(validate(&LogicalPlan::equi_join(vec![], scan("x"), scan("y"))).is_err());
        assert!(validate(&LogicalPlan::cross(scan("x"), scan("x"))).is_err());
    }
}

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

//! Brute-force reference evaluators.
//!
//! [`evaluate_sql`] works from the parsed statement alone: it materializes
//! the full cross product of the FROM list, filters it row by row and
//! projects. [`evaluate_plan`] interprets a logical plan directly. Neither
//! shares evaluation code with the engine.

use std::cmp::Ordering;

use qsim_core::parser::{self, AstExpr, BinaryOp, ExprKind, Projection};
use qsim_core::plan::{BoundExpr, CmpOp, LogicalOp, LogicalPlan};
use qsim_core::simsel::SimilarityFilter;
use qsim_core::types::Value;
use qsim_core::{Catalog, KernelProfile};

pub type Rows = Vec<Vec<Value>>;

struct Binding {
    qualifier: String,
    name: String,
}

/// Rows a correct engine must return for `sql`, in no particular order.
pub fn evaluate_sql(sql: &str, catalog: &Catalog, profile: &KernelProfile) -> Result<Rows, String> {
    let stmt = parser::parse(sql, profile).map_err(|e| e.to_string())?;
    let mut bindings = Vec::new();
    let mut rows: Rows = vec![vec![]];
    for table in &stmt.from {
        let rel = catalog.get_table(&table.name).map_err(|e| e.to_string())?;
        for col in rel.schema().columns() {
            bindings.push(Binding {
                qualifier: table.binding().to_string(),
                name: col.name.clone(),
            });
        }
        let mut next = Vec::with_capacity(rows.len() * rel.len());
        for left in &rows {
            for right in rel.rows() {
                let mut row = left.clone();
                row.extend(right.iter().cloned());
                next.push(row);
            }
        }
        rows = next;
    }

    let mut out = Vec::new();
    for row in rows {
        if let Some(pred) = &stmt.selection {
            match eval_ast(pred, &bindings, &row)? {
                Value::Bool(true) => {}
                Value::Bool(false) => continue,
                other => return Err(format!("WHERE produced {other}")),
            }
        }
        out.push(match &stmt.projection {
            Projection::Star => row,
            Projection::Items(items) => items
                .iter()
                .map(|item| eval_ast(&item.expr, &bindings, &row))
                .collect::<Result<_, _>>()?,
        });
    }
    Ok(out)
}

fn lookup(bindings: &[Binding], qualifier: Option<&str>, name: &str) -> Result<usize, String> {
    let hits: Vec<usize> = bindings
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            b.name.eq_ignore_ascii_case(name) && qualifier.is_none_or(|q| b.qualifier.eq_ignore_ascii_case(q))
        })
        .map(|(i, _)| i)
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        [] => Err(format!("no column {name}")),
        _ => Err(format!("ambiguous column {name}")),
    }
}

fn eval_ast(expr: &AstExpr, bindings: &[Binding], row: &[Value]) -> Result<Value, String> {
    match &expr.kind {
        ExprKind::Column { qualifier, name } => Ok(row[lookup(bindings, qualifier.as_deref(), name)?].clone()),
        ExprKind::Literal(v) | ExprKind::ExtLiteral { value: v, .. } => Ok(v.clone()),
        ExprKind::Binary { op, left, right } => {
            let l = eval_ast(left, bindings, row)?;
            let r = eval_ast(right, bindings, row)?;
            match op {
                BinaryOp::And => Ok(Value::Bool(truth(&l)? && truth(&r)?)),
                BinaryOp::Or => Ok(Value::Bool(truth(&l)? || truth(&r)?)),
                BinaryOp::Infix(name) => infix(name, &l, &r),
                BinaryOp::Eq => compare(CmpOp::Eq, &l, &r),
                BinaryOp::NotEq => compare(CmpOp::NotEq, &l, &r),
                BinaryOp::Lt => compare(CmpOp::Lt, &l, &r),
                BinaryOp::LtEq => compare(CmpOp::LtEq, &l, &r),
                BinaryOp::Gt => compare(CmpOp::Gt, &l, &r),
                BinaryOp::GtEq => compare(CmpOp::GtEq, &l, &r),
            }
        }
    }
}

fn truth(v: &Value) -> Result<bool, String> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(format!("{other} is not a boolean")),
    }
}

fn components(v: &Value) -> Result<Vec<f64>, String> {
    let json = match v {
        Value::Ext(e) => e.to_json(),
        other => return Err(format!("{other} is not a vector")),
    };
    json.as_array()
        .ok_or_else(|| format!("{v} is not a vector"))?
        .iter()
        .map(|c| c.as_f64().ok_or_else(|| format!("bad component in {v}")))
        .collect()
}

fn l2(a: &Value, b: &Value) -> Result<f64, String> {
    let (a, b) = (components(a)?, components(b)?);
    if a.len() != b.len() {
        return Err(format!("dimension {} vs {}", a.len(), b.len()));
    }
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

fn infix(name: &str, l: &Value, r: &Value) -> Result<Value, String> {
    match name {
        "TO" => Ok(Value::Float(l2(l, r)?)),
        other => Err(format!("oracle has no operator {other}")),
    }
}

fn order(l: &Value, r: &Value) -> Result<Ordering, String> {
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => Ok(a.cmp(b)),
        (Value::Int(_) | Value::Float(_), Value::Int(_) | Value::Float(_)) => {
            let (a, b) = (num(l), num(r));
            a.partial_cmp(&b).ok_or_else(|| "NaN".to_string())
        }
        (Value::Str(a), Value::Str(b)) => Ok(a.cmp(b)),
        (Value::Bool(a), Value::Bool(b)) => Ok(a.cmp(b)),
        (Value::Ext(a), Value::Ext(b)) if a.render() == b.render() => Ok(Ordering::Equal),
        (Value::Ext(_), Value::Ext(_)) => Ok(Ordering::Less),
        _ => Err(format!("cannot compare {l} with {r}")),
    }
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Float(x) => *x,
        _ => f64::NAN,
    }
}

fn compare(op: CmpOp, l: &Value, r: &Value) -> Result<Value, String> {
    let ord = order(l, r)?;
    let holds = match op {
        CmpOp::Eq => ord.is_eq(),
        CmpOp::NotEq => ord.is_ne(),
        CmpOp::Lt => ord.is_lt(),
        CmpOp::LtEq => ord.is_le(),
        CmpOp::Gt => ord.is_gt(),
        CmpOp::GtEq => ord.is_ge(),
    };
    Ok(Value::Bool(holds))
}

/// Interprets `plan` node by node with nested loops.
pub fn evaluate_plan(plan: &LogicalPlan, catalog: &Catalog) -> Result<Rows, String> {
    match plan {
        LogicalPlan::Scan { table, .. } => Ok(catalog.get_table(table).map_err(|e| e.to_string())?.rows().to_vec()),
        LogicalPlan::Filter { predicate, input } => {
            let mut out = Vec::new();
            for row in evaluate_plan(input, catalog)? {
                if truth(&eval_bound(predicate, &row)?)? {
                    out.push(row);
                }
            }
            Ok(out)
        }
        LogicalPlan::Project { items, input } => evaluate_plan(input, catalog)?
            .iter()
            .map(|row| items.iter().map(|item| eval_bound(&item.expr, row)).collect())
            .collect(),
        LogicalPlan::CrossProduct { left, right } => join(left, right, &[], catalog),
        LogicalPlan::EquiJoin { on, left, right } => join(left, right, on, catalog),
        LogicalPlan::Extension { node, inputs } => {
            let sim = node
                .downcast::<SimilarityFilter>()
                .ok_or_else(|| format!("oracle cannot run {}", node.kind()))?;
            let [input] = inputs.as_slice() else {
                return Err("similarity filter needs one input".to_string());
            };
            let query = sim.query.clone().into_value();
            let mut out = Vec::new();
            for row in evaluate_plan(input, catalog)? {
                let d = l2(&row[sim.column], &query)?;
                if truth(&compare(sim.comparator, &Value::Float(d), &Value::Float(sim.threshold))?)? {
                    out.push(row);
                }
            }
            Ok(out)
        }
    }
}

fn join(left: &LogicalPlan, right: &LogicalPlan, on: &[(usize, usize)], catalog: &Catalog) -> Result<Rows, String> {
    let (l, r) = (evaluate_plan(left, catalog)?, evaluate_plan(right, catalog)?);
    let mut out = Vec::new();
    for a in &l {
        for b in &r {
            let mut keep = true;
            for &(i, j) in on {
                keep &= order(&a[i], &b[j])?.is_eq();
            }
            if keep {
                let mut row = a.clone();
                row.extend(b.iter().cloned());
                out.push(row);
            }
        }
    }
    Ok(out)
}

fn eval_bound(expr: &BoundExpr, row: &[Value]) -> Result<Value, String> {
    match expr {
        BoundExpr::Column { index, .. } => row.get(*index).cloned().ok_or_else(|| format!("no column {index}")),
        BoundExpr::Literal(v) => Ok(v.clone()),
        BoundExpr::Compare { op, left, right } => compare(*op, &eval_bound(left, row)?, &eval_bound(right, row)?),
        BoundExpr::Logical { op, left, right } => {
            let (l, r) = (truth(&eval_bound(left, row)?)?, truth(&eval_bound(right, row)?)?);
            Ok(Value::Bool(match op {
                LogicalOp::And => l && r,
                LogicalOp::Or => l || r,
            }))
        }
        BoundExpr::Infix { op, left, right, .. } => infix(op.name(), &eval_bound(left, row)?, &eval_bound(right, row)?),
    }
}

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

//! Order-insensitive row comparison.

use std::cmp::Ordering;

use qsim_core::types::Value;

const REL_TOL: f64 = 1e-9;

fn tag(v: &Value) -> u8 {
    match v {
        Value::Int(_) => 0,
        Value::Float(_) => 1,
        Value::Str(_) => 2,
        Value::Bool(_) => 3,
        Value::Ext(_) => 4,
    }
}

fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        (Value::Float(x), Value::Float(y)) => x.total_cmp(y),
        (Value::Str(x), Value::Str(y)) => x.cmp(y),
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Ext(x), Value::Ext(y)) => x.render().cmp(&y.render()),
        _ => tag(a).cmp(&tag(b)),
    }
}

fn cmp_row(a: &[Value], b: &[Value]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cmp_value(x, y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn close(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Float(x), Value::Float(y)) => x == y || (x - y).abs() <= REL_TOL * x.abs().max(y.abs()),
        (Value::Ext(x), Value::Ext(y)) => x.render() == y.render(),
        _ => a == b && tag(a) == tag(b),
    }
}

/// Multiset equality; exact for ints and strings, floats to 1e-9 relative.
pub fn assert_multiset_eq(actual: &[Vec<Value>], expected: &[Vec<Value>]) -> Result<(), String> {
    if actual.len() != expected.len() {
        return Err(format!("row count {} != expected {}", actual.len(), expected.len()));
    }
    let mut a: Vec<&Vec<Value>> = actual.iter().collect();
    let mut e: Vec<&Vec<Value>> = expected.iter().collect();
    a.sort_by(|x, y| cmp_row(x, y));
    e.sort_by(|x, y| cmp_row(x, y));
    for (x, y) in a.iter().zip(&e) {
        if x.len() != y.len() || !x.iter().zip(y.iter()).all(|(p, q)| close(p, q)) {
            return Err(format!("row {} != expected {}", show(x), show(y)));
        }
    }
    Ok(())
}

fn show(row: &[Value]) -> String {
    let cells: Vec<String> = row.iter().map(Value::to_sql_literal).collect();
    format!("({})", cells.join(", "))
}

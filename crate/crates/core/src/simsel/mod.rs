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

//! The SimSelection syntax: a `vector` type, `[..]` literals, the `TO`
//! distance operator, the `SIMSELECT` keyword, the SimilarityFilter node
//! with its executor, and two similarity-aware rules.

mod node;
mod rules;

use std::any::Any;
use std::fmt;
use std::sync::Arc;

pub use node::{SimFilterExec, SimilarityFilter};
pub use rules::{PushSimFilterIntoCross, SimFilterAfterCheapFilters};

use crate::catalog::parse_float;
use crate::parser::{ParseError, TokenCursor};
use crate::plan::{BoundExpr, LogicalPlan, PlanError};
use crate::registry::{DataTypeDef, InfixOperator, Registry, RegistryEntry, RegistryError, SyntaxId};
use crate::types::{DataType, ExtType, ExtValue, Value};

pub const SYNTAX: &str = "SimSelection";
pub const KEYWORD: &str = "SIMSELECT";
pub const OPERATOR: &str = "TO";
pub const NODE_KIND: &str = "SimilarityFilter";
pub const SELECTIVITY: f64 = 0.2;
pub const SQL_APPROXIMATION: &str = "/* simfilter sel=0.2 */ 1=1";
pub const DISTANCE_EVALS: &str = "distance_evals";

pub fn syntax_id() -> SyntaxId {
    SyntaxId::new(SYNTAX)
}

/// Type of a vector column; `None` leaves the dimension open.
pub fn vector_type(dim: Option<u32>) -> DataType {
    DataType::Ext(ExtType::new("vector", syntax_id(), dim))
}

/// Fixed-length vector of finite floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self, String> {
        if components.is_empty() {
            return Err("a vector needs at least one component".to_string());
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err("vector components must be finite".to_string());
        }
        Ok(Vector(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_value(self) -> Value {
        Value::Ext(Arc::new(self))
    }

    pub fn from_value(value: &Value) -> Option<&Vector> {
        value.as_ext()?.as_any().downcast_ref()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl ExtValue for Vector {
    fn data_type(&self) -> DataType {
        vector_type(Some(self.dim() as u32))
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn ext_eq(&self, other: &dyn ExtValue) -> bool {
        other.as_any().downcast_ref::<Vector>() == Some(self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.0.clone())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {0} vs {1}")]
pub struct DimMismatch(pub usize, pub usize);

/// Euclidean distance.
pub fn distance(a: &Vector, b: &Vector) -> Result<f64, DimMismatch> {
    if a.dim() != b.dim() {
        return Err(DimMismatch(a.dim(), b.dim()));
    }
    Ok(a.0.iter().zip(&b.0).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// Parses the rest of a `[..]` literal; the opener is already consumed.
pub fn parse_vector_literal(cursor: &mut TokenCursor<'_>) -> Result<Value, ParseError> {
    let start = cursor.position();
    let mut components = Vec::new();
    loop {
        let x = match cursor.parse_number()? {
            Value::Int(i) => i as f64,
            Value::Float(x) => x,
            _ => unreachable!("parse_number yields numbers"),
        };
        components.push(x);
        if cursor.at_symbol(",") {
            cursor.next_token();
        } else if cursor.at_symbol("]") {
            cursor.next_token();
            break;
        } else {
            return Err(cursor.unexpected("',' or ']'"));
        }
    }
    Vector::new(components).map(Vector::into_value).map_err(|reason| ParseError::Syntax {
        pos: start,
        expected: "vector literal".to_string(),
        found: reason,
    })
}

/// Parses a CSV cell such as `[1,2.5,3]`.
pub fn parse_vector_cell(cell: &str) -> Result<Value, String> {
    let inner = cell
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("invalid vector {cell:?}: expected [x,y,...]"))?;
    let components = inner
        .split(',')
        .map(|part| parse_float(part.trim()).map_err(|e| format!("invalid vector {cell:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Vector::new(components).map(Vector::into_value)
}

fn dim_of(t: &DataType) -> Option<Option<u32>> {
    match t {
        DataType::Ext(ext) if &*ext.name == "vector" => Some(ext.modifier),
        _ => None,
    }
}

fn to_type_rule(left: &DataType, right: &DataType) -> Result<DataType, String> {
    match (dim_of(left), dim_of(right)) {
        (Some(Some(a)), Some(Some(b))) if a != b => Err("vectors of equal dimension".to_string()),
        (Some(_), Some(_)) => Ok(DataType::Float),
        _ => Err("vector operands".to_string()),
    }
}

fn to_evaluate(left: &Value, right: &Value) -> Result<Value, String> {
    match (Vector::from_value(left), Vector::from_value(right)) {
        (Some(a), Some(b)) => distance(a, b).map(Value::Float).map_err(|e| e.to_string()),
        _ => Err(format!("expected vectors, found {} and {}", left.data_type(), right.data_type())),
    }
}

fn to_predicate_cost(left: &DataType, right: &DataType) -> f64 {
    dim_of(left)
        .flatten()
        .or_else(|| dim_of(right).flatten())
        .map_or(1.0, f64::from)
}

/// Moves every `col TO [..] < t` (or `<=`) conjunct of each filter into a
/// SimilarityFilter placed below the filter holding the other conjuncts.
pub fn extract_similarity_filters(plan: LogicalPlan) -> Result<LogicalPlan, PlanError> {
    let (shell, children) = plan.into_parts();
    let children = children
        .into_iter()
        .map(extract_similarity_filters)
        .collect::<Result<Vec<_>, _>>()?;
    let plan = shell.with_children(children);
    let LogicalPlan::Filter { predicate, input } = plan else {
        return Ok(plan);
    };
    let mut rest = Vec::new();
    let mut similar = Vec::new();
    for conjunct in predicate.conjuncts() {
        match SimilarityFilter::from_predicate(conjunct) {
            Some(node) => similar.push(node),
            None => rest.push(conjunct.clone()),
        }
    }
    if similar.is_empty() {
        return Ok(LogicalPlan::Filter { predicate, input });
    }
    let mut plan = *input;
    for node in similar.into_iter().rev() {
        plan = node.over(plan);
    }
    if let Some(rest) = BoundExpr::and_all(rest) {
        plan = LogicalPlan::filter(rest, plan);
    }
    Ok(plan)
}

pub fn entry() -> RegistryEntry {
    RegistryEntry::new()
        .statement_keyword(KEYWORD)
        .literal_opener('[', parse_vector_literal)
        .infix_operator(
            InfixOperator::new(OPERATOR, to_type_rule, to_evaluate)
                .with_selectivity(SELECTIVITY)
                .with_predicate_cost(to_predicate_cost),
        )
        .data_type(DataTypeDef::new(
            "vector",
            |dim| match dim {
                Some(0) => Err("vector dimension must be at least 1".to_string()),
                dim => Ok(vector_type(dim)),
            },
            parse_vector_cell,
        ))
        .analyzer_hook(extract_similarity_filters)
        .rule(PushSimFilterIntoCross)
        .rule(SimFilterAfterCheapFilters)
        .physical_translator(NODE_KIND, node::translate)
        .sql_approximation(NODE_KIND, |_| SQL_APPROXIMATION.to_string())
        .sql_approximation(OPERATOR, |_| SQL_APPROXIMATION.to_string())
}

pub fn register(registry: &mut Registry) -> Result<(), RegistryError> {
    registry.register(syntax_id(), entry())
}

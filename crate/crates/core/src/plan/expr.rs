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


use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::registry::InfixOperator;
use crate::types::{DataType, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    NotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::NotEq => "!=",
            CmpOp::Lt => "<",
            CmpOp::LtEq => "<=",
            CmpOp::Gt => ">",
            CmpOp::GtEq => ">=",
        }
    }

    pub fn is_range(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::LtEq | CmpOp::Gt | CmpOp::GtEq)
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Eq => ord == Equal,
            CmpOp::NotEq => ord != Equal,
            CmpOp::Lt => ord == Less,
            CmpOp::LtEq => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::GtEq => ord != Less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalOp {
    And,
    Or,
}

impl LogicalOp {
    pub fn symbol(self) -> &'static str {
        match self {
            LogicalOp::And => "AND",
            LogicalOp::Or => "OR",
        }
    }
}

/// Shared handle to a registered infix operator. Two handles are equal when
/// they name the same operator of the same syntax.
#[derive(Clone)]
pub struct InfixRef(pub Arc<InfixOperator>);

impl PartialEq for InfixRef {
    fn eq(&self, other: &Self) -> bool {
        self.0.name() == other.0.name() && self.0.syntax() == other.0.syntax()
    }
}

impl fmt::Debug for InfixRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name())
    }
}

impl std::ops::Deref for InfixRef {
    type Target = InfixOperator;
    fn deref(&self) -> &InfixOperator {
        &self.0
    }
}

/// Expression bound to the output schema of a node's input.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundExpr {
    Column {
        index: usize,
        /// Display name, `alias.col` for scanned columns.
        name: String,
        data_type: DataType,
    },
    Literal(Value),
    Compare {
        op: CmpOp,
        left: Box<BoundExpr>,
        right: Box<BoundExpr>,
    },
    Logical {
        op: LogicalOp,
        left: Box<BoundExpr>,
        right: Box<BoundExpr>,
    },
    Infix {
        op: InfixRef,
        left: Box<BoundExpr>,
        right: Box<BoundExpr>,
        data_type: DataType,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct EvalError(pub String);

impl BoundExpr {
    pub fn column(index: usize, name: impl Into<String>, data_type: DataType) -> Self {
        BoundExpr::Column {
            index,
            name: name.into(),
            data_type,
        }
    }

    pub fn compare(op: CmpOp, left: BoundExpr, right: BoundExpr) -> Self {
        BoundExpr::Compare {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn and(left: BoundExpr, right: BoundExpr) -> Self {
        BoundExpr::Logical {
            op: LogicalOp::And,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn data_type(&self) -> DataType {
        match self {
            BoundExpr::Column { data_type, .. } | BoundExpr::Infix { data_type, .. } => data_type.clone(),
            BoundExpr::Literal(v) => v.data_type(),
            BoundExpr::Compare { .. } | BoundExpr::Logical { .. } => DataType::Bool,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoundExpr::Logical { op: LogicalOp::Or, .. } => 1,
            BoundExpr::Logical { op: LogicalOp::And, .. } => 2,
            BoundExpr::Compare { .. } => 3,
            BoundExpr::Infix { .. } => 4,
            _ => u8::MAX,
        }
    }

    /// Input column positions referenced anywhere in the expression.
    pub fn columns(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_columns(&mut out);
        out
    }

    fn collect_columns(&self, out: &mut BTreeSet<usize>) {
        match self {
            BoundExpr::Column { index, .. } => {
                out.insert(*index);
            }
            BoundExpr::Literal(_) => {}
            BoundExpr::Compare { left, right, .. }
            | BoundExpr::Logical { left, right, .. }
            | BoundExpr::Infix { left, right, .. } => {
                left.collect_columns(out);
                right.collect_columns(out);
            }
        }
    }

    /// Rewrites every column position through `f`.
    pub fn remap(&self, f: &dyn Fn(usize) -> usize) -> BoundExpr {
        match self {
            BoundExpr::Column { index, name, data_type } => BoundExpr::Column {
                index: f(*index),
                name: name.clone(),
                data_type: data_type.clone(),
            },
            BoundExpr::Literal(v) => BoundExpr::Literal(v.clone()),
            BoundExpr::Compare { op, left, right } => BoundExpr::Compare {
                op: *op,
                left: Box::new(left.remap(f)),
                right: Box::new(right.remap(f)),
            },
            BoundExpr::Logical { op, left, right } => BoundExpr::Logical {
                op: *op,
                left: Box::new(left.remap(f)),
                right: Box::new(right.remap(f)),
            },
            BoundExpr::Infix {
                op,
                left,
                right,
                data_type,
            } => BoundExpr::Infix {
                op: op.clone(),
                left: Box::new(left.remap(f)),
                right: Box::new(right.remap(f)),
                data_type: data_type.clone(),
            },
        }
    }

    /// Top-level AND operands, left to right.
    pub fn conjuncts(&self) -> Vec<&BoundExpr> {
        match self {
            BoundExpr::Logical {
                op: LogicalOp::And,
                left,
                right,
            } => {
                let mut out = left.conjuncts();
                out.extend(right.conjuncts());
                out
            }
            other => vec![other],
        }
    }

    /// Left-folded AND of `parts`; `None` when empty.
    pub fn and_all(parts: Vec<BoundExpr>) -> Option<BoundExpr> {
        parts.into_iter().reduce(BoundExpr::and)
    }

    /// First registered operator in pre-order, if any.
    pub fn first_infix(&self) -> Option<&InfixRef> {
        match self {
            BoundExpr::Infix { op, .. } => Some(op),
            BoundExpr::Compare { left, right, .. } | BoundExpr::Logical { left, right, .. } => {
                left.first_infix().or_else(|| right.first_infix())
            }
            _ => None,
        }
    }

    pub fn evaluate(&self, row: &[Value]) -> Result<Value, EvalError> {
        match self {
            BoundExpr::Column { index, name, .. } => row
                .get(*index)
                .cloned()
                .ok_or_else(|| EvalError(format!("column {name} (#{index}) outside row of arity {}", row.len()))),
            BoundExpr::Literal(v) => Ok(v.clone()),
            BoundExpr::Compare { op, left, right } => {
                let l = left.evaluate(row)?;
                let r = right.evaluate(row)?;
                let holds = match op {
                    CmpOp::Eq => l.try_eq(&r).map_err(|e| EvalError(e.to_string()))?,
                    CmpOp::NotEq => !l.try_eq(&r).map_err(|e| EvalError(e.to_string()))?,
                    _ => op.holds(l.try_cmp(&r).map_err(|e| EvalError(e.to_string()))?),
                };
                Ok(Value::Bool(holds))
            }
            BoundExpr::Logical { op, left, right } => {
                let l = truth(&left.evaluate(row)?)?;
                let short = match op {
                    LogicalOp::And => !l,
                    LogicalOp::Or => l,
                };
                if short {
                    return Ok(Value::Bool(l));
                }
                Ok(Value::Bool(truth(&right.evaluate(row)?)?))
            }
            BoundExpr::Infix { op, left, right, .. } => {
                let l = left.evaluate(row)?;
                let r = right.evaluate(row)?;
                op.evaluate(&l, &r)
                    .map_err(|reason| EvalError(format!("{}: {reason}", op.name())))
            }
        }
    }

    /// Evaluates as a predicate.
    pub fn matches(&self, row: &[Value]) -> Result<bool, EvalError> {
        truth(&self.evaluate(row)?)
    }
}

fn truth(v: &Value) -> Result<bool, EvalError> {
    v.as_bool()
        .ok_or_else(|| EvalError(format!("expected bool, found {}", v.data_type())))
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (symbol, left, right) = match self {
            BoundExpr::Column { name, .. } => return f.write_str(name),
            BoundExpr::Literal(v) => return f.write_str(&v.to_sql_literal()),
            BoundExpr::Compare { op, left, right } => (op.symbol(), left, right),
            BoundExpr::Logical { op, left, right } => (op.symbol(), left, right),
            BoundExpr::Infix { op, left, right, .. } => (op.name(), left, right),
        };
        let p = self.precedence();
        let comparison = matches!(self, BoundExpr::Compare { .. });
        if left.precedence() < p || (comparison && left.precedence() == p) {
            write!(f, "({left})")?;
        } else {
            write!(f, "{left}")?;
        }
        write!(f, " {symbol} ")?;
        if right.precedence() <= p {
            write!(f, "({right})")
        } else {
            write!(f, "{right}")
        }
    }
}

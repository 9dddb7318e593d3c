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

//! Logical plan IR, the AST-to-plan analyzer, the plan validator and the
//! serialized plan document.

mod builder;
mod doc;
mod expr;
mod validate;

use std::any::Any;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use builder::build_logical;
pub use doc::{serialize_plan, PlanDoc};
pub use expr::{BoundExpr, CmpOp, EvalError, InfixRef, LogicalOp};
pub use validate::validate;

use crate::cost::NodeEstimate;
use crate::parser::Position;
use crate::registry::SyntaxId;
use crate::schema::{Column, Schema};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("unknown column {name} at {pos}")]
    UnknownColumn { name: String, pos: Position },
    #[error("ambiguous column {name} at {pos}")]
    AmbiguousColumn { name: String, pos: Position },
    #[error("type mismatch at {pos}: expected {expected}, found {found}")]
    TypeMismatch {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("invalid plan: {0}")]
    Invalid(String),
}

impl PlanError {
    pub fn position(&self) -> Option<Position> {
        match self {
            PlanError::UnknownColumn { pos, .. }
            | PlanError::AmbiguousColumn { pos, .. }
            | PlanError::TypeMismatch { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

/// Logical node contributed by an extension.
pub trait ExtOperator: fmt::Debug + Send + Sync {
    fn syntax(&self) -> &SyntaxId;
    /// Node kind; also the key for translators and SQL approximation hooks.
    fn kind(&self) -> &str;
    fn label(&self) -> String;
    fn attrs(&self) -> BTreeMap<String, String>;
    fn output_schema(&self, inputs: &[Schema]) -> Schema;
    fn validate(&self, inputs: &[Schema]) -> Result<(), String>;
    fn estimate(&self, input_rows: &[f64]) -> NodeEstimate;
    fn same_as(&self, other: &dyn ExtOperator) -> bool;
    fn as_any(&self) -> &dyn Any;
}

#[derive(Debug, Clone)]
pub struct ExtNode(pub Arc<dyn ExtOperator>);

impl ExtNode {
    pub fn new(op: impl ExtOperator + 'static) -> Self {
        ExtNode(Arc::new(op))
    }

    pub fn downcast<T: 'static>(&self) -> Option<&T> {
        self.0.as_any().downcast_ref()
    }
}

impl PartialEq for ExtNode {
    fn eq(&self, other: &Self) -> bool {
        self.0.same_as(other.0.as_ref())
    }
}

impl std::ops::Deref for ExtNode {
    type Target = dyn ExtOperator;
    fn deref(&self) -> &Self::Target {
        self.0.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectItem {
    pub expr: BoundExpr,
    /// Output column label.
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LogicalPlan {
    Scan {
        table: String,
        alias: String,
        /// Table schema requalified by `alias`.
        schema: Schema,
    },
    Filter {
        predicate: BoundExpr,
        input: Box<LogicalPlan>,
    },
    Project {
        items: Vec<ProjectItem>,
        input: Box<LogicalPlan>,
    },
    CrossProduct {
        left: Box<LogicalPlan>,
        right: Box<LogicalPlan>,
    },
    /// Inner join on `left[l] = right[r]` for every pair.
    EquiJoin {
        on: Vec<(usize, usize)>,
        left: Box<LogicalPlan>,
        right: Box<LogicalPlan>,
    },
    Extension {
        node: ExtNode,
        inputs: Vec<LogicalPlan>,
    },
}

impl LogicalPlan {
    pub fn filter(predicate: BoundExpr, input: LogicalPlan) -> Self {
        LogicalPlan::Filter {
            predicate,
            input: Box::new(input),
        }
    }

    pub fn cross(left: LogicalPlan, right: LogicalPlan) -> Self {
        LogicalPlan::CrossProduct {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn equi_join(on: Vec<(usize, usize)>, left: LogicalPlan, right: LogicalPlan) -> Self {
        LogicalPlan::EquiJoin {
            on,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn project(items: Vec<ProjectItem>, input: LogicalPlan) -> Self {
        LogicalPlan::Project {
            items,
            input: Box::new(input),
        }
    }

    pub fn extension(node: ExtNode, inputs: Vec<LogicalPlan>) -> Self {
        LogicalPlan::Extension { node, inputs }
    }

    pub fn kind(&self) -> &str {
        match self {
            LogicalPlan::Scan { .. } => "Scan",
            LogicalPlan::Filter { .. } => "Filter",
            LogicalPlan::Project { .. } => "Project",
            LogicalPlan::CrossProduct { .. } => "CrossProduct",
            LogicalPlan::EquiJoin { .. } => "EquiJoin",
            LogicalPlan::Extension { node, .. } => node.kind(),
        }
    }

    pub fn children(&self) -> Vec<&LogicalPlan> {
        match self {
            LogicalPlan::Scan { .. } => vec![],
            LogicalPlan::Filter { input, .. } | LogicalPlan::Project { input, .. } => vec![input],
            LogicalPlan::CrossProduct { left, right } | LogicalPlan::EquiJoin { left, right, .. } => {
                vec![left, right]
            }
            LogicalPlan::Extension { inputs, .. } => inputs.iter().collect(),
        }
    }

    /// Splits the node into its own shell and its children.
    pub fn into_parts(self) -> (LogicalPlan, Vec<LogicalPlan>) {
        let placeholder = || {
            Box::new(LogicalPlan::Scan {
                table: String::new(),
                alias: String::new(),
                schema: Schema::default(),
            })
        };
        match self {
            scan @ LogicalPlan::Scan { .. } => (scan, vec![]),
            LogicalPlan::Filter { predicate, input } => (
                LogicalPlan::Filter {
                    predicate,
                    input: placeholder(),
                },
                vec![*input],
            ),
            LogicalPlan::Project { items, input } => (
                LogicalPlan::Project {
                    items,
                    input: placeholder(),
                },
                vec![*input],
            ),
            LogicalPlan::CrossProduct { left, right } => (
                LogicalPlan::CrossProduct {
                    left: placeholder(),
                    right: placeholder(),
                },
                vec![*left, *right],
            ),
            LogicalPlan::EquiJoin { on, left, right } => (
                LogicalPlan::EquiJoin {
                    on,
                    left: placeholder(),
                    right: placeholder(),
                },
                vec![*left, *right],
            ),
            LogicalPlan::Extension { node, inputs } => (LogicalPlan::Extension { node, inputs: vec![] }, inputs),
        }
    }

    /// Inverse of [`LogicalPlan::into_parts`].
    pub fn with_children(self, children: Vec<LogicalPlan>) -> LogicalPlan {
        let mut it = children.into_iter();
        let mut next = || Box::new(it.next().expect("child count matches node arity"));
        match self {
            scan @ LogicalPlan::Scan { .. } => scan,
            LogicalPlan::Filter { predicate, .. } => LogicalPlan::Filter {
                predicate,
                input: next(),
            },
            LogicalPlan::Project { items, .. } => LogicalPlan::Project { items, input: next() },
            LogicalPlan::CrossProduct { .. } => LogicalPlan::CrossProduct {
                left: next(),
                right: next(),
            },
            LogicalPlan::EquiJoin { on, .. } => LogicalPlan::EquiJoin {
                on,
                left: next(),
                right: next(),
            },
            LogicalPlan::Extension { node, .. } => LogicalPlan::Extension {
                node,
                inputs: it.collect(),
            },
        }
    }

    /// Output schema of this node.
    pub fn schema(&self) -> Schema {
        match self {
            LogicalPlan::Scan { schema, .. } => schema.clone(),
            LogicalPlan::Filter { input, .. } => input.schema(),
            LogicalPlan::Project { items, .. } => Schema::new(
                items
                    .iter()
                    .map(|item| Column::new(item.name.clone(), item.expr.data_type()))
                    .collect(),
            ),
            LogicalPlan::CrossProduct { left, right } | LogicalPlan::EquiJoin { left, right, .. } => {
                left.schema().concat(&right.schema())
            }
            LogicalPlan::Extension { node, inputs } => {
                let schemas: Vec<Schema> = inputs.iter().map(LogicalPlan::schema).collect();
                node.output_schema(&schemas)
            }
        }
    }

    /// Scanned table names, left to right.
    pub fn scans(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.walk(&mut |node| {
            if let LogicalPlan::Scan { table, alias, .. } = node {
                out.push((table.as_str(), alias.as_str()));
            }
        });
        out
    }

    /// Pre-order visit.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a LogicalPlan)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Node at `path` (child indices from the root).
    pub fn at_path(&self, path: &[usize]) -> Option<&LogicalPlan> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.at_path(rest),
        }
    }

    /// One-line description used in labels and traces.
    pub fn label(&self) -> String {
        match self {
            LogicalPlan::Scan { table, alias, .. } if table == alias => format!("Scan {table}"),
            LogicalPlan::Scan { table, alias, .. } => format!("Scan {table} AS {alias}"),
            LogicalPlan::Filter { predicate, .. } => format!("Filter {predicate}"),
            LogicalPlan::Project { items, .. } => {
                let names: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
                format!("Project {}", names.join(", "))
            }
            LogicalPlan::CrossProduct { .. } => "CrossProduct".to_string(),
            LogicalPlan::EquiJoin { on, left, right } => {
                format!("EquiJoin {}", join_condition(on, &left.schema(), &right.schema()))
            }
            LogicalPlan::Extension { node, .. } => node.label(),
        }
    }

    /// Indented tree, one node per line.
    pub fn display_tree(&self) -> String {
        let mut out = String::new();
        self.write_tree(&mut out, 0);
        out
    }

    fn write_tree(&self, out: &mut String, depth: usize) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&self.label());
        out.push('\n');
        for child in self.children() {
            child.write_tree(out, depth + 1);
        }
    }
}

/// `l = r AND ...` over qualified column names.
pub(crate) fn join_condition(on: &[(usize, usize)], left: &Schema, right: &Schema) -> String {
    let name = |s: &Schema, i: usize| s.column(i).map_or_else(|| format!("#{i}"), Column::qualified_name);
    on.iter()
        .map(|&(l, r)| format!("{} = {}", name(left, l), name(right, r)))
        .collect::<Vec<_>>()
        .join(" AND ")
}

impl fmt::Display for LogicalPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_tree())
    }
}

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


use std::sync::Arc;

use super::Rule;
use crate::plan::{BoundExpr, CmpOp, LogicalOp, LogicalPlan};

pub fn core_rules() -> Vec<Arc<dyn Rule>> {
    vec![
        Arc::new(SplitConjunctiveFilter),
        Arc::new(MergeFilters),
        Arc::new(PushFilterIntoCross),
        Arc::new(PushFilterBelowProject),
        Arc::new(CrossToEquiJoin),
    ]
}

/// `Filter(p AND q, C)` to `Filter(p, Filter(q, C))`.
pub struct SplitConjunctiveFilter;

impl Rule for SplitConjunctiveFilter {
    fn name(&self) -> &str {
        "SplitConjunctiveFilter"
    }

    fn description(&self) -> &str {
        "Split a conjunctive filter into a chain of filters"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate, input } = node else {
            return None;
        };
        let BoundExpr::Logical {
            op: LogicalOp::And,
            left,
            right,
        } = predicate
        else {
            return None;
        };
        Some(LogicalPlan::filter(
            (**left).clone(),
            LogicalPlan::filter((**right).clone(), (**input).clone()),
        ))
    }
}

/// `Filter(p, Filter(q, C))` to `Filter(p AND q, C)`.
pub struct MergeFilters;

impl Rule for MergeFilters {
    fn name(&self) -> &str {
        "MergeFilters"
    }

    fn description(&self) -> &str {
        "Merge two adjacent filters into one conjunction"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate: p, input } = node else {
            return None;
        };
        let LogicalPlan::Filter { predicate: q, input: c } = input.as_ref() else {
            return None;
        };
        Some(LogicalPlan::filter(BoundExpr::and(p.clone(), q.clone()), (**c).clone()))
    }
}

/// Moves a filter that reads one side of a cross product onto that side.
pub struct PushFilterIntoCross;

impl Rule for PushFilterIntoCross {
    fn name(&self) -> &str {
        "PushFilterIntoCross"
    }

    fn description(&self) -> &str {
        "Push a single-sided filter below a cross product"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate, input } = node else {
            return None;
        };
        let LogicalPlan::CrossProduct { left, right } = input.as_ref() else {
            return None;
        };
        let split = left.schema().len();
        let cols = predicate.columns();
        if cols.iter().all(|&c| c < split) {
            Some(LogicalPlan::cross(
                LogicalPlan::filter(predicate.clone(), (**left).clone()),
                (**right).clone(),
            ))
        } else if cols.iter().all(|&c| c >= split) {
            Some(LogicalPlan::cross(
                (**left).clone(),
                LogicalPlan::filter(predicate.remap(&|c| c - split), (**right).clone()),
            ))
        } else {
            None
        }
    }
}

/// Moves a filter below a projection when every column it reads is a
/// pass-through column of the projection.
pub struct PushFilterBelowProject;

impl Rule for PushFilterBelowProject {
    fn name(&self) -> &str {
        "PushFilterBelowProject"
    }

    fn description(&self) -> &str {
        "Push a filter below a projection of plain columns"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate, input } = node else {
            return None;
        };
        let LogicalPlan::Project { items, input: child } = input.as_ref() else {
            return None;
        };
        let mut mapping = Vec::new();
        for c in predicate.columns() {
            match &items.get(c)?.expr {
                BoundExpr::Column { index, .. } => mapping.push((c, *index)),
                _ => return None,
            }
        }
        let rebased = predicate.remap(&|c| {
            mapping
                .iter()
                .find(|(from, _)| *from == c)
                .map(|(_, to)| *to)
                .expect("every column was mapped")
        });
        // Names in the predicate now refer to the projection's input.
        let child_schema = child.schema();
        let renamed = rename_columns(&rebased, &|i| child_schema.column(i).map(|c| c.qualified_name()));
        Some(LogicalPlan::project(items.clone(), LogicalPlan::filter(renamed, (**child).clone())))
    }
}

fn rename_columns(expr: &BoundExpr, name_of: &dyn Fn(usize) -> Option<String>) -> BoundExpr {
    match expr {
        BoundExpr::Column { index, name, data_type } => BoundExpr::Column {
            index: *index,
            name: name_of(*index).unwrap_or_else(|| name.clone()),
            data_type: data_type.clone(),
        },
        BoundExpr::Literal(_) => expr.clone(),
        BoundExpr::Compare { op, left, right } => BoundExpr::Compare {
            op: *op,
            left: Box::new(rename_columns(left, name_of)),
            right: Box::new(rename_columns(right, name_of)),
        },
        BoundExpr::Logical { op, left, right } => BoundExpr::Logical {
            op: *op,
            left: Box::new(rename_columns(left, name_of)),
            right: Box::new(rename_columns(right, name_of)),
        },
        BoundExpr::Infix {
            op,
            left,
            right,
            data_type,
        } => BoundExpr::Infix {
            op: op.clone(),
            left: Box::new(rename_columns(left, name_of)),
            right: Box::new(rename_columns(right, name_of)),
            data_type: data_type.clone(),
        },
    }
}

/// `Filter(l = r, Cross(L, R))` with `l` from L and `r` from R becomes an
/// equi-join; a further equality directly above an equi-join joins its
/// pair list.
pub struct CrossToEquiJoin;

impl CrossToEquiJoin {
    fn pair(predicate: &BoundExpr, split: usize) -> Option<(usize, usize)> {
        let BoundExpr::Compare {
            op: CmpOp::Eq,
            left,
            right,
        } = predicate
        else {
            return None;
        };
        let (BoundExpr::Column { index: a, data_type: ta, .. }, BoundExpr::Column { index: b, data_type: tb, .. }) =
            (left.as_ref(), right.as_ref())
        else {
            return None;
        };
        if ta != tb {
            return None;
        }
        match (*a < split, *b < split) {
            (true, false) => Some((*a, *b - split)),
            (false, true) => Some((*b, *a - split)),
            _ => None,
        }
    }
}

impl Rule for CrossToEquiJoin {
    fn name(&self) -> &str {
        "CrossToEquiJoin"
    }

    fn description(&self) -> &str {
        "Turn an equality filter over a cross product into an equi-join"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate, input } = node else {
            return None;
        };
        match input.as_ref() {
            LogicalPlan::CrossProduct { left, right } => {
                let pair = Self::pair(predicate, left.schema().len())?;
                Some(LogicalPlan::equi_join(vec![pair], (**left).clone(), (**right).clone()))
            }
            LogicalPlan::EquiJoin { on, left, right } => {
                let pair = Self::pair(predicate, left.schema().len())?;
                let mut on = on.clone();
                if !on.contains(&pair) {
                    on.push(pair);
                }
                Some(LogicalPlan::equi_join(on, (**left).clone(), (**right).clone()))
            }
            _ => None,
        }
    }
}

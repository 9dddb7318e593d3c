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


use super::SimilarityFilter;
use crate::optimizer::Rule;
use crate::plan::LogicalPlan;

fn similarity(plan: &LogicalPlan) -> Option<(&SimilarityFilter, &LogicalPlan)> {
    match plan {
        LogicalPlan::Extension { node, inputs } if inputs.len() == 1 => Some((node.downcast()?, &inputs[0])),
        _ => None,
    }
}

/// Moves a SimilarityFilter onto the side of a cross product or equi-join
/// that holds its vector column.
pub struct PushSimFilterIntoCross;

impl Rule for PushSimFilterIntoCross {
    fn name(&self) -> &str {
        "PushSimFilterIntoCross"
    }

    fn description(&self) -> &str {
        "Push a similarity filter onto the join side holding its column"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let (filter, input) = similarity(node)?;
        let (left, right) = match input {
            LogicalPlan::CrossProduct { left, right } | LogicalPlan::EquiJoin { left, right, .. } => (left, right),
            _ => return None,
        };
        let split = left.schema().len();
        let (left, right) = if filter.column < split {
            (filter.clone().over((**left).clone()), (**right).clone())
        } else {
            ((**left).clone(), filter.rebased(filter.column - split).over((**right).clone()))
        };
        Some(match input {
            LogicalPlan::EquiJoin { on, .. } => LogicalPlan::equi_join(on.clone(), left, right),
            _ => LogicalPlan::cross(left, right),
        })
    }
}

/// `Filter(p, SimilarityFilter(C))` to `SimilarityFilter(Filter(p, C))`, so
/// the cheap predicate thins the input before distances are computed.
pub struct SimFilterAfterCheapFilters;

impl Rule for SimFilterAfterCheapFilters {
    fn name(&self) -> &str {
        "SimFilterAfterCheapFilters"
    }

    fn description(&self) -> &str {
        "Run cheap filters before a similarity filter"
    }

    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
        let LogicalPlan::Filter { predicate, input } = node else {
            return None;
        };
        let (filter, child) = similarity(input)?;
        Some(
            filter
                .clone()
                .over(LogicalPlan::filter(predicate.clone(), child.clone())),
        )
    }
}

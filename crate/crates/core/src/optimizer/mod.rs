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

//! Rule-ordered heuristic optimizer driven to a fixpoint.

mod rules;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use rules::{
    core_rules, CrossToEquiJoin, MergeFilters, PushFilterBelowProject, PushFilterIntoCross, SplitConjunctiveFilter,
};

use crate::plan::{validate, LogicalPlan};
use crate::registry::{KernelProfile, RuleOrigin};

pub const DEFAULT_MAX_ITERATIONS: usize = 10;

/// A named plan rewrite. `apply` sees one node with its children and
/// returns a replacement subtree, or `None` when it does not match. The
/// replacement must produce the same schema and the same multiset of rows.
pub trait Rule: Send + Sync {
    fn name(&self) -> &str;
    fn description(&self) -> &str {
        ""
    }
    fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan>;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OptimizeError {
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("rule {0} listed more than once")]
    DuplicateRule(String),
    #[error("rule {rule} produced an invalid plan: {reason}")]
    RuleViolation { rule: String, reason: String },
}

/// Ordered, duplicate-free rules resolved against a profile.
#[derive(Clone, Default)]
pub struct RuleList {
    rules: Vec<Arc<dyn Rule>>,
}

impl std::fmt::Debug for RuleList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

impl RuleList {
    pub fn new(rules: Vec<Arc<dyn Rule>>) -> Result<Self, OptimizeError> {
        for (i, rule) in rules.iter().enumerate() {
            if rules[..i].iter().any(|r| r.name().eq_ignore_ascii_case(rule.name())) {
                return Err(OptimizeError::DuplicateRule(rule.name().to_string()));
            }
        }
        Ok(RuleList { rules })
    }

    pub fn resolve<S: AsRef<str>>(names: &[S], profile: &KernelProfile) -> Result<Self, OptimizeError> {
        let rules = names
            .iter()
            .map(|n| {
                profile
                    .rule(n.as_ref())
                    .map(|r| r.rule.clone())
                    .ok_or_else(|| OptimizeError::UnknownRule(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        RuleList::new(rules)
    }

    /// Every rule the profile offers, core first, in registration order.
    pub fn all(profile: &KernelProfile) -> Self {
        RuleList {
            rules: profile.rules().iter().map(|r| r.rule.clone()).collect(),
        }
    }

    /// Only the core rules of the profile.
    pub fn core(profile: &KernelProfile) -> Self {
        RuleList {
            rules: profile
                .rules()
                .iter()
                .filter(|r| r.origin == RuleOrigin::Core)
                .map(|r| r.rule.clone())
                .collect(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.name().to_string()).collect()
    }

    pub fn rules(&self) -> &[Arc<dyn Rule>] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub rule: String,
    /// `0` for the root, then child indices, dot separated (`0.1.0`).
    pub path: String,
    pub summary: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OptimizeTrace {
    pub steps: Vec<TraceStep>,
    pub counts: BTreeMap<String, usize>,
    pub iterations: usize,
}

impl OptimizeTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Runs `rules` in list order, each over the whole tree in pre-order,
/// until an iteration applies nothing or `max_iterations` is reached.
pub fn optimize(
    plan: LogicalPlan,
    rules: &RuleList,
    max_iterations: usize,
) -> Result<(LogicalPlan, OptimizeTrace), OptimizeError> {
    let mut trace = OptimizeTrace::default();
    let mut plan = plan;
    if rules.is_empty() {
        return Ok((plan, trace));
    }
    for iteration in 1..=max_iterations {
        trace.iterations = iteration;
        let before = trace.steps.len();
        for rule in rules.rules() {
            let mut path = Vec::new();
            plan = rewrite(plan, rule.as_ref(), iteration, &mut path, &mut trace)?;
        }
        if trace.steps.len() == before {
            break;
        }
    }
    Ok((plan, trace))
}

fn rewrite(
    node: LogicalPlan,
    rule: &dyn Rule,
    iteration: usize,
    path: &mut Vec<usize>,
    trace: &mut OptimizeTrace,
) -> Result<LogicalPlan, OptimizeError> {
    let node = match rule.apply(&node) {
        Some(replacement) => {
            let violation = |reason: String| OptimizeError::RuleViolation {
                rule: rule.name().to_string(),
                reason,
            };
            let (before, after) = (node.schema(), replacement.schema());
            if before.columns() != after.columns() {
                return Err(violation(format!("schema changed from {before} to {after}")));
            }
            validate(&replacement).map_err(|e| violation(e.to_string()))?;
            trace.steps.push(TraceStep {
                iteration,
                rule: rule.name().to_string(),
                path: crate::executor::format_path(path),
                summary: format!("{} => {}", node.label(), replacement.label()),
            });
            *trace.counts.entry(rule.name().to_string()).or_default() += 1;
            replacement
        }
        None => node,
    };
    let (shell, children) = node.into_parts();
    let mut rewritten = Vec::with_capacity(children.len());
    for (i, child) in children.into_iter().enumerate() {
        path.push(i);
        rewritten.push(rewrite(child, rule, iteration, path, trace)?);
        path.pop();
    }
    Ok(shell.with_children(rewritten))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{BoundExpr, CmpOp};
    use crate::schema::{Column, Schema};
    use crate::types::{DataType, Value};

    fn scan(alias: &str) -> LogicalPlan {
        LogicalPlan::Scan {
            table: alias.into(),
            alias: alias.into(),
            schema: Schema::new(vec![Column::qualified(alias, "a", DataType::Int)]),
        }
    }

    fn pred(v: i64) -> BoundExpr {
        BoundExpr::compare(CmpOp::Eq, BoundExpr::column(0, "a", DataType::Int), BoundExpr::Literal(Value::Int(v)))
    }

    /// Swaps the two innermost filters of a filter pair, forever.
    struct Swap(&'static str);

    impl Rule for Swap {
        fn name(&self) -> &str {
            self.0
        }
        fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
            let LogicalPlan::Filter { predicate: p, input } = node else {
                return None;
            };
            let LogicalPlan::Filter { predicate: q, input: c } = input.as_ref() else {
                return None;
            };
            Some(LogicalPlan::filter(q.clone(), LogicalPlan::filter(p.clone(), (**c).clone())))
        }
    }

    struct Breaker;

    impl Rule for Breaker {
        fn name(&self) -> &str {
            "Breaker"
        }
        fn apply(&self, node: &LogicalPlan) -> Option<LogicalPlan> {
            match node {
                LogicalPlan::Filter { input, .. } => Some(LogicalPlan::cross((**input).clone(), scan("z"))),
                _ => None,
            }
        }
    }

    #[test]
    fn empty_list_is_identity() {
        let plan = LogicalPlan::filter(pred(1), scan("t"));
        let (out, trace) = optimize(plan.clone(), &RuleList::default(), 10).unwrap();
        assert_eq!(out, plan);
        assert!(trace.is_empty());
    }

    #[test]
    fn ping_pong_stops_at_max_iterations() {
        let plan = LogicalPlan::filter(pred(1), LogicalPlan::filter(pred(2), scan("t")));
        let rules = RuleList::new(vec![Arc::new(Swap("Swap")), Arc::new(Swap("Unswap"))]).unwrap();
        let (out, trace) = optimize(plan.clone(), &rules, 10).unwrap();
        assert_eq!(trace.iterations, 10);
        assert_eq!(trace.steps.len(), 20);
        assert_eq!(trace.counts["Swap"], 10);
        assert_eq!(out, plan);
    }

    #[test]
    fn schema_change_is_a_violation() {
        let plan = LogicalPlan::filter(pred(1), scan("t"));
        let rules = RuleList::new(vec![Arc::new(Breaker)]).unwrap();
        assert!(matches!(
            optimize(plan, &rules, 10),
            Err(OptimizeError::RuleViolation { rule, .. }) if rule == "Breaker"
        ));
    }

    #[test]
    fn resolve_rejects_unknown_and_duplicates() {
        let profile = KernelProfile::core();
        assert_eq!(
            RuleList::resolve(&["Nope"], &profile).unwrap_err(),
            OptimizeError::UnknownRule("Nope".into())
        );
        assert_eq!(
            RuleList::resolve(&["MergeFilters", "mergefilters"], &profile).unwrap_err(),
            OptimizeError::DuplicateRule("MergeFilters".into())
        );
        assert_eq!(RuleList::core(&profile).names().len(), 5);
    }
}

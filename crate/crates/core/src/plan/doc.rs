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


use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{join_condition, LogicalPlan};
use crate::cost::NodeCost;

/// Serialized plan tree. Field order is part of the wire contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub kind: String,
    pub label: String,
    pub attrs: BTreeMap<String, String>,
    pub estimated_rows: Option<f64>,
    pub estimated_cost: Option<f64>,
    pub children: Vec<PlanDoc>,
}

impl PlanDoc {
    /// Indented text rendering with per-node estimates.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&self.label);
        if let (Some(rows), Some(cost)) = (self.estimated_rows, self.estimated_cost) {
            out.push_str(&format!("  (rows={rows}, cost={cost})"));
        }
        out.push('\n');
        for child in &self.children {
            child.write_text(out, depth + 1);
        }
    }
}

/// Builds the document for `plan`, copying estimates from `annotation` when
/// it is given. The annotation must mirror the plan's shape.
pub fn serialize_plan(plan: &LogicalPlan, annotation: Option<&NodeCost>) -> PlanDoc {
    let mut attrs = BTreeMap::new();
    match plan {
        LogicalPlan::Scan { table, alias, .. } => {
            attrs.insert("table".to_string(), table.clone());
            attrs.insert("alias".to_string(), alias.clone());
        }
        LogicalPlan::Filter { predicate, .. } => {
            attrs.insert("predicate".to_string(), predicate.to_string());
        }
        LogicalPlan::Project { items, .. } => {
            let exprs: Vec<String> = items
                .iter()
                .map(|i| {
                    let text = i.expr.to_string();
                    if text == i.name {
                        text
                    } else {
                        format!("{text} AS {}", i.name)
                    }
                })
                .collect();
            attrs.insert("columns".to_string(), exprs.join(", "));
        }
        LogicalPlan::CrossProduct { .. } => {}
        LogicalPlan::EquiJoin { on, left, right } => {
            attrs.insert("on".to_string(), join_condition(on, &left.schema(), &right.schema()));
        }
        LogicalPlan::Extension { node, .. } => {
            attrs = node.attrs();
            attrs.insert("syntax".to_string(), node.syntax().to_string());
        }
    }
    let children = plan
        .children()
        .into_iter()
        .enumerate()
        .map(|(i, child)| serialize_plan(child, annotation.and_then(|a| a.children.get(i))))
        .collect();
    PlanDoc {
        kind: plan.kind().to_string(),
        label: plan.label(),
        attrs,
        estimated_rows: annotation.map(|a| a.rows),
        estimated_cost: annotation.map(|a| a.cost),
        children,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{Column, Schema};
    use crate::types::DataType;

    #[test]
    fn scan_document() {
        let plan = LogicalPlan::Scan {
            table: "t1".into(),
            alias: "t1".into(),
            schema: Schema::new(vec![Column::qualified("t1", "a", DataType::Int)]),
        };
        let doc = serialize_plan(&plan, None);
        assert_eq!(doc.kind, "Scan");
        assert_eq!(doc.label, "Scan t1");
        assert!(doc.children.is_empty());
        assert_eq!(doc.estimated_rows, None);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.starts_with(r#"{"kind":"Scan","label":"Scan t1","attrs":{"#));
        assert!(json.ends_with(r#""estimated_rows":null,"estimated_cost":null,"children":[]}"#));
    }
}

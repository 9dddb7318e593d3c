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

//! Plain-text output.

use qsim_core::executor::ResultSet;
use qsim_core::QueryResponse;

/// Aligned columns with a header rule and a row count.
pub fn table(result: &ResultSet) -> String {
    let header: Vec<String> = result.schema.columns().iter().map(|c| c.qualified_name()).collect();
    let body: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join(" | ").trim_end())
    };
    let mut out = line(&header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("{}\n", rule.join("-+-")));
    for row in &body {
        out.push_str(&line(row));
    }
    let n = body.len();
    out.push_str(&format!("({n} row{})\n", if n == 1 { "" } else { "s" }));
    out
}

pub fn explain(resp: &QueryResponse) -> String {
    let mut out = format!("initial plan (cost {}):\n", resp.cost_initial);
    out.push_str(&resp.initial_plan.render_text());
    out.push_str(&format!("optimized plan (cost {}):\n", resp.cost_optimized));
    out.push_str(&resp.optimized_plan.render_text());
    if !resp.applied_rules.is_empty() {
        out.push_str("applied rules:\n");
        for step in &resp.applied_rules {
            out.push_str(&format!("  [{}] {} at {}: {}\n", step.iteration, step.rule, step.path, step.summary));
        }
    }
    if resp.cost_backend != "builtin" {
        out.push_str(&format!("costs from {}\n", resp.cost_backend));
    }
    out.push('\n');
    out
}

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


use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;
use rusqlite::Connection;

use super::{CostError, EstimateRequest, EstimatorBackend};

/// Estimates through an in-memory SQLite database: loads the tables, runs
/// `ANALYZE`, and prices the `EXPLAIN QUERY PLAN` output as nested loops
/// (a full scan costs the table size, an index search `log2(n) + 1`).
#[derive(Debug, Clone, Copy, Default)]
pub struct SqliteBackend;

fn from_clause() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b(?:FROM|JOIN)\s+\(?\s*([a-z_][a-z0-9_]*)(?:\s+AS\s+([a-z_][a-z0-9_]*))?").expect("valid regex")
    })
}

fn loop_step() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(SCAN|SEARCH)\s+(?:TABLE\s+)?([A-Za-z_][A-Za-z0-9_]*)(?:\s+AS\s+([A-Za-z_][A-Za-z0-9_]*))?").expect("valid regex"))
}

fn db_error(e: rusqlite::Error) -> CostError {
    CostError::BackendUnavailable(format!("sqlite: {e}"))
}

impl SqliteBackend {
    /// Plan detail lines, in loop order.
    pub fn explain(&self, request: &EstimateRequest) -> Result<Vec<String>, CostError> {
        Ok(self.load_and_explain(request)?.0)
    }

    fn load_and_explain(&self, request: &EstimateRequest) -> Result<(Vec<String>, HashMap<String, f64>), CostError> {
        let conn = Connection::open_in_memory().map_err(db_error)?;
        conn.execute_batch(&request.ddl).map_err(db_error)?;
        conn.execute_batch(&format!("BEGIN;\n{}COMMIT;\nANALYZE;", request.inserts))
            .map_err(db_error)?;

        let mut rows_of = HashMap::new();
        let has_stats = conn
            .query_row(
                "SELECT count(*) FROM sqlite_master WHERE name = 'sqlite_stat1'",
                [],
                |r| r.get::<_, i64>(0),
            )
            .map_err(db_error)?
            > 0;
        if has_stats {
            let mut stmt = conn
                .prepare("SELECT tbl, stat FROM sqlite_stat1 WHERE idx IS NULL")
                .map_err(db_error)?;
            let stats = stmt
                .query_map([], |r| Ok((r.get::<_, String>(0)?, r.get::<_, String>(1)?)))
                .map_err(db_error)?;
            for stat in stats {
                let (table, stat) = stat.map_err(db_error)?;
                let n = stat
                    .split_whitespace()
                    .next()
                    .and_then(|s| s.parse::<f64>().ok())
                    .unwrap_or(0.0);
                rows_of.insert(table.to_ascii_lowercase(), n);
            }
        }

        let mut stmt = conn
            .prepare(&format!("EXPLAIN QUERY PLAN {}", request.query))
            .map_err(|e| CostError::BackendParseError(format!("sqlite rejected query: {e}")))?;
        let details = stmt
            .query_map([], |r| r.get::<_, String>(3))
            .map_err(db_error)?
            .collect::<Result<Vec<_>, _>>()
            .map_err(db_error)?;
        Ok((details, rows_of))
    }
}

/// Nested-loop price of the plan detail lines.
fn price(details: &[String], query: &str, rows_of: &HashMap<String, f64>) -> f64 {
    let mut alias_of: HashMap<String, String> = HashMap::new();
    for cap in from_clause().captures_iter(query) {
        let table = cap[1].to_ascii_lowercase();
        let alias = cap.get(2).map_or(table.clone(), |m| m.as_str().to_ascii_lowercase());
        alias_of.insert(alias, table);
    }
    let size = |name: &str| {
        let name = name.to_ascii_lowercase();
        let table = alias_of.get(&name).unwrap_or(&name);
        rows_of.get(table).copied().unwrap_or(0.0).max(1.0)
    };
    let mut outer = 1.0;
    let mut cost = 0.0;
    for detail in details {
        let Some(cap) = loop_step().captures(detail.trim()) else {
            continue;
        };
        let name = cap.get(3).unwrap_or_else(|| cap.get(2).expect("group 2 always matches")).as_str();
        let n = size(name);
        if &cap[1] == "SCAN" {
            cost += outer * n;
            outer *= n;
        } else {
            if detail.contains("AUTOMATIC") {
                cost += n;
            }
            cost += outer * (n.log2() + 1.0);
        }
    }
    f64::max(cost, 1.0)
}

impl EstimatorBackend for SqliteBackend {
    fn name(&self) -> &str {
        "sqlite"
    }

    fn estimate(&self, request: &EstimateRequest) -> Result<f64, CostError> {
        let (details, rows_of) = self.load_and_explain(request)?;
        Ok(price(&details, &request.query, &rows_of))
    }
}

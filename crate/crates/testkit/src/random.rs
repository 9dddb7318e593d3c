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

//! Random small catalogs and queries.

use rand::seq::IndexedRandom;
use rand::Rng;

use qsim_core::parser;
use qsim_core::plan::{build_logical, BoundExpr, CmpOp, LogicalPlan};
use qsim_core::types::{DataType, Value};
use qsim_core::{Catalog, KernelProfile};

const TABLES: [&str; 3] = ["r0", "r1", "r2"];
const ALIASES: [&str; 3] = ["a", "b", "c"];
const OPS: [&str; 6] = ["=", "!=", "<", "<=", ">", ">="];

pub struct RandomCase {
    pub sql: String,
    pub catalog: Catalog,
    pub plan: LogicalPlan,
    /// Whether a Filter was stacked over the query's projection, so that the
    /// plan no longer corresponds to `sql`.
    pub wrapped: bool,
}

/// Three tables of at most 8 rows with columns `k:int, x:int, s:str, f:float`.
pub fn random_catalog(rng: &mut impl Rng, profile: &KernelProfile) -> Catalog {
    let mut catalog = Catalog::new();
    for name in TABLES {
        let mut csv = String::from("k:int,x:int,s:str,f:float\n");
        for _ in 0..rng.random_range(0..=8) {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                rng.random_range(0..3),
                rng.random_range(0..6),
                ["p", "q", "r"].choose(rng).expect("non-empty"),
                [0.5, 1.5, 2.5].choose(rng).expect("non-empty"),
            ));
        }
        catalog.load_csv(name, &csv, profile).expect("generated csv loads");
    }
    catalog
}

fn leaf(rng: &mut impl Rng, aliases: &[&str]) -> String {
    let a = aliases.choose(rng).expect("non-empty");
    match rng.random_range(0..5) {
        0 if aliases.len() > 1 => {
            let b = aliases.choose(rng).expect("non-empty");
            let col = ["k", "x"].choose(rng).expect("non-empty");
            format!("{a}.{col} = {b}.{col}")
        }
        1 => format!("{a}.s {} '{}'", OPS.choose(rng).expect("non-empty"), ["p", "q"].choose(rng).expect("non-empty")),
        2 => format!("{a}.f {} {}", OPS.choose(rng).expect("non-empty"), ["1.0", "2", "0.5"].choose(rng).expect("non-empty")),
        _ => {
            let col = ["k", "x"].choose(rng).expect("non-empty");
            format!("{a}.{col} {} {}", OPS.choose(rng).expect("non-empty"), rng.random_range(0..5))
        }
    }
}

fn predicate(rng: &mut impl Rng, aliases: &[&str], depth: u32) -> String {
    if depth == 0 || rng.random_bool(0.4) {
        return leaf(rng, aliases);
    }
    let l = predicate(rng, aliases, depth - 1);
    let r = predicate(rng, aliases, depth - 1);
    if rng.random_bool(0.7) {
        format!("{l} AND {r}")
    } else {
        format!("({l} OR {r})")
    }
}

/// A random SELECT over one to three of the random tables.
pub fn random_query(rng: &mut impl Rng) -> String {
    let n = rng.random_range(1..=3);
    let aliases = &ALIASES[..n];
    let from: Vec<String> = aliases
        .iter()
        .map(|a| format!("{} {a}", TABLES.choose(rng).expect("non-empty")))
        .collect();
    let projection = if rng.random_bool(0.3) {
        "*".to_string()
    } else {
        let items: Vec<String> = (0..rng.random_range(1..=3))
            .map(|i| {
                let a = aliases.choose(rng).expect("non-empty");
                let col = ["k", "x", "s", "f"].choose(rng).expect("non-empty");
                if rng.random_bool(0.2) {
                    format!("{a}.x < 3 AS cmp{i}")
                } else {
                    format!("{a}.{col}")
                }
            })
            .collect();
        items.join(", ")
    };
    let mut sql = format!("SELECT {projection} FROM {}", from.join(", "));
    if rng.random_bool(0.85) {
        sql.push_str(" WHERE ");
        sql.push_str(&predicate(rng, aliases, 3));
    }
    sql
}

fn literal_for(rng: &mut impl Rng, ty: &DataType) -> Option<Value> {
    Some(match ty {
        DataType::Int => Value::Int(rng.random_range(0..5)),
        DataType::Float => Value::Float(1.0),
        DataType::Str => Value::Str("q".to_string()),
        DataType::Bool => Value::Bool(true),
        DataType::Ext(_) => return None,
    })
}

/// A random query and its logical plan over a fresh random catalog. Half of
/// the plans whose root is a projection get a Filter stacked on top, the
/// only shape that exercises pushing a filter below a projection.
pub fn random_case(rng: &mut impl Rng, profile: &KernelProfile) -> RandomCase {
    let catalog = random_catalog(rng, profile);
    let sql = random_query(rng);
    let stmt = parser::parse(&sql, profile).unwrap_or_else(|e| panic!("{sql}: {e}"));
    let mut plan = build_logical(&stmt, &catalog, profile).unwrap_or_else(|e| panic!("{sql}: {e}"));
    let mut wrapped = false;
    if rng.random_bool(0.5) {
        if let LogicalPlan::Project { items, .. } = &plan {
            let i = rng.random_range(0..items.len());
            let ty = items[i].expr.data_type();
            if let Some(lit) = literal_for(rng, &ty) {
                let op = if ty == DataType::Bool {
                    CmpOp::Eq
                } else {
                    *[CmpOp::Eq, CmpOp::Lt, CmpOp::GtEq].choose(rng).expect("non-empty")
                };
                let col = BoundExpr::column(i, items[i].name.clone(), ty);
                plan = LogicalPlan::filter(BoundExpr::compare(op, col, BoundExpr::Literal(lit)), plan);
                wrapped = true;
            }
        }
    }
    RandomCase {
        sql,
        catalog,
        plan,
        wrapped,
    }
}

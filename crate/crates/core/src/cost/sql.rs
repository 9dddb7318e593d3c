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


use serde::{Deserialize, Serialize};

use super::CostError;
use crate::catalog::Catalog;
use crate::plan::{BoundExpr, LogicalPlan};
use crate::registry::{KernelProfile, SqlApproxTarget};
use crate::schema::Schema;
use crate::types::{DataType, Value};

/// The three text blocks handed to an external estimator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqlTranslation {
    pub ddl: String,
    pub inserts: String,
    pub query: String,
}

struct Translator<'a> {
    profile: &'a KernelProfile,
    qualify: bool,
}

/// Renders `plan` as standard SQL plus DDL and INSERTs for every scanned
/// table. Extension constructs render through their syntax's SQL
/// approximation hook.
pub fn translate_to_sql(
    plan: &LogicalPlan,
    catalog: &Catalog,
    profile: &KernelProfile,
) -> Result<SqlTranslation, CostError> {
    let scans = plan.scans();
    let t = Translator {
        profile,
        qualify: scans.len() > 1,
    };
    let (items, body) = match plan {
        LogicalPlan::Project { items, input } => (Some(items), input.as_ref()),
        other => (None, other),
    };
    let mut conditions = Vec::new();
    let from = t.relation(body, &mut conditions)?;
    let select = match items {
        None => "*".to_string(),
        Some(items) => {
            let schema = body.schema();
            items
                .iter()
                .map(|item| match item.expr.first_infix() {
                    Some(_) => Ok("NULL".to_string()),
                    None => t.expr(&item.expr, &schema),
                })
                .collect::<Result<Vec<_>, _>>()?
                .join(", ")
        }
    };
    let mut query = format!("SELECT {select} FROM {from}");
    if !conditions.is_empty() {
        query.push_str(" WHERE ");
        query.push_str(&conditions.join(" AND "));
    }

    let mut tables: Vec<&str> = Vec::new();
    for (table, _) in scans {
        if !tables.contains(&table) {
            tables.push(table);
        }
    }
    let mut ddl = String::new();
    let mut inserts = String::new();
    for name in tables {
        let relation = catalog
            .get_table(name)
            .map_err(|_| CostError::UnknownTable(name.to_string()))?;
        let columns: Vec<String> = relation
            .schema()
            .columns()
            .iter()
            .map(|c| format!("{} {}", c.name, sql_type(&c.data_type)))
            .collect();
        ddl.push_str(&format!("CREATE TABLE {name} ({});\n", columns.join(", ")));
        for row in relation.rows() {
            let values: Vec<String> = row.iter().map(sql_literal).collect();
            inserts.push_str(&format!("INSERT INTO {name} VALUES ({});\n", values.join(", ")));
        }
    }
    Ok(SqlTranslation { ddl, inserts, query })
}

fn sql_type(t: &DataType) -> &'static str {
    match t {
        DataType::Int | DataType::Bool => "INTEGER",
        DataType::Float => "REAL",
        DataType::Str | DataType::Ext(_) => "TEXT",
    }
}

fn quote(text: &str) -> String {
    format!("'{}'", text.replace('\'', "''"))
}

fn sql_literal(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format!("{x:?}"),
        Value::Str(s) => quote(s),
        Value::Bool(b) => u8::from(*b).to_string(),
        Value::Ext(e) => quote(&e.render()),
    }
}

impl Translator<'_> {
    fn relation(&self, plan: &LogicalPlan, conditions: &mut Vec<String>) -> Result<String, CostError> {
        match plan {
            LogicalPlan::Scan { table, alias, .. } if table == alias => Ok(table.clone()),
            LogicalPlan::Scan { table, alias, .. } => Ok(format!("{table} AS {alias}")),
            LogicalPlan::Filter { predicate, input } => {
                let from = self.relation(input, conditions)?;
                conditions.push(self.expr(predicate, &input.schema())?);
                Ok(from)
            }
            LogicalPlan::CrossProduct { left, right } => {
                let l = self.relation(left, conditions)?;
                let r = self.relation(right, conditions)?;
                Ok(format!("{l} CROSS JOIN {}", nest(r)))
            }
            LogicalPlan::EquiJoin { on, left, right } => {
                let l = self.relation(left, conditions)?;
                let r = self.relation(right, conditions)?;
                let (ls, rs) = (left.schema(), right.schema());
                let condition: Vec<String> = on
                    .iter()
                    .map(|&(a, b)| format!("{} = {}", self.column(&ls, a), self.column(&rs, b)))
                    .collect();
                Ok(format!("{l} INNER JOIN {} ON {}", nest(r), condition.join(" AND ")))
            }
            LogicalPlan::Extension { node, inputs } if inputs.len() == 1 => {
                let hook = self
                    .profile
                    .sql_approximation(node.kind())
                    .ok_or_else(|| CostError::UntranslatableNode(node.kind().to_string()))?;
                let from = self.relation(&inputs[0], conditions)?;
                conditions.push(hook(SqlApproxTarget::Node(node.0.as_ref())));
                Ok(from)
            }
            other => Err(CostError::UntranslatableNode(other.kind().to_string())),
        }
    }

    fn column(&self, schema: &Schema, index: usize) -> String {
        match schema.column(index) {
            Some(c) if self.qualify => c.qualified_name(),
            Some(c) => c.name.clone(),
            None => format!("c{index}"),
        }
    }

    fn expr(&self, expr: &BoundExpr, schema: &Schema) -> Result<String, CostError> {
        Ok(match expr {
            BoundExpr::Column { index, .. } => self.column(schema, *index),
            BoundExpr::Literal(v) => sql_literal(v),
            BoundExpr::Logical { op, left, right } => {
                format!("({} {} {})", self.expr(left, schema)?, op.symbol(), self.expr(right, schema)?)
            }
            BoundExpr::Compare { .. } | BoundExpr::Infix { .. } if expr.first_infix().is_some() => {
                let op = expr.first_infix().expect("checked");
                let hook = self
                    .profile
                    .sql_approximation(op.name())
                    .ok_or_else(|| CostError::UntranslatableNode(format!("operator {}", op.name())))?;
                format!("({})", hook(SqlApproxTarget::Operator(op)))
            }
            BoundExpr::Compare { op, left, right } => {
                format!("{} {} {}", self.expr(left, schema)?, op.symbol(), self.expr(right, schema)?)
            }
            BoundExpr::Infix { .. } => unreachable!("infix expressions are handled above"),
        })
    }
}

fn nest(from: String) -> String {
    if from.contains(" JOIN ") {
        format!("({from})")
    } else {
        from
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::plan::build_logical;

    fn setup() -> (Catalog, KernelProfile) {
        let profile = KernelProfile::core();
        let mut catalog = Catalog::new();
        catalog.load_csv("t", "a:int,b:str\n1,it's\n", &profile).unwrap();
        catalog.load_csv("t1", "c:int,x:float\n1,0.5\n", &profile).unwrap();
        catalog.load_csv("t2", "c:int\n1\n", &profile).unwrap();
        (catalog, profile)
    }

    #[test]
    fn single_table_projection() {
        let (catalog, profile) = setup();
        let plan = build_logical(&parse("SELECT a FROM t", &profile).unwrap(), &catalog, &profile).unwrap();
        let sql = translate_to_sql(&plan, &catalog, &profile).unwrap();
        assert_eq!(sql.query, "SELECT a FROM t");
        assert_eq!(sql.ddl, "CREATE TABLE t (a INTEGER, b TEXT);\n");
        assert_eq!(sql.inserts, "INSERT INTO t VALUES (1, 'it''s');\n");
    }

    #[test]
    fn equi_join_renders_inner_join() {
        let (catalog, profile) = setup();
        let t1 = catalog.get_table("t1").unwrap();
        let t2 = catalog.get_table("t2").unwrap();
        let plan = LogicalPlan::equi_join(
            vec![(0, 0)],
            LogicalPlan::Scan {
                table: "t1".into(),
                alias: "t1".into(),
                schema: t1.schema().requalify("t1"),
            },
            LogicalPlan::Scan {
                table: "t2".into(),
                alias: "t2".into(),
                schema: t2.schema().requalify("t2"),
            },
        );
        let sql = translate_to_sql(&plan, &catalog, &profile).unwrap();
        assert_eq!(sql.query, "SELECT * FROM t1 INNER JOIN t2 ON t1.c = t2.c");
        assert_eq!(sql.ddl.lines().count(), 2);
    }

    #[test]
    fn filters_become_where_conjuncts() {
        let (catalog, profile) = setup();
        let q = "SELECT * FROM t1, t2 WHERE t1.c = t2.c AND (t1.x < 1 OR t1.c != 3)";
        let plan = build_logical(&parse(q, &profile).unwrap(), &catalog, &profile).unwrap();
        let sql = translate_to_sql(&plan, &catalog, &profile).unwrap();
        assert_eq!(
            sql.query,
            "SELECT t1.c, t1.x, t2.c FROM t1 CROSS JOIN t2 WHERE (t1.c = t2.c AND (t1.x < 1.0 OR t1.c != 3))"
        );
    }
}

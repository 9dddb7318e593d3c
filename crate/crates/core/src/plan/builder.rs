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


use super::{validate, BoundExpr, CmpOp, InfixRef, LogicalOp, LogicalPlan, PlanError, ProjectItem};
use crate::catalog::Catalog;
use crate::parser::{AstExpr, AstStatement, BinaryOp, ExprKind, Position, Projection};
use crate::registry::KernelProfile;
use crate::schema::{ResolveError, Schema};
use crate::types::{DataType, Value};

/// Builds `Project(Filter?(Cross(...)))` over left-deep cross products in
/// FROM order, then runs the analyzer hooks of the syntax the statement
/// keyword admits.
pub fn build_logical(stmt: &AstStatement, catalog: &Catalog, profile: &KernelProfile) -> Result<LogicalPlan, PlanError> {
    let mut plan: Option<LogicalPlan> = None;
    for table in &stmt.from {
        let relation = catalog
            .get_table(&table.name)
            .map_err(|_| PlanError::UnknownTable(table.name.clone()))?;
        let alias = table.binding().to_string();
        let scan = LogicalPlan::Scan {
            table: relation.name().to_string(),
            schema: relation.schema().requalify(&alias),
            alias,
        };
        plan = Some(match plan {
            None => scan,
            Some(left) => LogicalPlan::cross(left, scan),
        });
    }
    let mut plan = plan.ok_or_else(|| PlanError::Invalid("empty FROM list".to_string()))?;
    let schema = plan.schema();
    let binder = Binder { schema: &schema, profile };

    if let Some(selection) = &stmt.selection {
        let predicate = binder.bind(selection)?;
        expect_bool(&predicate, selection.pos)?;
        plan = LogicalPlan::filter(predicate, plan);
    }

    let items = match &stmt.projection {
        Projection::Star => {
            let qualified = stmt.from.len() > 1;
            schema
                .columns()
                .iter()
                .enumerate()
                .map(|(i, c)| ProjectItem {
                    expr: BoundExpr::column(i, c.qualified_name(), c.data_type.clone()),
                    name: if qualified { c.qualified_name() } else { c.name.clone() },
                })
                .collect()
        }
        Projection::Items(items) => items
            .iter()
            .map(|item| {
                Ok(ProjectItem {
                    expr: binder.bind(&item.expr)?,
                    name: item.alias.clone().unwrap_or_else(|| item.expr.to_string()),
                })
            })
            .collect::<Result<Vec<_>, PlanError>>()?,
    };
    plan = LogicalPlan::project(items, plan);

    if let Some(admitted) = profile.statement_keyword(&stmt.keyword) {
        for (syntax, hook) in profile.analyzer_hooks() {
            if syntax == admitted {
                plan = hook(plan)?;
            }
        }
    }
    validate(&plan)?;
    Ok(plan)
}

fn expect_bool(expr: &BoundExpr, pos: Position) -> Result<(), PlanError> {
    match expr.data_type() {
        DataType::Bool => Ok(()),
        other => Err(PlanError::TypeMismatch {
            pos,
            expected: "bool".to_string(),
            found: other.to_string(),
        }),
    }
}

struct Binder<'a> {
    schema: &'a Schema,
    profile: &'a KernelProfile,
}

impl Binder<'_> {
    fn bind(&self, expr: &AstExpr) -> Result<BoundExpr, PlanError> {
        match &expr.kind {
            ExprKind::Column { qualifier, name } => {
                let written = match qualifier {
                    Some(q) => format!("{q}.{name}"),
                    None => name.clone(),
                };
                let index = self.schema.resolve(qualifier.as_deref(), name).map_err(|e| match e {
                    ResolveError::Unknown => PlanError::UnknownColumn {
                        name: written.clone(),
                        pos: expr.pos,
                    },
                    ResolveError::Ambiguous => PlanError::AmbiguousColumn {
                        name: written.clone(),
                        pos: expr.pos,
                    },
                })?;
                let column = &self.schema.columns()[index];
                Ok(BoundExpr::column(index, column.qualified_name(), column.data_type.clone()))
            }
            ExprKind::Literal(v) | ExprKind::ExtLiteral { value: v, .. } => Ok(BoundExpr::Literal(v.clone())),
            ExprKind::Binary { op, left, right } => {
                let l = self.bind(left)?;
                let r = self.bind(right)?;
                match op {
                    BinaryOp::And | BinaryOp::Or => {
                        expect_bool(&l, left.pos)?;
                        expect_bool(&r, right.pos)?;
                        let op = if *op == BinaryOp::And { LogicalOp::And } else { LogicalOp::Or };
                        Ok(BoundExpr::Logical {
                            op,
                            left: Box::new(l),
                            right: Box::new(r),
                        })
                    }
                    BinaryOp::Infix(name) => {
                        let registered = self.profile.infix_operator(name).ok_or_else(|| {
                            PlanError::Invalid(format!("operator {name} is not registered"))
                        })?;
                        let data_type = registered
                            .result_type(&l.data_type(), &r.data_type())
                            .map_err(|reason| PlanError::TypeMismatch {
                                pos: expr.pos,
                                expected: reason,
                                found: format!("{} {name} {}", l.data_type(), r.data_type()),
                            })?;
                        Ok(BoundExpr::Infix {
                            op: InfixRef(registered.clone()),
                            left: Box::new(l),
                            right: Box::new(r),
                            data_type,
                        })
                    }
                    cmp => {
                        let op = match cmp {
                            BinaryOp::Eq => CmpOp::Eq,
                            BinaryOp::NotEq => CmpOp::NotEq,
                            BinaryOp::Lt => CmpOp::Lt,
                            BinaryOp::LtEq => CmpOp::LtEq,
                            BinaryOp::Gt => CmpOp::Gt,
                            _ => CmpOp::GtEq,
                        };
                        let (l, r) = widen(l, r);
                        let (lt, rt) = (l.data_type(), r.data_type());
                        if !(lt.accepts(&rt) || rt.accepts(&lt)) {
                            return Err(PlanError::TypeMismatch {
                                pos: right.pos,
                                expected: lt.to_string(),
                                found: rt.to_string(),
                            });
                        }
                        if op.is_range() && !lt.is_ordered() {
                            return Err(PlanError::TypeMismatch {
                                pos: left.pos,
                                expected: "ordered type (int, float, str)".to_string(),
                                found: lt.to_string(),
                            });
                        }
                        Ok(BoundExpr::compare(op, l, r))
                    }
                }
            }
        }
    }
}

/// An integer literal compared with a float operand is read as a float.
fn widen(l: BoundExpr, r: BoundExpr) -> (BoundExpr, BoundExpr) {
    let to_float = |e: BoundExpr| match e {
        BoundExpr::Literal(Value::Int(i)) => BoundExpr::Literal(Value::Float(i as f64)),
        other => other,
    };
    match (l.data_type(), r.data_type()) {
        (DataType::Int, DataType::Float) if matches!(l, BoundExpr::Literal(_)) => (to_float(l), r),
        (DataType::Float, DataType::Int) if matches!(r, BoundExpr::Literal(_)) => (l, to_float(r)),
        _ => (l, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::schema::Column;

    fn catalog() -> (Catalog, KernelProfile) {
        let profile = KernelProfile::core();
        let mut catalog = Catalog::new();
        catalog.load_csv("t", "a:int,b:str\n1,x\n2,y\n", &profile).unwrap();
        catalog.load_csv("t1", "c:int,a:int\n1,1\n", &profile).unwrap();
        catalog.load_csv("t2", "c:int,f:float\n1,0.5\n", &profile).unwrap();
        (catalog, profile)
    }

    fn build(sql: &str) -> Result<LogicalPlan, PlanError> {
        let (catalog, profile) = catalog();
        build_logical(&parse(sql, &profile).unwrap(), &catalog, &profile)
    }

    fn scan(table: &str, cols: &[(&str, DataType)]) -> LogicalPlan {
        LogicalPlan::Scan {
            table: table.into(),
            alias: table.into(),
            schema: Schema::new(
                cols.iter()
                    .map(|(n, t)| Column::qualified(table, *n, t.clone()))
                    .collect(),
            )
            .with_relation_name(table),
        }
    }

    #[test]
    fn single_column_projection() {
        let expected = LogicalPlan::project(
            vec![ProjectItem {
                expr: BoundExpr::column(0, "t.a", DataType::Int),
                name: "a".into(),
            }],
            scan("t", &[("a", DataType::Int), ("b", DataType::Str)]),
        );
        assert_eq!(build("SELECT a FROM t").unwrap(), expected);
    }

    #[test]
    fn star_over_filtered_cross() {
        let plan = build("SELECT * FROM t1, t2 WHERE t1.c = t2.c").unwrap();
        let t1 = scan("t1", &[("c", DataType::Int), ("a", DataType::Int)]);
        let t2 = scan("t2", &[("c", DataType::Int), ("f", DataType::Float)]);
        let pred = BoundExpr::compare(
            CmpOp::Eq,
            BoundExpr::column(0, "t1.c", DataType::Int),
            BoundExpr::column(2, "t2.c", DataType::Int),
        );
        let LogicalPlan::Project { items, input } = plan else {
            panic!("expected Project root");
        };
        assert_eq!(*input, LogicalPlan::filter(pred, LogicalPlan::cross(t1, t2)));
        let names: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, ["t1.c", "t1.a", "t2.c", "t2.f"]);
    }

    #[test]
    fn aliases_and_labels() {
        let plan = build("SELECT a AS x, a = 1, t.b FROM t").unwrap();
        assert_eq!(
            plan.schema(),
            Schema::new(vec![
                Column::new("x", DataType::Int),
                Column::new("a = 1", DataType::Bool),
                Column::new("t.b", DataType::Str),
            ])
        );
    }

    #[test]
    fn resolution_errors() {
        assert_eq!(build("SELECT a FROM nope"), Err(PlanError::UnknownTable("nope".into())));
        assert!(matches!(build("SELECT zz FROM t"), Err(PlanError::UnknownColumn { .. })));
        assert!(matches!(
            build("SELECT c FROM t1, t2"),
            Err(PlanError::AmbiguousColumn { pos: Position { line: 1, col: 8 }, .. })
        ));
        assert!(matches!(build("SELECT * FROM t WHERE a = 'x'"), Err(PlanError::TypeMismatch { .. })));
        assert!(matches!(build("SELECT * FROM t WHERE a"), Err(PlanError::TypeMismatch { .. })));
        assert!(matches!(
            build("SELECT * FROM t1, t2 WHERE t1.a = t2.f"),
            Err(PlanError::TypeMismatch { .. })
        ));
        assert!(matches!(
            build("SELECT * FROM t WHERE (a = 1) < (a = 2)"),
            Err(PlanError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn int_literal_widens_against_float() {
        let plan = build("SELECT * FROM t2 WHERE f < 1").unwrap();
        let LogicalPlan::Project { input, .. } = plan else { panic!() };
        let LogicalPlan::Filter { predicate, .. } = *input else { panic!() };
        assert_eq!(
            predicate,
            BoundExpr::compare(
                CmpOp::Lt,
                BoundExpr::column(1, "t2.f", DataType::Float),
                BoundExpr::Literal(Value::Float(1.0))
            )
        );
    }
}

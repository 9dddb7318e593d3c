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


use proptest::prelude::*;
use qsim_core::cost::{estimate, NodeCost};
use qsim_core::parser::parse;
use qsim_core::plan::{build_logical, BoundExpr, CmpOp, LogicalPlan};
use qsim_core::types::Value;
use qsim_core::{Catalog, KernelProfile};

fn table(rows: usize) -> String {
    let mut csv = String::from("a:int,c:int\n");
    for i in 0..rows {
        csv.push_str(&format!("{i},{}\n", i % 10));
    }
    csv
}

fn catalog(n1: usize, n2: usize) -> Catalog {
    let p = KernelProfile::core();
    let mut c = Catalog::new();
    c.load_csv("t1", &table(n1), &p).unwrap();
    c.load_csv("t2", &table(n2), &p).unwrap();
    c
}

fn scan(catalog: &Catalog, name: &str) -> LogicalPlan {
    let rel = catalog.get_table(name).unwrap();
    LogicalPlan::Scan {
        table: name.to_string(),
        alias: name.to_string(),
        schema: rel.schema().requalify(name),
    }
}

fn col(plan: &LogicalPlan, name: &str) -> BoundExpr {
    let schema = plan.schema();
    let (i, c) = schema
        .columns()
        .iter()
        .enumerate()
        .find(|(_, c)| c.qualified_name() == name)
        .unwrap();
    BoundExpr::column(i, name, c.data_type.clone())
}

#[test]
fn scan_costs_its_row_count() {
    let c = catalog(100, 50);
    let est = estimate(&scan(&c, "t1"), &c).unwrap();
    assert_eq!((est.root.rows, est.root.cost, est.total_cost), (100.0, 100.0, 100.0));
}

#[test]
fn equality_filter_keeps_a_tenth() {
    let c = catalog(100, 50);
    let s = scan(&c, "t1");
    let pred = BoundExpr::compare(CmpOp::Eq, col(&s, "t1.a"), BoundExpr::Literal(Value::Int(5)));
    let est = estimate(&LogicalPlan::filter(pred, s), &c).unwrap();
    // 0.1 * 100 rows out; 100 inputs at unit predicate cost, plus the scan
    assert_eq!(est.root.rows, 10.0);
    assert_eq!(est.root.cost, 100.0);
    assert_eq!(est.total_cost, 200.0);
}

#[test]
fn equi_join_is_cheaper_than_cross() {
    let c = catalog(100, 50);
    let cross = LogicalPlan::cross(scan(&c, "t1"), scan(&c, "t2"));
    let join = LogicalPlan::equi_join(vec![(1, 1)], scan(&c, "t1"), scan(&c, "t2"));
    let ec = estimate(&cross, &c).unwrap();
    let ej = estimate(&join, &c).unwrap();
    assert_eq!((ec.root.rows, ec.root.cost), (5000.0, 5000.0));
    // 0.05 * 100 * 50 rows; build 100 + probe 50 + emit 250
    assert_eq!((ej.root.rows, ej.root.cost), (250.0, 400.0));
    assert!(ej.total_cost < ec.total_cost);
}

#[test]
fn range_and_disjunction_selectivities() {
    let c = catalog(100, 50);
    let s = scan(&c, "t1");
    let lt = BoundExpr::compare(CmpOp::Lt, col(&s, "t1.a"), BoundExpr::Literal(Value::Int(5)));
    let ne = BoundExpr::compare(CmpOp::NotEq, col(&s, "t1.c"), BoundExpr::Literal(Value::Int(5)));
    let or = BoundExpr::Logical {
        op: qsim_core::plan::LogicalOp::Or,
        left: Box::new(lt.clone()),
        right: Box::new(ne.clone()),
    };
    let rows = |p: BoundExpr| estimate(&LogicalPlan::filter(p, s.clone()), &c).unwrap().root;
    assert_eq!(rows(lt.clone()).rows, 30.0);
    assert_eq!(rows(ne.clone()).rows, 90.0);
    // 0.3 + 0.9 saturates at 1
    assert_eq!(rows(or).rows, 100.0);
    let and = rows(BoundExpr::and(lt, ne));
    // ceil(0.27 * 100); two comparisons cost 2 per row
    assert_eq!((and.rows, and.cost), (27.0, 200.0));
}

fn shapes(c: &Catalog) -> Vec<LogicalPlan> {
    let p = KernelProfile::core();
    [
        "SELECT * FROM t1",
        "SELECT a FROM t1 WHERE a < 10",
        "SELECT * FROM t1, t2 WHERE t1.c = t2.c",
        "SELECT t1.a FROM t1, t2 WHERE t1.c = t2.c AND t2.a != 3 OR t1.a = 1",
    ]
    .iter()
    .map(|q| build_logical(&parse(q, &p).unwrap(), c, &p).unwrap())
    .collect()
}

fn rows_never_decrease(small: &NodeCost, big: &NodeCost) -> bool {
    small.rows <= big.rows
        && small.children.len() == big.children.len()
        && small.children.iter().zip(&big.children).all(|(s, b)| rows_never_decrease(s, b))
}

proptest! {
    #[test]
    fn doubling_a_table_never_lowers_estimates(n1 in 0usize..60, n2 in 0usize..60) {
        let small = catalog(n1, n2);
        let big = catalog(2 * n1, n2);
        for (ps, pb) in shapes(&small).iter().zip(shapes(&big)) {
            let es = estimate(ps, &small).unwrap();
            let eb = estimate(&pb, &big).unwrap();
            prop_assert!(rows_never_decrease(&es.root, &eb.root));
            prop_assert!(es.total_cost <= eb.total_cost);
        }
    }

    #[test]
    fn pushing_a_filter_into_a_cross_never_costs_more(n1 in 0usize..80, n2 in 1usize..80, k in 0i64..10, op in 0usize..4) {
        let c = catalog(n1, n2);
        let (l, r) = (scan(&c, "t1"), scan(&c, "t2"));
        let cmp = [CmpOp::Eq, CmpOp::Lt, CmpOp::NotEq, CmpOp::GtEq][op];
        let pred = BoundExpr::compare(cmp, col(&l, "t1.a"), BoundExpr::Literal(Value::Int(k)));
        let above = LogicalPlan::filter(pred.clone(), LogicalPlan::cross(l.clone(), r.clone()));
        let below = LogicalPlan::cross(LogicalPlan::filter(pred, l), r);
        prop_assert!(estimate(&below, &c).unwrap().total_cost <= estimate(&above, &c).unwrap().total_cost);
    }

    #[test]
    fn equi_join_keeps_the_filtered_cross_estimate(n1 in 0usize..80, n2 in 0usize..80) {
        let c = catalog(n1, n2);
        let cross = LogicalPlan::cross(scan(&c, "t1"), scan(&c, "t2"));
        let eq = BoundExpr::compare(CmpOp::Eq, col(&cross, "t1.c"), col(&cross, "t2.c"));
        let filtered = estimate(&LogicalPlan::filter(eq, cross), &c).unwrap();
        let join = estimate(&LogicalPlan::equi_join(vec![(1, 1)], scan(&c, "t1"), scan(&c, "t2")), &c).unwrap();
        prop_assert_eq!(filtered.root.rows, join.root.rows);
    }
}

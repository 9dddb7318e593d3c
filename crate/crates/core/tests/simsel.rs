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


use qsim_core::plan::LogicalPlan;
use qsim_core::simsel::{SimilarityFilter, DISTANCE_EVALS, NODE_KIND};
use qsim_core::types::Value;
use qsim_core::{run_query, QueryOptions};
use qsim_testkit::{all_rule_names, assert_multiset_eq, evaluate_sql, fixture_catalog, full_profile, golden_suite};

const SIM_JOIN_QUERY: &str = "SIMSELECT * FROM t1, t2 WHERE t1.c=t2.c AND t1.v TO [1,2,3,4] < 10";

fn sim_join_rules() -> Vec<String> {
    [
        "SplitConjunctiveFilter",
        "PushFilterIntoCross",
        "CrossToEquiJoin",
        "MergeFilters",
        "PushSimFilterIntoCross",
        "SimFilterAfterCheapFilters",
    ]
    .map(String::from)
    .to_vec()
}

fn with_rules(rules: Vec<String>) -> QueryOptions {
    QueryOptions {
        rules,
        ..QueryOptions::default()
    }
}

/// Scans below the first node of `kind` found in pre-order.
fn scans_under(plan: &LogicalPlan, kind: &str) -> Option<Vec<String>> {
    if plan.kind() == kind {
        return Some(plan.scans().iter().map(|(t, _)| t.to_string()).collect());
    }
    plan.children().into_iter().find_map(|c| scans_under(c, kind))
}

#[test]
fn sim_join_matches_oracle_and_pushes_similarity_to_t1() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let expected = evaluate_sql(SIM_JOIN_QUERY, &catalog, &profile).unwrap();

    let plain = run_query(SIM_JOIN_QUERY, &catalog, &profile, &with_rules(vec![])).unwrap();
    assert_multiset_eq(&plain.result.rows, &expected).unwrap();
    // every pair of the cross product is tested once
    assert_eq!(plain.result.stats.counter(DISTANCE_EVALS), 100 * 50);

    let opt = run_query(SIM_JOIN_QUERY, &catalog, &profile, &with_rules(sim_join_rules())).unwrap();
    assert_multiset_eq(&opt.result.rows, &expected).unwrap();
    assert_eq!(scans_under(&opt.optimized, "EquiJoin").unwrap(), ["t1", "t2"]);
    assert_eq!(scans_under(&opt.optimized, NODE_KIND).unwrap(), ["t1"]);
    assert_eq!(opt.result.stats.counter(DISTANCE_EVALS), 100);
    assert!(opt.response.cost_optimized < opt.response.cost_initial);
}

#[test]
fn initial_plan_places_similarity_under_the_remaining_filter() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let out = run_query(SIM_JOIN_QUERY, &catalog, &profile, &with_rules(vec![])).unwrap();
    let kinds: Vec<String> = {
        let mut v = Vec::new();
        out.initial.walk(&mut |n| v.push(n.kind().to_string()));
        v
    };
    assert_eq!(kinds, ["Project", "Filter", NODE_KIND, "CrossProduct", "Scan", "Scan"]);
}

fn l2(v: &Value, q: [f64; 4]) -> f64 {
    let comps = match v {
        Value::Ext(e) => e.to_json(),
        _ => panic!("not a vector"),
    };
    comps
        .as_array()
        .unwrap()
        .iter()
        .zip(q)
        .map(|(a, b)| (a.as_f64().unwrap() - b).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn threshold_admitting_seventeen_rows() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let t1 = catalog.get_table("t1").unwrap();
    let q = [5.0, 5.0, 5.0, 5.0];
    let mut dists: Vec<f64> = t1.rows().iter().map(|r| l2(&r[4], q)).collect();
    dists.sort_by(f64::total_cmp);
    assert!(dists[16] < dists[17], "fixture has a tie at the cut");
    let threshold = (dists[16] + dists[17]) / 2.0;

    let sql = format!("SIMSELECT id FROM t1 WHERE v TO [5,5,5,5] < {threshold}");
    let out = run_query(&sql, &catalog, &profile, &with_rules(vec![])).unwrap();
    assert_eq!(out.result.rows.len(), 17);
    assert_eq!(out.result.stats.counter(DISTANCE_EVALS), 100);
    assert_multiset_eq(&out.result.rows, &evaluate_sql(&sql, &catalog, &profile).unwrap()).unwrap();
}

#[test]
fn similarity_rules_never_add_distance_evaluations() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let core: Vec<String> = all_rule_names(&qsim_core::KernelProfile::core());
    let full = all_rule_names(&profile);
    let mut strictly_fewer = 0;
    for q in golden_suite().iter().filter(|q| q.sql.starts_with("SIMSELECT")) {
        let without = run_query(&q.sql, &catalog, &profile, &with_rules(core.clone())).unwrap();
        let with = run_query(&q.sql, &catalog, &profile, &with_rules(full.clone())).unwrap();
        assert_multiset_eq(&with.result.rows, &without.result.rows).unwrap_or_else(|e| panic!("{}: {e}", q.name));
        let (a, b) = (
            with.result.stats.counter(DISTANCE_EVALS),
            without.result.stats.counter(DISTANCE_EVALS),
        );
        assert!(a <= b, "{}: {a} > {b}", q.name);
        strictly_fewer += usize::from(a < b);
    }
    assert!(strictly_fewer > 0);
}

#[test]
fn greater_than_stays_an_ordinary_predicate() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let sql = "SIMSELECT id FROM t1 WHERE v TO [5,5,5,5] > 9";
    let out = run_query(sql, &catalog, &profile, &with_rules(vec![])).unwrap();
    let mut found = false;
    out.initial.walk(&mut |n| {
        if let LogicalPlan::Extension { node, .. } = n {
            found |= node.downcast::<SimilarityFilter>().is_some();
        }
    });
    assert!(!found);
    assert_multiset_eq(&out.result.rows, &evaluate_sql(sql, &catalog, &profile).unwrap()).unwrap();
}

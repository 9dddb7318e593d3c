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


use qsim_core::cost::estimate;
use qsim_core::optimizer::{optimize, RuleList};
use qsim_core::parser::parse;
use qsim_core::plan::{build_logical, LogicalPlan};
use qsim_core::KernelProfile;
use qsim_testkit::{
    assert_multiset_eq, core_rule_names, evaluate_plan, evaluate_sql, fixture_catalog, full_profile, random_case,
    seeded_rng,
};

fn rules(names: &[&str], profile: &KernelProfile) -> RuleList {
    RuleList::resolve(names, profile).unwrap()
}

#[test]
fn join_query_rewrites_to_filtered_equi_join() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let sql = "SELECT * FROM t1, t2 WHERE t1.c = t2.c AND t1.a < 3";
    let plan = build_logical(&parse(sql, &profile).unwrap(), &catalog, &profile).unwrap();
    let list = rules(
        &["SplitConjunctiveFilter", "PushFilterIntoCross", "CrossToEquiJoin", "MergeFilters"],
        &profile,
    );
    let (out, trace) = optimize(plan.clone(), &list, 10).unwrap();
    assert_eq!(
        out.display_tree(),
        "Project t1.id, t1.c, t1.a, t1.s, t1.v, t2.id, t2.c, t2.b, t2.tag\n\
         \x20 EquiJoin t1.c = t2.c\n\
         \x20   Filter t1.a < 3\n\
         \x20     Scan t1\n\
         \x20   Scan t2\n"
    );
    assert!(!trace.is_empty());
    assert_eq!(out.schema(), plan.schema());
}

#[test]
fn equality_inside_a_conjunction_needs_a_split_first() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let sql = "SELECT * FROM t1, t2 WHERE t1.c = t2.c AND t1.a < 3";
    let plan = build_logical(&parse(sql, &profile).unwrap(), &catalog, &profile).unwrap();
    let (out, trace) = optimize(plan.clone(), &rules(&["CrossToEquiJoin"], &profile), 10).unwrap();
    assert_eq!(out, plan);
    assert!(trace.is_empty());
}

#[test]
fn rule_order_changes_the_estimated_cost() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let sql = "SELECT * FROM t1, t2 WHERE t1.c = t2.c AND t1.a < 3";
    let plan = build_logical(&parse(sql, &profile).unwrap(), &catalog, &profile).unwrap();
    let cost = |names: &[&str], iters| {
        let (out, _) = optimize(plan.clone(), &rules(names, &profile), iters).unwrap();
        estimate(&out, &catalog).unwrap().total_cost
    };
    let canonical = ["SplitConjunctiveFilter", "PushFilterIntoCross", "CrossToEquiJoin"];
    let reordered = ["CrossToEquiJoin", "SplitConjunctiveFilter", "PushFilterIntoCross"];
    // a single pass exposes the order; at the fixpoint both orders converge
    assert!(cost(&reordered, 1) > cost(&canonical, 1));
    assert_eq!(cost(&reordered, 10), cost(&canonical, 10));
}

#[test]
fn empty_rule_list_is_identity_on_the_suite() {
    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    for q in qsim_testkit::golden_suite() {
        let plan = build_logical(&parse(&q.sql, &profile).unwrap(), &catalog, &profile).unwrap();
        let (out, trace) = optimize(plan.clone(), &RuleList::new(vec![]).unwrap(), 10).unwrap();
        assert_eq!(out, plan, "{}", q.name);
        assert!(trace.is_empty());
    }
}

fn check_rewrite(label: &str, before: &LogicalPlan, after: &LogicalPlan, catalog: &qsim_core::Catalog) {
    assert_eq!(after.schema(), before.schema(), "{label}");
    let expected = evaluate_plan(before, catalog).unwrap();
    let got = evaluate_plan(after, catalog).unwrap();
    assert_multiset_eq(&got, &expected).unwrap_or_else(|e| panic!("{label}: {e}"));
}

#[test]
fn core_rules_preserve_schema_and_results_on_random_plans() {
    let profile = KernelProfile::core();
    let names = core_rule_names();
    let mut rng = seeded_rng(4);
    let mut fired = vec![0usize; names.len()];
    for case_no in 0..200 {
        let case = random_case(&mut rng, &profile);
        if !case.wrapped {
            let oracle = evaluate_sql(&case.sql, &case.catalog, &profile).unwrap();
            let naive = evaluate_plan(&case.plan, &case.catalog).unwrap();
            assert_multiset_eq(&naive, &oracle).unwrap_or_else(|e| panic!("{}: {e}", case.sql));
        }
        // each rule alone, on the built plan and on its fully split form
        let (split, _) = optimize(case.plan.clone(), &rules(&["SplitConjunctiveFilter"], &profile), 10).unwrap();
        for start in [&case.plan, &split] {
            for (i, name) in names.iter().enumerate() {
                let (out, trace) = optimize(start.clone(), &rules(&[name], &profile), 10).unwrap();
                fired[i] += trace.steps.len();
                check_rewrite(&format!("#{case_no} {name} on {}", case.sql), start, &out, &case.catalog);
            }
        }
        let (out, _) = optimize(case.plan.clone(), &RuleList::core(&profile), 10).unwrap();
        check_rewrite(&format!("#{case_no} all on {}", case.sql), &case.plan, &out, &case.catalog);
    }
    // every rule actually rewrote something
    assert!(fired.iter().all(|&n| n > 0), "{names:?} fired {fired:?}");
}

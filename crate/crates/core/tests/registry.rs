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


use qsim_core::parser::{parse, ParseError};
use qsim_core::registry::{EntryPoint, RegistryEntry, RegistryError, SyntaxId};
use qsim_core::simsel::SYNTAX;
use qsim_core::{run_query, QueryOptions, Registry, Stage};
use qsim_testkit::{fixture_catalog, full_profile, golden_suite};

const SIM_JOIN_QUERY: &str = "SIMSELECT * FROM t1, t2 WHERE t1.c=t2.c AND t1.v TO [1,2,3,4] < 10";

#[test]
fn sim_join_follows_the_syntax_switch() {
    let catalog = fixture_catalog(&full_profile());
    let mut reg = Registry::with_builtin_extensions();
    reg.set_syntax_enabled(SYNTAX, false).unwrap();
    let off = reg.build_profile().unwrap();
    assert!(matches!(
        parse(SIM_JOIN_QUERY, &off),
        Err(ParseError::UnknownKeyword { ref keyword, .. }) if keyword == "SIMSELECT"
    ));
    let err = run_query(SIM_JOIN_QUERY, &catalog, &off, &QueryOptions::default()).err().unwrap();
    assert_eq!(err.stage, Stage::Parse);

    reg.set_syntax_enabled(SYNTAX, true).unwrap();
    let on = reg.build_profile().unwrap();
    assert!(run_query(SIM_JOIN_QUERY, &catalog, &on, &QueryOptions::default()).is_ok());
}

#[test]
fn duplicate_keyword_conflicts_only_while_both_enabled() {
    let mut reg = Registry::with_builtin_extensions();
    reg.register(SyntaxId::new("Left"), RegistryEntry::new().statement_keyword("FUZZYSELECT"))
        .unwrap();
    reg.register(SyntaxId::new("Right"), RegistryEntry::new().statement_keyword("FUZZYSELECT"))
        .unwrap();
    assert!(matches!(reg.build_profile(), Err(RegistryError::Conflict { .. })));
    reg.set_syntax_enabled("Right", false).unwrap();
    let profile = reg.build_profile().unwrap();
    assert_eq!(profile.statement_keyword("FUZZYSELECT").unwrap().as_str(), "Left");
}

fn core_suite_output(registry: &Registry) -> Vec<String> {
    let profile = registry.build_profile().unwrap();
    // tables hold vectors, so they are loaded while the extension is on
    let catalog = fixture_catalog(&full_profile());
    let rules: Vec<String> = profile.rules().iter().map(|r| r.rule.name().to_string()).collect();
    golden_suite()
        .iter()
        .filter(|q| q.sql.starts_with("SELECT"))
        .map(|q| {
            let opts = QueryOptions {
                rules: rules.clone(),
                ..QueryOptions::default()
            };
            let mut resp = run_query(&q.sql, &catalog, &profile, &opts).unwrap().response;
            resp.elapsed_ms = 0.0;
            serde_json::to_string(&resp).unwrap()
        })
        .collect()
}

#[test]
fn disabled_extensions_leave_the_core_suite_untouched() {
    let mut disabled = Registry::with_builtin_extensions();
    for s in disabled.syntaxes() {
        disabled.set_syntax_enabled(s.syntax.as_str(), false).unwrap();
    }
    assert_eq!(core_suite_output(&disabled), core_suite_output(&Registry::new()));
}

#[test]
fn toggling_off_and_on_restores_the_profile() {
    let mut reg = Registry::with_builtin_extensions();
    let before = reg.build_profile().unwrap().summary();
    reg.set_syntax_enabled(SYNTAX, false).unwrap();
    assert_ne!(reg.build_profile().unwrap().summary(), before);
    reg.set_syntax_enabled(SYNTAX, true).unwrap();
    assert_eq!(reg.build_profile().unwrap().summary(), before);
    for ep in EntryPoint::ALL {
        reg.set_entry_point_enabled(SYNTAX, ep, false).unwrap();
        assert_ne!(reg.build_profile().unwrap().summary(), before, "{ep}");
        reg.set_entry_point_enabled(SYNTAX, ep, true).unwrap();
        assert_eq!(reg.build_profile().unwrap().summary(), before, "{ep}");
    }
}

#[test]
fn disabling_rules_keeps_the_syntax_usable() {
    let catalog = fixture_catalog(&full_profile());
    let mut reg = Registry::with_builtin_extensions();
    reg.set_entry_point_enabled(SYNTAX, EntryPoint::Rules, false).unwrap();
    let profile = reg.build_profile().unwrap();
    assert!(profile.rule("PushSimFilterIntoCross").is_none());
    assert!(profile.rule("SplitConjunctiveFilter").is_some());
    assert!(run_query(SIM_JOIN_QUERY, &catalog, &profile, &QueryOptions::default()).is_ok());
    let opts = QueryOptions {
        rules: vec!["PushSimFilterIntoCross".into()],
        ..QueryOptions::default()
    };
    assert_eq!(run_query(SIM_JOIN_QUERY, &catalog, &profile, &opts).err().unwrap().stage, Stage::Optimize);
}

#[test]
fn a_syntax_may_replace_a_core_executor() {
    use qsim_core::executor::{ExecError, TranslateContext};
    use qsim_core::plan::LogicalPlan;

    let catalog = fixture_catalog(&full_profile());
    let mut reg = Registry::with_builtin_extensions();
    let entry = RegistryEntry::new().physical_translator("Filter", |plan: &LogicalPlan, _, _: &TranslateContext| {
        Err(ExecError::Invalid(format!("refusing {}", plan.kind())))
    });
    reg.register(SyntaxId::new("NoFilters"), entry).unwrap();
    let profile = reg.build_profile().unwrap();
    let err = run_query("SELECT id FROM t1 WHERE a < 3", &catalog, &profile, &QueryOptions::default())
        .err()
        .unwrap();
    assert_eq!(err.stage, Stage::Compile);
    assert!(err.message.contains("refusing Filter"), "{}", err.message);
    assert!(run_query("SELECT id FROM t1", &catalog, &profile, &QueryOptions::default()).is_ok());
}

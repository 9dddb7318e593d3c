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


use std::path::Path;
use std::process::{Command, Output, Stdio};

use qsim_core::{run_query, QueryOptions};
use qsim_testkit::{fixture_catalog, fixtures_dir, full_profile};
use serde_json::Value;

const SIM_JOIN_QUERY: &str = "SIMSELECT * FROM t1, t2 WHERE t1.c=t2.c AND t1.v TO [1,2,3,4] < 10";

fn qsim(data: &Path, args: &[&str]) -> Output {
    qsim_env(data, args, &[])
}

fn qsim_env(data: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsim"));
    cmd.arg("--data").arg(data).args(args);
    cmd.env_remove("QSIM_ESTIMATOR_BACKEND");
    cmd.env("QSIM_STUB_ESTIMATOR", env!("CARGO_BIN_EXE_qsim-stub-estimator"));
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for t in ["t1", "t2", "t3"] {
        let csv = fixtures_dir().join(format!("{t}.csv"));
        let out = qsim(dir.path(), &["load", "--name", t, "--csv", csv.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    dir
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn json_output_has_columns_and_rows() {
    let ws = workspace();
    let body = json(&qsim(ws.path(), &["query", "--sql", "SELECT a FROM t1", "--format", "json"]));
    assert_eq!(body["columns"], serde_json::json!([{"name": "a", "type": "int"}]));
    assert_eq!(body["rows"].as_array().unwrap().len(), 100);
}

#[test]
fn json_output_mirrors_the_pipeline_response() {
    let ws = workspace();
    let sql = "SELECT t1.id, t2.tag FROM t1, t2 WHERE t1.c = t2.c AND t1.a < 3";
    let mut body = json(&qsim(ws.path(), &["query", "--sql", sql, "--rules", "all", "--format", "json"]));

    let profile = full_profile();
    let catalog = fixture_catalog(&profile);
    let opts = QueryOptions {
        rules: profile.rules().iter().map(|r| r.rule.name().to_string()).collect(),
        ..QueryOptions::default()
    };
    let mut direct = serde_json::to_value(run_query(sql, &catalog, &profile, &opts).unwrap().response).unwrap();
    body["elapsed_ms"] = Value::Null;
    direct["elapsed_ms"] = Value::Null;
    assert_eq!(body, direct);
}

#[test]
fn query_errors_exit_2_with_the_stage() {
    let ws = workspace();
    let out = qsim(ws.path(), &["query", "--sql", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("parse error"), "{}", stderr(&out));
    assert!(stderr(&out).contains("line 1, column 1"));

    let out = qsim(ws.path(), &["query", "--sql", "SELECT id FROM missing"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("analyze error"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_1() {
    let ws = tempfile::tempdir().unwrap();
    assert_eq!(qsim(ws.path(), &["query"]).status.code(), Some(1));
    assert_eq!(qsim(ws.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(qsim(ws.path(), &["query", "--sql", "x", "--format", "xml"]).status.code(), Some(1));
    let help = qsim(ws.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("query") || stderr(&help).contains("query"));
}

#[test]
fn explain_shows_both_trees() {
    let ws = workspace();
    let rules = "SplitConjunctiveFilter,PushFilterIntoCross,CrossToEquiJoin,MergeFilters,PushSimFilterIntoCross,SimFilterAfterCheapFilters";
    let out = qsim(ws.path(), &["query", "--sql", SIM_JOIN_QUERY, "--explain", "--rules", rules]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let (initial, rest) = text.split_once("optimized plan").unwrap();
    assert!(initial.starts_with("initial plan"));
    assert!(initial.contains("CrossProduct") && !initial.contains("EquiJoin"));
    let optimized: Vec<&str> = rest.lines().take_while(|l| !l.is_empty()).collect();
    let join = optimized.iter().position(|l| l.trim_start().starts_with("EquiJoin")).unwrap();
    let sim = optimized.iter().position(|l| l.trim_start().starts_with("SimilarityFilter")).unwrap();
    assert!(sim > join, "{text}");
    assert!(optimized[sim + 1].trim_start().starts_with("Scan t1"));
    assert!(optimized.iter().all(|l| !l.contains("Scan") || l.contains("rows=")));
}

#[test]
fn no_opt_skips_the_optimizer() {
    let ws = workspace();
    let body = json(&qsim(
        ws.path(),
        &["query", "--sql", SIM_JOIN_QUERY, "--rules", "all", "--no-opt", "--format", "json"],
    ));
    assert_eq!(body["initial_plan"], body["optimized_plan"]);
    assert_eq!(body["applied_rules"], serde_json::json!([]));
}

#[test]
fn unknown_rule_is_a_query_error() {
    let ws = workspace();
    let out = qsim(ws.path(), &["query", "--sql", "SELECT c FROM t3", "--rules", "Nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("optimize error"));
}

#[test]
fn dataset_commands() {
    let ws = workspace();
    let t3 = fixtures_dir().join("t3.csv");
    let dup = qsim(ws.path(), &["load", "--name", "t3", "--csv", t3.to_str().unwrap()]);
    assert_eq!(dup.status.code(), Some(2));
    assert!(stderr(&dup).contains("already exists"));

    let tables = stdout(&qsim(ws.path(), &["tables"]));
    assert!(tables.contains("t1 (100 rows)") && tables.contains("t3 (10 rows): c:int, label:str"), "{tables}");

    assert!(qsim(ws.path(), &["drop", "--name", "t3"]).status.success());
    assert!(!ws.path().join("t3.csv").exists());
    assert_eq!(qsim(ws.path(), &["query", "--sql", "SELECT c FROM t3"]).status.code(), Some(2));
    assert_eq!(qsim(ws.path(), &["drop", "--name", "t3"]).status.code(), Some(2));

    let bad = ws.path().join("bad.txt");
    std::fs::write(&bad, "x:int\nfoo\n").unwrap();
    let out = qsim(ws.path(), &["load", "--name", "bad", "--csv", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!ws.path().join("bad.csv").exists());
}

#[test]
fn stub_estimator_cost_is_reported() {
    let ws = workspace();
    let args = ["query", "--sql", "SELECT c FROM t3 WHERE c < 4", "--format", "json", "--estimator", "stub"];
    let body = json(&qsim_env(ws.path(), &args, &[("QSIM_STUB_COST", "7.5")]));
    assert_eq!(body["cost_backend"], "stub");
    assert_eq!(body["cost_initial"], 7.5);
    assert_eq!(body["cost_optimized"], 7.5);

    // the environment selects the backend when no flag is given
    let args = ["query", "--sql", "SELECT c FROM t3", "--format", "json"];
    let body = json(&qsim_env(ws.path(), &args, &[("QSIM_ESTIMATOR_BACKEND", "stub")]));
    assert_eq!(body["cost_initial"], 42.0);
}

#[test]
fn missing_stub_falls_back_to_builtin() {
    let ws = workspace();
    let args = ["query", "--sql", "SELECT c FROM t3", "--format", "json", "--estimator", "stub"];
    let out = qsim_env(ws.path(), &args, &[("QSIM_STUB_ESTIMATOR", "/nonexistent/estimator")]);
    let body = json(&out);
    assert_eq!(body["cost_backend"], "builtin");
    assert!(body["warning"].is_string());
    assert!(stderr(&out).starts_with("warning:"));
}

#[test]
fn repl_runs_each_line() {
    let ws = workspace();
    let mut child = Command::new(env!("CARGO_BIN_EXE_qsim"))
        .arg("--data")
        .arg(ws.path())
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let script = ":rules all\n:explain on\nSELECT c FROM t3 WHERE c < 2\nSELEC\n:quit\nSELECT c FROM t3\n";
    std::io::Write::write_all(child.stdin.as_mut().unwrap(), script.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rules: SplitConjunctiveFilter"));
    assert!(text.contains("optimized plan"));
    assert_eq!(text.matches("(2 rows)").count(), 1, "{text}");
    // nothing runs after :quit
    assert!(!text.contains("(10 rows)"));
    assert!(stderr(&out).contains("parse error"));
}

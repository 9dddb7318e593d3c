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

//! Stand-in external estimator. Reads `{ddl, inserts, query}` on stdin and
//! answers `{"cost": N}` with N from `QSIM_STUB_COST`, default 42.

use std::io::Read;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        eprintln!("qsim-stub-estimator: {e}");
        return ExitCode::FAILURE;
    }
    let request: serde_json::Value = match serde_json::from_str(&input) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("qsim-stub-estimator: bad request: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Some(missing) = ["ddl", "inserts", "query"].into_iter().find(|k| !request[k].is_string()) {
        eprintln!("qsim-stub-estimator: request lacks {missing}");
        return ExitCode::FAILURE;
    }
    let cost = std::env::var("QSIM_STUB_COST")
        .ok()
        .and_then(|c| c.parse::<f64>().ok())
        .unwrap_or(42.0);
    println!("{}", serde_json::json!({ "cost": cost }));
    ExitCode::SUCCESS
}

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

//! The golden query suite and checked-in fixture files.

use std::path::PathBuf;

use qsim_core::{Catalog, KernelProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenQuery {
    pub name: String,
    pub sql: String,
}

/// Repository `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// One query per line, each preceded by a `-- name` comment line.
pub fn parse_golden(text: &str) -> Vec<GoldenQuery> {
    let mut out = Vec::new();
    let mut name = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("--") {
            name = Some(rest.trim().to_string());
        } else {
            out.push(GoldenQuery {
                name: name.take().unwrap_or_else(|| format!("q{}", out.len() + 1)),
                sql: line.to_string(),
            });
        }
    }
    out
}

pub fn golden_suite() -> Vec<GoldenQuery> {
    let path = fixtures_dir().join("golden.sql");
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    parse_golden(&text)
}

/// A catalog holding t1, t2 and t3 loaded from the fixture files.
pub fn fixture_catalog(profile: &KernelProfile) -> Catalog {
    let mut catalog = Catalog::new();
    for name in ["t1", "t2", "t3"] {
        let path = fixtures_dir().join(format!("{name}.csv"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
        catalog
            .load_csv(name, &text, profile)
            .unwrap_or_else(|e| panic!("loading {name}: {e}"));
    }
    catalog
}

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


use qsim_testkit::fixtures;
use qsim_testkit::fixtures_dir;

// Set QSIM_REGENERATE_FIXTURES=1 to rewrite the files from the generator.
#[test]
fn checked_in_fixtures_match_generator() {
    let regenerate = std::env::var_os("QSIM_REGENERATE_FIXTURES").is_some();
    for (name, text) in fixtures::generate() {
        let path = fixtures_dir().join(format!("{name}.csv"));
        if regenerate {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text, "{} is stale", path.display());
    }
}

#[test]
fn generator_is_deterministic() {
    assert_eq!(fixtures::generate(), fixtures::generate());
}

#[test]
fn fixture_shapes() {
    let tables = fixtures::generate();
    let lines: Vec<usize> = tables.iter().map(|(_, t)| t.lines().count()).collect();
    assert_eq!(lines, [101, 51, 11]);
}

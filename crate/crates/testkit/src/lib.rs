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

//! Shared test support: deterministic fixtures, reference evaluators that
//! do not reuse engine code, the golden query suite and random cases.

pub mod compare;
pub mod fixtures;
pub mod golden;
pub mod oracle;
pub mod random;

pub use compare::assert_multiset_eq;
pub use golden::{fixture_catalog, fixtures_dir, golden_suite, GoldenQuery};
pub use oracle::{evaluate_plan, evaluate_sql, Rows};
pub use random::{random_case, RandomCase};

/// Profile with every builtin extension enabled.
pub fn full_profile() -> qsim_core::KernelProfile {
    qsim_core::Registry::with_builtin_extensions()
        .build_profile()
        .expect("builtin profile builds")
}

pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `count` shuffles of `names`, reproducible from `seed`.
pub fn rule_permutations(names: &[String], count: usize, seed: u64) -> Vec<Vec<String>> {
    use rand::seq::SliceRandom;
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            let mut p = names.to_vec();
            p.shuffle(&mut rng);
            p
        })
        .collect()
}

/// Every rule name the full profile offers, core first.
pub fn all_rule_names(profile: &qsim_core::KernelProfile) -> Vec<String> {
    profile.rules().iter().map(|r| r.rule.name().to_string()).collect()
}

/// Names of the core rules only.
pub fn core_rule_names() -> Vec<String> {
    all_rule_names(&qsim_core::KernelProfile::core())
}

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

//! Deterministic fixture tables F1.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20_260_415;

const WORDS: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
const TAGS: [&str; 3] = ["red", "green", "blue"];

/// `(name, csv text)` for t1, t2 and t3, generated from [`SEED`].
pub fn generate() -> Vec<(&'static str, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut t1 = String::from("id:int,c:int,a:int,s:str,v:vector(4)\n");
    for i in 0..100 {
        let a: i64 = rng.random_range(0..100);
        let s = WORDS.choose(&mut rng).expect("non-empty");
        let v: Vec<String> = (0..4)
            .map(|_| (f64::from(rng.random_range(0..100u32)) / 10.0).to_string())
            .collect();
        t1.push_str(&format!("{i},{},{a},{s},\"[{}]\"\n", i % 10, v.join(",")));
    }

    let mut t2 = String::from("id:int,c:int,b:float,tag:str\n");
    for i in 0..50 {
        let b = f64::from(rng.random_range(0..1000u32)) / 1000.0;
        let tag = TAGS.choose(&mut rng).expect("non-empty");
        t2.push_str(&format!("{i},{},{b},{tag}\n", i % 10));
    }

    let mut t3 = String::from("c:int,label:str\n");
    for c in 0..10 {
        t3.push_str(&format!("{c},{}\n", if c % 2 == 0 { "even" } else { "odd" }));
    }

    vec![("t1", t1), ("t2", t2), ("t3", t3)]
}

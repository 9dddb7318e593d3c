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

//! Kernel of an extensible relational query-engine simulator.
//!
//! A query flows through [`parser`], [`plan`], [`optimizer`], [`cost`] and
//! [`executor`]; every stage consults the [`registry::KernelProfile`] it was
//! started with, which is how extended syntaxes such as [`simsel`] plug in.

pub mod catalog;
pub mod cost;
pub mod executor;
pub mod optimizer;
pub mod parser;
pub mod pipeline;
pub mod plan;
pub mod registry;
pub mod schema;
pub mod simsel;
pub mod types;

pub use catalog::{Catalog, CatalogError, Relation};
pub use pipeline::{run_query, QueryOptions, QueryResponse, Stage, StageError};
pub use registry::{KernelProfile, Registry};
pub use schema::{Column, Schema};
pub use types::{DataType, Row, Value};

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

//! Registry of extended syntaxes.
//!
//! Each row pairs a [`SyntaxId`] with a [`RegistryEntry`], the bundle of
//! implementations the syntax mounts on the kernel's entry points. Rows and
//! individual entry points can be switched on and off; [`Registry::build_profile`]
//! merges the core with everything enabled into an immutable
//! [`KernelProfile`] that queries run against.

mod entry;
mod profile;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use entry::{
    AnalyzerHook, DataTypeDef, InfixOperator, LiteralParser, PhysicalTranslator, RegistryEntry, SqlApproxTarget,
    SqlApproximation,
};
pub use profile::{KernelProfile, ProfileSummary, RegisteredRule, RuleOrigin, CORE_KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SyntaxId(Arc<str>);

impl SyntaxId {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        SyntaxId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SyntaxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryPoint {
    StatementKeywords,
    LiteralOpeners,
    InfixOperators,
    DataTypes,
    AnalyzerHooks,
    Rules,
    PhysicalTranslators,
    SqlApproximationHooks,
}

impl EntryPoint {
    pub const ALL: [EntryPoint; 8] = [
        EntryPoint::StatementKeywords,
        EntryPoint::LiteralOpeners,
        EntryPoint::InfixOperators,
        EntryPoint::DataTypes,
        EntryPoint::AnalyzerHooks,
        EntryPoint::Rules,
        EntryPoint::PhysicalTranslators,
        EntryPoint::SqlApproximationHooks,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntryPoint::StatementKeywords => "statement_keywords",
            EntryPoint::LiteralOpeners => "literal_openers",
            EntryPoint::InfixOperators => "infix_operators",
            EntryPoint::DataTypes => "data_types",
            EntryPoint::AnalyzerHooks => "analyzer_hooks",
            EntryPoint::Rules => "rules",
            EntryPoint::PhysicalTranslators => "physical_translators",
            EntryPoint::SqlApproximationHooks => "sql_approximation_hooks",
        }
    }
}

impl fmt::Display for EntryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntryPoint {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntryPoint::ALL
            .into_iter()
            .find(|ep| ep.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| RegistryError::UnknownEntryPoint(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("syntax {0} is already registered")]
    DuplicateSyntax(String),
    #[error("unknown syntax {0}")]
    UnknownSyntax(String),
    #[error("unknown entry point {0}")]
    UnknownEntryPoint(String),
    #[error("conflicting {kind} {name:?} registered by {}", syntaxes.join(" and "))]
    Conflict {
        kind: String,
        name: String,
        syntaxes: Vec<String>,
    },
    #[error("invalid registration: {0}")]
    InvalidRegistration(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryPointStatus {
    pub entry_point: EntryPoint,
    pub enabled: bool,
    /// Number of items the syntax registered on this entry point.
    pub registrations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxStatus {
    pub syntax: SyntaxId,
    pub enabled: bool,
    pub entry_points: Vec<EntryPointStatus>,
}

#[derive(Clone)]
struct RegistryRow {
    syntax: SyntaxId,
    entry: RegistryEntry,
    enabled: bool,
    disabled_points: BTreeSet<EntryPoint>,
}

#[derive(Clone, Default)]
pub struct Registry {
    rows: Vec<RegistryRow>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.syntaxes()).finish()
    }
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// A registry holding every extension linked into this build.
    pub fn with_builtin_extensions() -> Self {
        let mut registry = Registry::new();
        crate::simsel::register(&mut registry).expect("builtin extensions register cleanly");
        registry
    }

    /// Adds a new row, enabled by default.
    pub fn register(&mut self, syntax: SyntaxId, entry: RegistryEntry) -> Result<(), RegistryError> {
        if self.rows.iter().any(|r| r.syntax.as_str().eq_ignore_ascii_case(syntax.as_str())) {
            return Err(RegistryError::DuplicateSyntax(syntax.to_string()));
        }
        entry.check()?;
        self.rows.push(RegistryRow {
            syntax,
            entry,
            enabled: true,
            disabled_points: BTreeSet::new(),
        });
        Ok(())
    }

    fn row_mut(&mut self, syntax: &str) -> Result<&mut RegistryRow, RegistryError> {
        self.rows
            .iter_mut()
            .find(|r| r.syntax.as_str().eq_ignore_ascii_case(syntax))
            .ok_or_else(|| RegistryError::UnknownSyntax(syntax.to_string()))
    }

    pub fn set_syntax_enabled(&mut self, syntax: &str, enabled: bool) -> Result<(), RegistryError> {
        self.row_mut(syntax)?.enabled = enabled;
        Ok(())
    }

    pub fn set_entry_point_enabled(
        &mut self,
        syntax: &str,
        entry_point: EntryPoint,
        enabled: bool,
    ) -> Result<(), RegistryError> {
        let row = self.row_mut(syntax)?;
        if enabled {
            row.disabled_points.remove(&entry_point);
        } else {
            row.disabled_points.insert(entry_point);
        }
        Ok(())
    }

    pub fn syntax_status(&self, syntax: &str) -> Result<SyntaxStatus, RegistryError> {
        self.syntaxes()
            .into_iter()
            .find(|s| s.syntax.as_str().eq_ignore_ascii_case(syntax))
            .ok_or_else(|| RegistryError::UnknownSyntax(syntax.to_string()))
    }

    /// Rows in registration order.
    pub fn syntaxes(&self) -> Vec<SyntaxStatus> {
        self.rows
            .iter()
            .map(|row| SyntaxStatus {
                syntax: row.syntax.clone(),
                enabled: row.enabled,
                entry_points: EntryPoint::ALL
                    .into_iter()
                    .map(|ep| EntryPointStatus {
                        entry_point: ep,
                        enabled: !row.disabled_points.contains(&ep),
                        registrations: row.entry.registrations(ep),
                    })
                    .collect(),
            })
            .collect()
    }

    /// Merges the core with every enabled entry point of every enabled
    /// syntax. Conflicts are only detected among enabled registrations.
    pub fn build_profile(&self) -> Result<KernelProfile, RegistryError> {
        let mut profile = KernelProfile::core();
        for row in self.rows.iter().filter(|r| r.enabled) {
            profile.mount(&row.syntax, &row.entry, &row.disabled_points)?;
        }
        Ok(profile)
    }
}

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

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::entry::{AnalyzerHook, DataTypeDef, InfixOperator, LiteralParser, PhysicalTranslator, SqlApproximation};
use super::{EntryPoint, RegistryEntry, RegistryError, SyntaxId};
use crate::optimizer::{core_rules, Rule};

pub const CORE_KEYWORDS: [&str; 6] = ["SELECT", "FROM", "WHERE", "AND", "OR", "AS"];
const CORE_SYMBOLS: &str = ",*().=!<>-];";
const CORE_TYPES: [&str; 4] = ["int", "float", "str", "bool"];
const CORE: &str = "core";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOrigin {
    Core,
    Syntax(SyntaxId),
}

impl fmt::Display for RuleOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleOrigin::Core => f.write_str(CORE),
            RuleOrigin::Syntax(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone)]
pub struct RegisteredRule {
    pub rule: Arc<dyn Rule>,
    pub origin: RuleOrigin,
}

/// Observable shape of a profile, used to compare two profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSummary {
    pub syntaxes: Vec<String>,
    pub statement_keywords: Vec<(String, String)>,
    pub literal_openers: Vec<(char, String)>,
    pub infix_operators: Vec<(String, String)>,
    pub data_types: Vec<(String, String)>,
    pub analyzer_hooks: Vec<String>,
    pub rules: Vec<(String, String)>,
    pub physical_translators: Vec<(String, String)>,
    pub sql_approximations: Vec<(String, String)>,
}

/// Immutable merged view of the Standard Syntax plus every enabled
/// extension registration. A query keeps the profile it started with.
#[derive(Clone)]
pub struct KernelProfile {
    syntaxes: Vec<SyntaxId>,
    statement_keywords: BTreeMap<String, SyntaxId>,
    literal_openers: BTreeMap<char, (SyntaxId, LiteralParser)>,
    infix_operators: BTreeMap<String, Arc<InfixOperator>>,
    data_types: BTreeMap<String, (SyntaxId, DataTypeDef)>,
    analyzer_hooks: Vec<(SyntaxId, AnalyzerHook)>,
    rules: Vec<RegisteredRule>,
    physical_translators: BTreeMap<String, (SyntaxId, PhysicalTranslator)>,
    sql_approximations: BTreeMap<String, (SyntaxId, SqlApproximation)>,
}

impl fmt::Debug for KernelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.summary().fmt(f)
    }
}

fn conflict(kind: &str, name: impl fmt::Display, owners: [&str; 2]) -> RegistryError {
    RegistryError::Conflict {
        kind: kind.to_string(),
        name: name.to_string(),
        syntaxes: owners.iter().map(|s| s.to_string()).collect(),
    }
}

impl KernelProfile {
    /// The Standard Syntax alone.
    pub fn core() -> Self {
        KernelProfile {
            syntaxes: Vec::new(),
            statement_keywords: BTreeMap::new(),
            literal_openers: BTreeMap::new(),
            infix_operators: BTreeMap::new(),
            data_types: BTreeMap::new(),
            analyzer_hooks: Vec::new(),
            rules: core_rules()
                .into_iter()
                .map(|rule| RegisteredRule {
                    rule,
                    origin: RuleOrigin::Core,
                })
                .collect(),
            physical_translators: BTreeMap::new(),
            sql_approximations: BTreeMap::new(),
        }
    }

    /// Owner of a word that is already a keyword, if any.
    fn keyword_owner(&self, word: &str) -> Option<String> {
        if CORE_KEYWORDS.contains(&word) {
            return Some(CORE.to_string());
        }
        self.statement_keywords
            .get(word)
            .map(|s| s.to_string())
            .or_else(|| self.infix_operators.get(word).map(|op| op.syntax().to_string()))
    }

    pub(crate) fn mount(
        &mut self,
        syntax: &SyntaxId,
        entry: &RegistryEntry,
        disabled: &BTreeSet<EntryPoint>,
    ) -> Result<(), RegistryError> {
        let on = |ep: EntryPoint| !disabled.contains(&ep);
        let me = syntax.as_str();
        self.syntaxes.push(syntax.clone());

        if on(EntryPoint::StatementKeywords) {
            for kw in &entry.statement_keywords {
                if let Some(owner) = self.keyword_owner(kw) {
                    return Err(conflict("statement keyword", kw, [&owner, me]));
                }
                self.statement_keywords.insert(kw.clone(), syntax.clone());
            }
        }
        if on(EntryPoint::LiteralOpeners) {
            for (c, parser) in &entry.literal_openers {
                if CORE_SYMBOLS.contains(*c) {
                    return Err(conflict("literal opener", c, [CORE, me]));
                }
                if let Some((owner, _)) = self.literal_openers.get(c) {
                    return Err(conflict("literal opener", c, [owner.as_str(), me]));
                }
                self.literal_openers.insert(*c, (syntax.clone(), parser.clone()));
            }
        }
        if on(EntryPoint::InfixOperators) {
            for op in &entry.infix_operators {
                if let Some(owner) = self.keyword_owner(op.name()) {
                    return Err(conflict("infix operator", op.name(), [&owner, me]));
                }
                self.infix_operators
                    .insert(op.name().to_string(), Arc::new(op.owned_by(syntax)));
            }
        }
        if on(EntryPoint::DataTypes) {
            for def in &entry.data_types {
                if CORE_TYPES.contains(&def.name.as_str()) {
                    return Err(conflict("data type", &def.name, [CORE, me]));
                }
                if let Some((owner, _)) = self.data_types.get(&def.name) {
                    return Err(conflict("data type", &def.name, [owner.as_str(), me]));
                }
                self.data_types.insert(def.name.clone(), (syntax.clone(), def.clone()));
            }
        }
        if on(EntryPoint::AnalyzerHooks) {
            for hook in &entry.analyzer_hooks {
                self.analyzer_hooks.push((syntax.clone(), hook.clone()));
            }
        }
        if on(EntryPoint::Rules) {
            for rule in &entry.rules {
                if let Some(existing) = self.rule(rule.name()) {
                    let owner = existing.origin.to_string();
                    return Err(conflict("rule", rule.name(), [&owner, me]));
                }
                self.rules.push(RegisteredRule {
                    rule: rule.clone(),
                    origin: RuleOrigin::Syntax(syntax.clone()),
                });
            }
        }
        if on(EntryPoint::PhysicalTranslators) {
            for (kind, translator) in &entry.physical_translators {
                if let Some((owner, _)) = self.physical_translators.get(kind) {
                    return Err(conflict("physical translator", kind, [owner.as_str(), me]));
                }
                self.physical_translators
                    .insert(kind.clone(), (syntax.clone(), translator.clone()));
            }
        }
        if on(EntryPoint::SqlApproximationHooks) {
            for (key, hook) in &entry.sql_approximations {
                if let Some((owner, _)) = self.sql_approximations.get(key) {
                    return Err(conflict("sql approximation hook", key, [owner.as_str(), me]));
                }
                self.sql_approximations.insert(key.clone(), (syntax.clone(), hook.clone()));
            }
        }
        Ok(())
    }

    pub fn syntaxes(&self) -> &[SyntaxId] {
        &self.syntaxes
    }

    /// Syntax admitted by a registered statement keyword (uppercase).
    pub fn statement_keyword(&self, keyword: &str) -> Option<&SyntaxId> {
        self.statement_keywords.get(keyword)
    }

    /// Whether `word` (uppercase) lexes as a keyword under this profile.
    pub fn is_keyword(&self, word: &str) -> bool {
        CORE_KEYWORDS.contains(&word)
            || self.statement_keywords.contains_key(word)
            || self.infix_operators.contains_key(word)
    }

    pub fn literal_opener(&self, opener: char) -> Option<(&SyntaxId, &LiteralParser)> {
        self.literal_openers.get(&opener).map(|(s, p)| (s, p))
    }

    pub fn infix_operator(&self, name: &str) -> Option<&Arc<InfixOperator>> {
        self.infix_operators.get(&name.to_ascii_uppercase())
    }

    pub fn data_type(&self, name: &str) -> Option<&DataTypeDef> {
        self.data_types.get(&name.to_ascii_lowercase()).map(|(_, d)| d)
    }

    pub fn analyzer_hooks(&self) -> &[(SyntaxId, AnalyzerHook)] {
        &self.analyzer_hooks
    }

    /// Core rules first, then extension rules in registration order.
    pub fn rules(&self) -> &[RegisteredRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RegisteredRule> {
        self.rules.iter().find(|r| r.rule.name().eq_ignore_ascii_case(name))
    }

    pub fn physical_translator(&self, kind: &str) -> Option<&PhysicalTranslator> {
        self.physical_translators.get(kind).map(|(_, t)| t)
    }

    pub fn sql_approximation(&self, key: &str) -> Option<&SqlApproximation> {
        self.sql_approximations.get(key).map(|(_, h)| h)
    }

    pub fn summary(&self) -> ProfileSummary {
        fn owned<K: ToString>(m: impl Iterator<Item = (K, String)>) -> Vec<(K, String)> {
            m.collect()
        }
        ProfileSummary {
            syntaxes: self.syntaxes.iter().map(|s| s.to_string()).collect(),
            statement_keywords: owned(self.statement_keywords.iter().map(|(k, s)| (k.clone(), s.to_string()))),
            literal_openers: owned(self.literal_openers.iter().map(|(c, (s, _))| (*c, s.to_string()))),
            infix_operators: owned(
                self.infix_operators
                    .iter()
                    .map(|(k, op)| (k.clone(), op.syntax().to_string())),
            ),
            data_types: owned(self.data_types.iter().map(|(k, (s, _))| (k.clone(), s.to_string()))),
            analyzer_hooks: self.analyzer_hooks.iter().map(|(s, _)| s.to_string()).collect(),
            rules: self
                .rules
                .iter()
                .map(|r| (r.rule.name().to_string(), r.origin.to_string()))
                .collect(),
            physical_translators: owned(
                self.physical_translators
                    .iter()
                    .map(|(k, (s, _))| (k.clone(), s.to_string())),
            ),
            sql_approximations: owned(
                self.sql_approximations
                    .iter()
                    .map(|(k, (s, _))| (k.clone(), s.to_string())),
            ),
        }
    }
}

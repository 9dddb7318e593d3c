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

use std::fmt;
use std::sync::Arc;

use super::{EntryPoint, RegistryError, SyntaxId};
use crate::executor::{BoxedExec, ExecError, TranslateContext};
use crate::optimizer::Rule;
use crate::parser::{ParseError, TokenCursor};
use crate::plan::{ExtOperator, LogicalPlan, PlanError};
use crate::types::{DataType, Value};

/// Parses an extension literal. Called with the opener already consumed.
pub type LiteralParser = Arc<dyn Fn(&mut TokenCursor<'_>) -> Result<Value, ParseError> + Send + Sync>;

/// Post-construction plan rewrite, run for statements whose keyword admits
/// the owning syntax.
pub type AnalyzerHook = Arc<dyn Fn(LogicalPlan) -> Result<LogicalPlan, PlanError> + Send + Sync>;

/// Builds the executor for one logical node from its compiled children.
pub type PhysicalTranslator =
    Arc<dyn Fn(&LogicalPlan, Vec<BoxedExec>, &TranslateContext) -> Result<BoxedExec, ExecError> + Send + Sync>;

/// Renders an extension construct as a SQL boolean fragment for the
/// external estimator.
pub type SqlApproximation = Arc<dyn Fn(SqlApproxTarget<'_>) -> String + Send + Sync>;

pub enum SqlApproxTarget<'a> {
    Node(&'a dyn ExtOperator),
    Operator(&'a InfixOperator),
}

type TypeRule = Arc<dyn Fn(&DataType, &DataType) -> Result<DataType, String> + Send + Sync>;
type Evaluator = Arc<dyn Fn(&Value, &Value) -> Result<Value, String> + Send + Sync>;
type PredicateCost = Arc<dyn Fn(&DataType, &DataType) -> f64 + Send + Sync>;

/// A binary operator contributed by an extension, written infix in queries
/// (`v TO [1,2]`). All registered operators share one precedence level,
/// binding tighter than comparisons.
#[derive(Clone)]
pub struct InfixOperator {
    name: String,
    syntax: SyntaxId,
    type_rule: TypeRule,
    evaluate: Evaluator,
    selectivity: f64,
    predicate_cost: PredicateCost,
}

impl InfixOperator {
    pub fn new(
        name: impl Into<String>,
        type_rule: impl Fn(&DataType, &DataType) -> Result<DataType, String> + Send + Sync + 'static,
        evaluate: impl Fn(&Value, &Value) -> Result<Value, String> + Send + Sync + 'static,
    ) -> Self {
        InfixOperator {
            name: name.into().to_ascii_uppercase(),
            syntax: SyntaxId::new("core"),
            type_rule: Arc::new(type_rule),
            evaluate: Arc::new(evaluate),
            selectivity: 1.0,
            predicate_cost: Arc::new(|_, _| 1.0),
        }
    }

    /// Selectivity of a predicate built on this operator.
    pub fn with_selectivity(mut self, selectivity: f64) -> Self {
        self.selectivity = selectivity;
        self
    }

    /// Per-row evaluation cost given the operand types.
    pub fn with_predicate_cost(mut self, cost: impl Fn(&DataType, &DataType) -> f64 + Send + Sync + 'static) -> Self {
        self.predicate_cost = Arc::new(cost);
        self
    }

    pub(crate) fn owned_by(&self, syntax: &SyntaxId) -> Self {
        InfixOperator {
            syntax: syntax.clone(),
            ..self.clone()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn syntax(&self) -> &SyntaxId {
        &self.syntax
    }

    pub fn result_type(&self, left: &DataType, right: &DataType) -> Result<DataType, String> {
        (self.type_rule)(left, right)
    }

    pub fn evaluate(&self, left: &Value, right: &Value) -> Result<Value, String> {
        (self.evaluate)(left, right)
    }

    pub fn selectivity(&self) -> f64 {
        self.selectivity
    }

    pub fn predicate_cost(&self, left: &DataType, right: &DataType) -> f64 {
        (self.predicate_cost)(left, right)
    }
}

impl fmt::Debug for InfixOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfixOperator")
            .field("name", &self.name)
            .field("syntax", &self.syntax)
            .field("selectivity", &self.selectivity)
            .finish_non_exhaustive()
    }
}

type TypeResolver = Arc<dyn Fn(Option<u32>) -> Result<DataType, String> + Send + Sync>;
type CellParser = Arc<dyn Fn(&str) -> Result<Value, String> + Send + Sync>;

/// A column type contributed by an extension.
#[derive(Clone)]
pub struct DataTypeDef {
    pub name: String,
    /// Maps the optional header parameter (`vector(4)`) to a concrete type.
    pub resolve: TypeResolver,
    /// Parses one CSV cell.
    pub parse_cell: CellParser,
}

impl DataTypeDef {
    pub fn new(
        name: impl Into<String>,
        resolve: impl Fn(Option<u32>) -> Result<DataType, String> + Send + Sync + 'static,
        parse_cell: impl Fn(&str) -> Result<Value, String> + Send + Sync + 'static,
    ) -> Self {
        DataTypeDef {
            name: name.into().to_ascii_lowercase(),
            resolve: Arc::new(resolve),
            parse_cell: Arc::new(parse_cell),
        }
    }
}

impl fmt::Debug for DataTypeDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DataTypeDef").field("name", &self.name).finish_non_exhaustive()
    }
}

/// One syntax's implementations, grouped by entry point.
#[derive(Clone, Default)]
pub struct RegistryEntry {
    pub(crate) statement_keywords: Vec<String>,
    pub(crate) literal_openers: Vec<(char, LiteralParser)>,
    pub(crate) infix_operators: Vec<InfixOperator>,
    pub(crate) data_types: Vec<DataTypeDef>,
    pub(crate) analyzer_hooks: Vec<AnalyzerHook>,
    pub(crate) rules: Vec<Arc<dyn Rule>>,
    pub(crate) physical_translators: Vec<(String, PhysicalTranslator)>,
    pub(crate) sql_approximations: Vec<(String, SqlApproximation)>,
}

impl RegistryEntry {
    pub fn new() -> Self {
        RegistryEntry::default()
    }

    pub fn statement_keyword(mut self, keyword: &str) -> Self {
        self.statement_keywords.push(keyword.to_ascii_uppercase());
        self
    }

    pub fn literal_opener(
        mut self,
        opener: char,
        parser: impl Fn(&mut TokenCursor<'_>) -> Result<Value, ParseError> + Send + Sync + 'static,
    ) -> Self {
        self.literal_openers.push((opener, Arc::new(parser)));
        self
    }

    pub fn infix_operator(mut self, op: InfixOperator) -> Self {
        self.infix_operators.push(op);
        self
    }

    pub fn data_type(mut self, def: DataTypeDef) -> Self {
        self.data_types.push(def);
        self
    }

    pub fn analyzer_hook(
        mut self,
        hook: impl Fn(LogicalPlan) -> Result<LogicalPlan, PlanError> + Send + Sync + 'static,
    ) -> Self {
        self.analyzer_hooks.push(Arc::new(hook));
        self
    }

    pub fn rule(mut self, rule: impl Rule + 'static) -> Self {
        self.rules.push(Arc::new(rule));
        self
    }

    /// Registers the executor for a node kind. Extensions may also claim a
    /// core kind (`"Filter"`, `"EquiJoin"`, ...) to replace its executor.
    pub fn physical_translator(
        mut self,
        kind: &str,
        translator: impl Fn(&LogicalPlan, Vec<BoxedExec>, &TranslateContext) -> Result<BoxedExec, ExecError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        self.physical_translators.push((kind.to_string(), Arc::new(translator)));
        self
    }

    /// Keyed by extension node kind or infix operator name.
    pub fn sql_approximation(
        mut self,
        key: &str,
        hook: impl Fn(SqlApproxTarget<'_>) -> String + Send + Sync + 'static,
    ) -> Self {
        self.sql_approximations.push((key.to_string(), Arc::new(hook)));
        self
    }

    pub fn registrations(&self, entry_point: EntryPoint) -> usize {
        match entry_point {
            EntryPoint::StatementKeywords => self.statement_keywords.len(),
            EntryPoint::LiteralOpeners => self.literal_openers.len(),
            EntryPoint::InfixOperators => self.infix_operators.len(),
            EntryPoint::DataTypes => self.data_types.len(),
            EntryPoint::AnalyzerHooks => self.analyzer_hooks.len(),
            EntryPoint::Rules => self.rules.len(),
            EntryPoint::PhysicalTranslators => self.physical_translators.len(),
            EntryPoint::SqlApproximationHooks => self.sql_approximations.len(),
        }
    }

    pub(crate) fn check(&self) -> Result<(), RegistryError> {
        let word = |s: &str| {
            let mut chars = s.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        let invalid = |what: String| Err(RegistryError::InvalidRegistration(what));
        for kw in &self.statement_keywords {
            if !word(kw) {
                return invalid(format!("statement keyword {kw:?} is not a word"));
            }
        }
        for op in &self.infix_operators {
            if !word(op.name()) {
                return invalid(format!("infix operator {:?} is not a word", op.name()));
            }
        }
        for (c, _) in &self.literal_openers {
            if c.is_alphanumeric() || c.is_whitespace() || matches!(c, '\'' | '_') {
                return invalid(format!("literal opener {c:?} cannot start a token"));
            }
        }
        for def in &self.data_types {
            if !word(&def.name) {
                return invalid(format!("data type {:?} is not a word", def.name));
            }
        }
        Ok(())
    }
}

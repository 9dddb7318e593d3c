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

use crate::types::DataType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    /// Relation alias the column came from; `None` for computed columns.
    pub qualifier: Option<String>,
    pub data_type: DataType,
}

impl Column {
    pub fn new(name: impl Into<String>, data_type: DataType) -> Self {
        Column {
            name: name.into(),
            qualifier: None,
            data_type,
        }
    }

    pub fn qualified(qualifier: impl Into<String>, name: impl Into<String>, data_type: DataType) -> Self {
        Column {
            name: name.into(),
            qualifier: Some(qualifier.into()),
            data_type,
        }
    }

    /// `alias.col` when qualified, else the bare name.
    pub fn qualified_name(&self) -> String {
        match &self.qualifier {
            Some(q) => format!("{q}.{}", self.name),
            None => self.name.clone(),
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.qualified_name(), self.data_type)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolveError {
    Unknown,
    Ambiguous,
}

/// Ordered column list. Bound expressions reference columns by position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    columns: Vec<Column>,
    relation_name: Option<String>,
}

impl Schema {
    pub fn new(columns: Vec<Column>) -> Self {
        Schema {
            columns,
            relation_name: None,
        }
    }

    pub fn with_relation_name(mut self, name: impl Into<String>) -> Self {
        self.relation_name = Some(name.into());
        self
    }

    pub fn relation_name(&self) -> Option<&str> {
        self.relation_name.as_deref()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, index: usize) -> Option<&Column> {
        self.columns.get(index)
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Left columns followed by right columns.
    pub fn concat(&self, right: &Schema) -> Schema {
        let mut columns = self.columns.clone();
        columns.extend(right.columns.iter().cloned());
        Schema::new(columns)
    }

    /// Requalify every column, as a scan under an alias does.
    pub fn requalify(&self, qualifier: &str) -> Schema {
        Schema {
            columns: self
                .columns
                .iter()
                .map(|c| Column::qualified(qualifier, c.name.clone(), c.data_type.clone()))
                .collect(),
            relation_name: Some(qualifier.to_string()),
        }
    }

    /// First column whose name appears twice (case-insensitive), if any.
    pub fn duplicate_name(&self) -> Option<&str> {
        for (i, c) in self.columns.iter().enumerate() {
            let seen = self.columns[..i].iter().any(|o| {
                o.name.eq_ignore_ascii_case(&c.name)
                    && match (&o.qualifier, &c.qualifier) {
                        (Some(a), Some(b)) => a.eq_ignore_ascii_case(b),
                        (None, None) => true,
                        _ => false,
                    }
            });
            if seen {
                return Some(&c.name);
            }
        }
        None
    }

    /// Resolve `qualifier.name` or a bare `name` to a position.
    pub fn resolve(&self, qualifier: Option<&str>, name: &str) -> Result<usize, ResolveError> {
        let mut found = None;
        for (i, c) in self.columns.iter().enumerate() {
            if !c.name.eq_ignore_ascii_case(name) {
                continue;
            }
            if let Some(q) = qualifier {
                match &c.qualifier {
                    Some(cq) if cq.eq_ignore_ascii_case(q) => {}
                    _ => continue,
                }
            }
            if found.is_some() {
                return Err(ResolveError::Ambiguous);
            }
            found = Some(i);
        }
        found.ok_or(ResolveError::Unknown)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

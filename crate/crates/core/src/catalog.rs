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

//! In-memory named relations and CSV ingestion.
//!
//! CSV headers are self-describing: every header cell reads `name:type`,
//! where `type` is a core type (`int`, `float`, `str`) or a data type
//! registered by an enabled extension, optionally parameterized as
//! `type(n)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::registry::KernelProfile;
use crate::schema::{Column, Schema};
use crate::types::{DataType, Row, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("table {0} already exists")]
    DuplicateTable(String),
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("unknown type {type_name} for column {column}")]
    UnknownType { column: String, type_name: String },
    #[error("row {row}, column {column}: {reason}")]
    CellParseError {
        row: usize,
        column: String,
        reason: String,
    },
    #[error("row {row} has {found} cells, expected {expected}")]
    ArityMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid name {0:?}: expected [a-z_][a-z0-9_]*")]
    InvalidName(String),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("relation {relation} violates its schema: {reason}")]
    InvalidRelation { relation: String, reason: String },
}

/// Lowercases `name` and checks it against `[a-z_][a-z0-9_]*`.
pub fn normalize_identifier(name: &str) -> Result<String, CatalogError> {
    let lower = name.to_ascii_lowercase();
    let mut chars = lower.chars();
    let ok = match chars.next() {
        Some(c) if c == '_' || c.is_ascii_lowercase() => {
            chars.all(|c| c == '_' || c.is_ascii_lowercase() || c.is_ascii_digit())
        }
        _ => false,
    };
    if ok {
        Ok(lower)
    } else {
        Err(CatalogError::InvalidName(name.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct Relation {
    name: String,
    schema: Schema,
    rows: Vec<Row>,
}

impl Relation {
    /// Builds a relation, rejecting rows whose arity or cell tags disagree
    /// with the schema.
    pub fn new(name: impl Into<String>, schema: Schema, rows: Vec<Row>) -> Result<Self, CatalogError> {
        let name = name.into();
        let invalid = |reason: String| CatalogError::InvalidRelation {
            relation: name.clone(),
            reason,
        };
        if let Some(dup) = schema.duplicate_name() {
            return Err(invalid(format!("duplicate column {dup}")));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(invalid(format!(
                    "row {} has {} cells, expected {}",
                    r + 1,
                    row.len(),
                    schema.len()
                )));
            }
            for (value, column) in row.iter().zip(schema.columns()) {
                if !column.data_type.accepts(&value.data_type()) {
                    return Err(invalid(format!(
                        "row {}, column {}: {} value in {} column",
                        r + 1,
                        column.name,
                        value.data_type(),
                        column.data_type
                    )));
                }
            }
        }
        Ok(Relation { name, schema, rows })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableInfo {
    pub name: String,
    pub row_count: usize,
    pub schema: Schema,
}

/// Cloning a catalog is cheap and yields a read-stable snapshot.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    tables: BTreeMap<String, Arc<Relation>>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn insert(&mut self, relation: Relation) -> Result<Arc<Relation>, CatalogError> {
        let key = normalize_identifier(relation.name())?;
        if self.tables.contains_key(&key) {
            return Err(CatalogError::DuplicateTable(key));
        }
        let relation = Arc::new(Relation { name: key.clone(), ..relation });
        self.tables.insert(key, relation.clone());
        Ok(relation)
    }

    pub fn load_csv(
        &mut self,
        name: &str,
        csv_text: &str,
        profile: &KernelProfile,
    ) -> Result<Arc<Relation>, CatalogError> {
        let key = normalize_identifier(name)?;
        if self.tables.contains_key(&key) {
            return Err(CatalogError::DuplicateTable(key));
        }
        let relation = parse_csv(&key, csv_text, profile)?;
        self.insert(relation)
    }

    pub fn drop_table(&mut self, name: &str) -> Result<(), CatalogError> {
        self.tables
            .remove(&name.to_ascii_lowercase())
            .map(|_| ())
            .ok_or_else(|| CatalogError::UnknownTable(name.to_string()))
    }

    pub fn get_table(&self, name: &str) -> Result<Arc<Relation>, CatalogError> {
        self.tables
            .get(&name.to_ascii_lowercase())
            .cloned()
            .ok_or_else(|| CatalogError::UnknownTable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tables.contains_key(&name.to_ascii_lowercase())
    }

    /// Name-sorted listing.
    pub fn list_tables(&self) -> Vec<TableInfo> {
        self.tables
            .values()
            .map(|r| TableInfo {
                name: r.name.clone(),
                row_count: r.len(),
                schema: r.schema.clone(),
            })
            .collect()
    }
}

fn resolve_type(column: &str, spec: &str, profile: &KernelProfile) -> Result<DataType, CatalogError> {
    let unknown = || CatalogError::UnknownType {
        column: column.to_string(),
        type_name: spec.to_string(),
    };
    let spec_lower = spec.to_ascii_lowercase();
    let (base, modifier) = match spec_lower.split_once('(') {
        Some((base, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let m = inner.trim().parse::<u32>().map_err(|_| unknown())?;
            (base.trim(), Some(m))
        }
        None => (spec_lower.trim(), None),
    };
    match (base, modifier) {
        ("int", None) => Ok(DataType::Int),
        ("float", None) => Ok(DataType::Float),
        ("str", None) => Ok(DataType::Str),
        _ => {
            let def = profile.data_type(base).ok_or_else(unknown)?;
            (def.resolve)(modifier).map_err(|reason| CatalogError::InvalidHeader(format!("{column}: {reason}")))
        }
    }
}

fn parse_cell(cell: &str, data_type: &DataType, profile: &KernelProfile) -> Result<Value, String> {
    match data_type {
        DataType::Int => cell
            .trim()
            .parse::<i64>()
            .map(Value::Int)
            .map_err(|e| format!("invalid int {cell:?}: {e}")),
        DataType::Float => parse_float(cell.trim()).map(Value::Float),
        DataType::Str => Ok(Value::Str(cell.to_string())),
        DataType::Bool => Err("bool columns cannot be loaded".to_string()),
        DataType::Ext(ext) => {
            let def = profile
                .data_type(&ext.name)
                .ok_or_else(|| format!("type {} is not enabled", ext.name))?;
            let value = (def.parse_cell)(cell)?;
            if !data_type.accepts(&value.data_type()) {
                return Err(format!("expected {data_type}, found {}", value.data_type()));
            }
            Ok(value)
        }
    }
}

/// Decimal float with optional exponent; non-finite spellings are rejected.
pub fn parse_float(text: &str) -> Result<f64, String> {
    let well_formed = !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    match text.parse::<f64>() {
        Ok(x) if well_formed && x.is_finite() => Ok(x),
        _ => Err(format!("invalid float {text:?}")),
    }
}

fn parse_csv(name: &str, csv_text: &str, profile: &KernelProfile) -> Result<Relation, CatalogError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(csv_text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CatalogError::Csv(e.to_string()))?
        .clone();
    if header.is_empty() || header.iter().all(|h| h.trim().is_empty()) {
        return Err(CatalogError::InvalidHeader("missing header row".to_string()));
    }
    let mut columns = Vec::with_capacity(header.len());
    for cell in header.iter() {
        let (col, ty) = cell
            .split_once(':')
            .ok_or_else(|| CatalogError::InvalidHeader(format!("{cell:?} is not of the form name:type")))?;
        let col = normalize_identifier(col.trim())?;
        let data_type = resolve_type(&col, ty.trim(), profile)?;
        columns.push(Column::new(col, data_type));
    }
    let schema = Schema::new(columns);
    if let Some(dup) = schema.duplicate_name() {
        return Err(CatalogError::InvalidHeader(format!("duplicate column {dup}")));
    }

    let mut column_types: Vec<DataType> = schema.columns().iter().map(|c| c.data_type.clone()).collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row_no = i + 1;
        let record = record.map_err(|e| CatalogError::Csv(format!("row {row_no}: {e}")))?;
        if record.len() != column_types.len() {
            return Err(CatalogError::ArityMismatch {
                row: row_no,
                expected: column_types.len(),
                found: record.len(),
            });
        }
        let mut row = Vec::with_capacity(record.len());
        for (c, cell) in record.iter().enumerate() {
            let value = parse_cell(cell, &column_types[c], profile).map_err(|reason| CatalogError::CellParseError {
                row: row_no,
                column: schema.columns()[c].name.clone(),
                reason,
            })?;
            // An unparameterized extension column adopts the type of its
            // first cell; later cells must agree.
            if let DataType::Ext(ext) = &column_types[c] {
                if ext.modifier.is_none() {
                    column_types[c] = value.data_type();
                }
            }
            row.push(value);
        }
        rows.push(row);
    }

    let schema = Schema::new(
        schema
            .columns()
            .iter()
            .zip(column_types)
            .map(|(c, t)| Column::new(c.name.clone(), t))
            .collect(),
    );
    Relation::new(name, schema, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn core() -> KernelProfile {
        KernelProfile::core()
    }

    #[test]
    fn loads_typed_csv() {
        let mut cat = Catalog::new();
        let rel = cat
            .load_csv("t1", "a:int,b:str\n1,x\n2,y\n3,\"z,w\"\n", &core())
            .unwrap();
        assert_eq!(rel.len(), 3);
        assert_eq!(
            rel.schema().columns(),
            &[Column::new("a", DataType::Int), Column::new("b", DataType::Str)]
        );
        assert_eq!(rel.rows()[2], vec![Value::Int(3), Value::Str("z,w".into())]);
    }

    #[test]
    fn header_only_gives_empty_relation() {
        let mut cat = Catalog::new();
        assert_eq!(cat.load_csv("t", "a:int\n", &core()).unwrap().len(), 0);
    }

    #[test]
    fn load_errors() {
        let mut cat = Catalog::new();
        cat.load_csv("t", "a:int\n1\n", &core()).unwrap();
        assert_eq!(
            cat.load_csv("T", "a:int\n", &core()).unwrap_err(),
            CatalogError::DuplicateTable("t".into())
        );
        assert!(matches!(
            cat.load_csv("u", "a:blob\n", &core()),
            Err(CatalogError::UnknownType { .. })
        ));
        assert!(matches!(
            cat.load_csv("u", "a:int,b:int\n1,2\n3\n", &core()),
            Err(CatalogError::ArityMismatch { row: 2, expected: 2, found: 1 })
        ));
        assert!(matches!(
            cat.load_csv("u", "a:int\n99999999999999999999\n", &core()),
            Err(CatalogError::CellParseError { row: 1, .. })
        ));
        assert!(matches!(
            cat.load_csv("u", "a:float\nnan\n", &core()),
            Err(CatalogError::CellParseError { .. })
        ));
        assert!(matches!(
            cat.load_csv("1bad", "a:int\n", &core()),
            Err(CatalogError::InvalidName(_))
        ));
        assert!(matches!(
            cat.load_csv("u", "a:int,A:int\n", &core()),
            Err(CatalogError::InvalidHeader(_))
        ));
        assert!(matches!(cat.load_csv("u", "", &core()), Err(CatalogError::InvalidHeader(_))));
    }

    #[test]
    fn floats_accept_exponents() {
        assert_eq!(parse_float("1.5e2"), Ok(150.0));
        assert_eq!(parse_float("-2"), Ok(-2.0));
        assert!(parse_float("inf").is_err());
        assert!(parse_float("1e999").is_err());
    }

    #[test]
    fn drop_and_reload() {
        let mut cat = Catalog::new();
        cat.load_csv("t1", "a:int\n", &core()).unwrap();
        cat.drop_table("t1").unwrap();
        assert!(cat.list_tables().is_empty());
        assert_eq!(cat.drop_table("nope"), Err(CatalogError::UnknownTable("nope".into())));
        cat.load_csv("t1", "a:int\n", &core()).unwrap();
        assert!(cat.get_table("T1").is_ok());
    }

    #[test]
    fn listing_is_name_sorted() {
        let mut cat = Catalog::new();
        cat.load_csv("t2", "c:int\n1\n2\n", &core()).unwrap();
        cat.load_csv("t1", "a:int\n1\n2\n3\n", &core()).unwrap();
        let listed: Vec<_> = cat.list_tables().into_iter().map(|t| (t.name, t.row_count)).collect();
        assert_eq!(listed, [("t1".to_string(), 3), ("t2".to_string(), 2)]);
    }

    #[test]
    fn relation_rejects_mistyped_cells() {
        let schema = Schema::new(vec![Column::new("a", DataType::Int)]);
        assert!(Relation::new("t", schema.clone(), vec![vec![Value::Str("x".into())]]).is_err());
        assert!(Relation::new("t", schema.clone(), vec![vec![]]).is_err());
        assert!(Relation::new("t", schema, vec![vec![Value::Int(1)]]).is_ok());
    }
}

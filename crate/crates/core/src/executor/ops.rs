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


use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{ExecError, ExecOperator};
use crate::catalog::Relation;
use crate::plan::{BoundExpr, ProjectItem};
use crate::schema::Schema;
use crate::types::{Row, Value};

pub struct TableScanExec {
    relation: Arc<Relation>,
    schema: Schema,
    position: usize,
    emitted: u64,
}

impl TableScanExec {
    pub fn new(relation: Arc<Relation>, schema: Schema) -> Self {
        TableScanExec {
            relation,
            schema,
            position: 0,
            emitted: 0,
        }
    }
}

impl ExecOperator for TableScanExec {
    fn name(&self) -> &str {
        "TableScanExec"
    }

    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.position = 0;
        Ok(())
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        let row = self.relation.rows().get(self.position).cloned();
        if row.is_some() {
            self.position += 1;
            self.emitted += 1;
        }
        Ok(row)
    }

    fn close(&mut self) {}

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }
}

pub struct FilterExec {
    predicate: BoundExpr,
    input: Box<dyn ExecOperator>,
    path: String,
    emitted: u64,
}

impl FilterExec {
    pub fn new(predicate: BoundExpr, input: Box<dyn ExecOperator>, path: String) -> Self {
        FilterExec {
            predicate,
            input,
            path,
            emitted: 0,
        }
    }
}

impl ExecOperator for FilterExec {
    fn name(&self) -> &str {
        "FilterExec"
    }

    fn schema(&self) -> &Schema {
        self.input.schema()
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.input.open()
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        while let Some(row) = self.input.next()? {
            let keep = self.predicate.matches(&row).map_err(|e| ExecError::RuntimeTypeError {
                path: self.path.clone(),
                message: e.0,
            })?;
            if keep {
                self.emitted += 1;
                return Ok(Some(row));
            }
        }
        Ok(None)
    }

    fn close(&mut self) {
        self.input.close();
    }

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![self.input.as_ref()]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }
}

pub struct ProjectExec {
    items: Vec<ProjectItem>,
    schema: Schema,
    input: Box<dyn ExecOperator>,
    path: String,
    emitted: u64,
}

impl ProjectExec {
    pub fn new(items: Vec<ProjectItem>, schema: Schema, input: Box<dyn ExecOperator>, path: String) -> Self {
        ProjectExec {
            items,
            schema,
            input,
            path,
            emitted: 0,
        }
    }
}

impl ExecOperator for ProjectExec {
    fn name(&self) -> &str {
        "ProjectExec"
    }

    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.input.open()
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        let Some(row) = self.input.next()? else {
            return Ok(None);
        };
        let out = self
            .items
            .iter()
            .map(|item| item.expr.evaluate(&row))
            .collect::<Result<Row, _>>()
            .map_err(|e| ExecError::RuntimeTypeError {
                path: self.path.clone(),
                message: e.0,
            })?;
        self.emitted += 1;
        Ok(Some(out))
    }

    fn close(&mut self) {
        self.input.close();
    }

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![self.input.as_ref()]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }
}

fn drain(op: &mut dyn ExecOperator) -> Result<Vec<Row>, ExecError> {
    let mut rows = Vec::new();
    while let Some(row) = op.next()? {
        rows.push(row);
    }
    Ok(rows)
}

fn concat(left: &[Value], right: &[Value]) -> Row {
    let mut row = Vec::with_capacity(left.len() + right.len());
    row.extend_from_slice(left);
    row.extend_from_slice(right);
    row
}

/// Cross product in left-major order; the right input is materialized.
pub struct NestedLoopCrossExec {
    left: Box<dyn ExecOperator>,
    right: Box<dyn ExecOperator>,
    schema: Schema,
    right_rows: Vec<Row>,
    current: Option<Row>,
    index: usize,
    emitted: u64,
}

impl NestedLoopCrossExec {
    pub fn new(left: Box<dyn ExecOperator>, right: Box<dyn ExecOperator>) -> Self {
        let schema = left.schema().concat(right.schema());
        NestedLoopCrossExec {
            left,
            right,
            schema,
            right_rows: Vec::new(),
            current: None,
            index: 0,
            emitted: 0,
        }
    }
}

impl ExecOperator for NestedLoopCrossExec {
    fn name(&self) -> &str {
        "NestedLoopCrossExec"
    }

    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.left.open()?;
        self.right.open()?;
        self.right_rows = drain(self.right.as_mut())?;
        self.current = None;
        self.index = 0;
        Ok(())
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        if self.right_rows.is_empty() {
            return Ok(None);
        }
        loop {
            if let Some(left) = &self.current {
                if let Some(right) = self.right_rows.get(self.index) {
                    self.index += 1;
                    self.emitted += 1;
                    return Ok(Some(concat(left, right)));
                }
            }
            match self.left.next()? {
                Some(row) => {
                    self.current = Some(row);
                    self.index = 0;
                }
                None => return Ok(None),
            }
        }
    }

    fn close(&mut self) {
        self.left.close();
        self.right.close();
        self.right_rows.clear();
    }

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![self.left.as_ref(), self.right.as_ref()]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }
}

/// Hash equi-join. The build side is drained into a hash table; probe rows
/// then emit their matches in build insertion order. Output columns are
/// always left followed by right.
pub struct HashJoinExec {
    on: Vec<(usize, usize)>,
    left: Box<dyn ExecOperator>,
    right: Box<dyn ExecOperator>,
    build_left: bool,
    schema: Schema,
    table: HashMap<Vec<Value>, Vec<Row>>,
    pending: VecDeque<Row>,
    emitted: u64,
}

impl HashJoinExec {
    pub fn new(on: Vec<(usize, usize)>, left: Box<dyn ExecOperator>, right: Box<dyn ExecOperator>, build_left: bool) -> Self {
        let schema = left.schema().concat(right.schema());
        HashJoinExec {
            on,
            left,
            right,
            build_left,
            schema,
            table: HashMap::new(),
            pending: VecDeque::new(),
            emitted: 0,
        }
    }

    pub fn builds_left(&self) -> bool {
        self.build_left
    }

    fn key(&self, row: &[Value], left_side: bool) -> Vec<Value> {
        self.on
            .iter()
            .map(|&(l, r)| row[if left_side { l } else { r }].clone())
            .collect()
    }
}

impl ExecOperator for HashJoinExec {
    fn name(&self) -> &str {
        "HashJoinExec"
    }

    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn open(&mut self) -> Result<(), ExecError> {
        self.left.open()?;
        self.right.open()?;
        self.table.clear();
        self.pending.clear();
        let build = if self.build_left {
            drain(self.left.as_mut())?
        } else {
            drain(self.right.as_mut())?
        };
        for row in build {
            let key = self.key(&row, self.build_left);
            self.table.entry(key).or_default().push(row);
        }
        Ok(())
    }

    fn next(&mut self) -> Result<Option<Row>, ExecError> {
        loop {
            if let Some(row) = self.pending.pop_front() {
                self.emitted += 1;
                return Ok(Some(row));
            }
            let probe = if self.build_left {
                self.right.next()?
            } else {
                self.left.next()?
            };
            let Some(probe) = probe else {
                return Ok(None);
            };
            let key = self.key(&probe, !self.build_left);
            if let Some(matches) = self.table.get(&key) {
                for m in matches {
                    self.pending.push_back(if self.build_left {
                        concat(m, &probe)
                    } else {
                        concat(&probe, m)
                    });
                }
            }
        }
    }

    fn close(&mut self) {
        self.left.close();
        self.right.close();
        self.table.clear();
        self.pending.clear();
    }

    fn children(&self) -> Vec<&dyn ExecOperator> {
        vec![self.left.as_ref(), self.right.as_ref()]
    }

    fn rows_emitted(&self) -> u64 {
        self.emitted
    }
}

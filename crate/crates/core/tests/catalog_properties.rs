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


use proptest::prelude::*;
use qsim_core::types::Value;
use qsim_core::{Catalog, Column, DataType, KernelProfile, Relation, Schema};

#[derive(Debug, Clone)]
enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
}

fn cell_for(ty: u8) -> BoxedStrategy<Cell> {
    match ty {
        0 => any::<i64>().prop_map(Cell::Int).boxed(),
        1 => (-1e12f64..1e12).prop_map(Cell::Float).boxed(),
        _ => "[a-zA-Z0-9 ,\"']{0,10}".prop_map(Cell::Str).boxed(),
    }
}

fn table() -> impl Strategy<Value = (Vec<u8>, Vec<Vec<Cell>>)> {
    prop::collection::vec(0u8..3, 1..5).prop_flat_map(|types| {
        // leading int key keeps every record non-empty
        let row: Vec<BoxedStrategy<Cell>> = std::iter::once(0u8).chain(types.iter().copied()).map(cell_for).collect();
        (Just(types), prop::collection::vec(row, 0..20))
    })
}

fn value(cell: &Cell) -> Value {
    match cell {
        Cell::Int(i) => Value::Int(*i),
        Cell::Float(x) => Value::Float(*x),
        Cell::Str(s) => Value::Str(s.clone()),
    }
}

fn to_csv(types: &[u8], rows: &[Vec<Cell>]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    let mut header = vec!["k:int".to_string()];
    for (i, t) in types.iter().enumerate() {
        header.push(format!("c{i}:{}", ["int", "float", "str"][*t as usize]));
    }
    w.write_record(&header).unwrap();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(x) => x.to_string(),
                Cell::Str(s) => s.clone(),
            })
            .collect();
        w.write_record(&cells).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

proptest! {
    #[test]
    fn load_then_scan_returns_input_rows((types, rows) in table()) {
        let mut catalog = Catalog::new();
        let rel = catalog.load_csv("t", &to_csv(&types, &rows), &KernelProfile::core()).unwrap();
        let expected: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(value).collect()).collect();
        prop_assert_eq!(rel.rows(), expected.as_slice());
    }

    #[test]
    fn mistyped_cell_is_rejected((types, rows) in table(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!rows.is_empty());
        let mut columns = vec![Column::new("k", DataType::Int)];
        for (i, t) in types.iter().enumerate() {
            columns.push(Column::new(format!("c{i}"), [DataType::Int, DataType::Float, DataType::Str][*t as usize].clone()));
        }
        let mut values: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(value).collect()).collect();
        let flat = pick.index(values.len() * columns.len());
        let (r, c) = (flat / columns.len(), flat % columns.len());
        values[r][c] = match values[r][c] {
            Value::Str(_) => Value::Int(0),
            _ => Value::Str("x".into()),
        };
        prop_assert!(Relation::new("t", Schema::new(columns), values).is_err());
    }
}

#[test]
fn short_row_is_rejected() {
    let mut catalog = Catalog::new();
    let err = catalog.load_csv("t", "a:int,b:int\n1,2\n3\n", &KernelProfile::core()).unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
}

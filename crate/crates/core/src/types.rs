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

//! Scalar values and data types.
//!
//! The core knows four tags (`int`, `float`, `str` and the internal `bool`
//! produced by predicates). Extended syntaxes add their own tags through
//! [`ExtValue`] payloads whose meaning is private to the owning syntax.

use std::any::Any;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::registry::SyntaxId;

/// Type descriptor for an extension-registered data type, e.g. `vector(4)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtType {
    pub name: Arc<str>,
    pub syntax: SyntaxId,
    /// Optional type parameter such as a vector dimension.
    pub modifier: Option<u32>,
}

impl ExtType {
    pub fn new(name: impl Into<Arc<str>>, syntax: SyntaxId, modifier: Option<u32>) -> Self {
        ExtType {
            name: name.into(),
            syntax,
            modifier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DataType {
    Int,
    Float,
    Str,
    Bool,
    Ext(ExtType),
}

impl DataType {
    /// Whether a value of type `other` may be stored in or compared against
    /// something of type `self`. An unparameterized extension type accepts
    /// every parameterization of the same type.
    pub fn accepts(&self, other: &DataType) -> bool {
        match (self, other) {
            (DataType::Ext(a), DataType::Ext(b)) => {
                a.name == b.name
                    && match (a.modifier, b.modifier) {
                        (Some(x), Some(y)) => x == y,
                        _ => true,
                    }
            }
            (a, b) => a == b,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, DataType::Int | DataType::Float)
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, DataType::Int | DataType::Float | DataType::Str)
    }

    /// Tag name without parameters.
    pub fn tag(&self) -> &str {
        match self {
            DataType::Int => "int",
            DataType::Float => "float",
            DataType::Str => "str",
            DataType::Bool => "bool",
            DataType::Ext(t) => &t.name,
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataType::Ext(ExtType {
                name,
                modifier: Some(m),
                ..
            }) => write!(f, "{name}({m})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Payload of an extension value. Only the owning syntax interprets it.
pub trait ExtValue: fmt::Debug + Send + Sync {
    fn data_type(&self) -> DataType;
    /// Literal text that the owning syntax's literal parser accepts back.
    fn render(&self) -> String;
    fn ext_eq(&self, other: &dyn ExtValue) -> bool;
    fn to_json(&self) -> serde_json::Value;
    fn as_any(&self) -> &dyn Any;
}

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
    Ext(Arc<dyn ExtValue>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot compare {left} with {right}")]
pub struct IncomparableError {
    pub left: String,
    pub right: String,
}

impl Value {
    pub fn data_type(&self) -> DataType {
        match self {
            Value::Int(_) => DataType::Int,
            Value::Float(_) => DataType::Float,
            Value::Str(_) => DataType::Str,
            Value::Bool(_) => DataType::Bool,
            Value::Ext(v) => v.data_type(),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_ext(&self) -> Option<&dyn ExtValue> {
        match self {
            Value::Ext(v) => Some(v.as_ref()),
            _ => None,
        }
    }

    fn incomparable(&self, other: &Value) -> IncomparableError {
        IncomparableError {
            left: self.data_type().to_string(),
            right: other.data_type().to_string(),
        }
    }

    /// Equality within one tag. Mixed tags are an error, never coerced.
    pub fn try_eq(&self, other: &Value) -> Result<bool, IncomparableError> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Ok(a == b),
            (Value::Float(a), Value::Float(b)) => Ok(a == b),
            (Value::Str(a), Value::Str(b)) => Ok(a == b),
            (Value::Bool(a), Value::Bool(b)) => Ok(a == b),
            (Value::Ext(a), Value::Ext(b)) if a.data_type().accepts(&b.data_type()) => {
                Ok(a.ext_eq(b.as_ref()))
            }
            _ => Err(self.incomparable(other)),
        }
    }

    /// Ordering within one ordered tag (`int`, `float`, `str`).
    pub fn try_cmp(&self, other: &Value) -> Result<Ordering, IncomparableError> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Ok(a.cmp(b)),
            (Value::Float(a), Value::Float(b)) => {
                a.partial_cmp(b).ok_or_else(|| self.incomparable(other))
            }
            (Value::Str(a), Value::Str(b)) => Ok(a.cmp(b)),
            _ => Err(self.incomparable(other)),
        }
    }

    /// SQL literal text for this value, as the parser would read it back.
    pub fn to_sql_literal(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(x) => format!("{x:?}"),
            Value::Str(s) => format!("'{}'", s.replace('\'', "''")),
            Value::Bool(b) => if *b { "TRUE" } else { "FALSE" }.to_string(),
            Value::Ext(v) => v.render(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(i) => serde_json::Value::from(*i),
            Value::Float(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Value::Str(s) => serde_json::Value::String(s.clone()),
            Value::Bool(b) => serde_json::Value::Bool(*b),
            Value::Ext(v) => v.to_json(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x}"),
            Value::Str(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Ext(v) => f.write_str(&v.render()),
        }
    }
}

/// Structural equality: values of different tags are simply unequal.
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

// Floats are always finite (ingestion and literal parsing reject NaN/inf),
// so `==` is an equivalence relation here.
impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Value::Int(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Value::Float(x) => {
                1u8.hash(state);
                // -0.0 == 0.0
                let x = if *x == 0.0 { 0.0 } else { *x };
                x.to_bits().hash(state);
            }
            Value::Str(s) => {
                2u8.hash(state);
                s.hash(state);
            }
            Value::Bool(b) => {
                3u8.hash(state);
                b.hash(state);
            }
            Value::Ext(v) => {
                4u8.hash(state);
                v.data_type().tag().hash(state);
            }
        }
    }
}

pub type Row = Vec<Value>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_tags_are_incomparable() {
        assert!(Value::Int(1).try_eq(&Value::Float(1.0)).is_err());
        assert!(Value::Str("a".into()).try_cmp(&Value::Int(1)).is_err());
        assert_ne!(Value::Int(1), Value::Float(1.0));
    }

    #[test]
    fn ordering_within_tag() {
        assert_eq!(Value::Int(1).try_cmp(&Value::Int(2)), Ok(Ordering::Less));
        assert_eq!(
            Value::Str("b".into()).try_cmp(&Value::Str("a".into())),
            Ok(Ordering::Greater)
        );
        assert!(Value::Bool(true).try_cmp(&Value::Bool(false)).is_err());
    }

    #[test]
    fn literal_rendering_round_trips_through_sql_text() {
        assert_eq!(Value::Float(1.0).to_sql_literal(), "1.0");
        assert_eq!(Value::Str("it's".into()).to_sql_literal(), "'it''s'");
        assert_eq!(Value::Int(-3).to_sql_literal(), "-3");
    }

    #[test]
    fn negative_zero_hashes_like_zero() {
        use std::collections::hash_map::DefaultHasher;
        let h = |v: &Value| {
            let mut s = DefaultHasher::new();
            v.hash(&mut s);
            s.finish()
        };
        assert_eq!(Value::Float(0.0), Value::Float(-0.0));
        assert_eq!(h(&Value::Float(0.0)), h(&Value::Float(-0.0)));
    }
}

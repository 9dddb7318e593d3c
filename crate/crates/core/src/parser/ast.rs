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

use super::Position;
use crate::registry::SyntaxId;
use crate::types::Value;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Eq,
    NotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
    And,
    Or,
    /// Operator registered by an extension, by uppercase name.
    Infix(String),
}

impl BinaryOp {
    /// Binding strength: OR 1, AND 2, comparisons 3, registered infix 4.
    pub fn precedence(&self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Infix(_) => 4,
            _ => 3,
        }
    }

    pub fn is_comparison(&self) -> bool {
        self.precedence() == 3
    }

    pub fn symbol(&self) -> &str {
        match self {
            BinaryOp::Eq => "=",
            BinaryOp::NotEq => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::LtEq => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::GtEq => ">=",
            BinaryOp::And => "AND",
            BinaryOp::Or => "OR",
            BinaryOp::Infix(name) => name,
        }
    }

    pub(crate) fn from_symbol(sym: &str) -> Option<BinaryOp> {
        Some(match sym {
            "=" => BinaryOp::Eq,
            "!=" | "<>" => BinaryOp::NotEq,
            "<" => BinaryOp::Lt,
            "<=" => BinaryOp::LtEq,
            ">" => BinaryOp::Gt,
            ">=" => BinaryOp::GtEq,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Column {
        qualifier: Option<String>,
        name: String,
    },
    Literal(Value),
    Binary {
        op: BinaryOp,
        left: Box<AstExpr>,
        right: Box<AstExpr>,
    },
    ExtLiteral {
        syntax: SyntaxId,
        value: Value,
    },
}

/// Expression node. Positions are not part of structural equality.
#[derive(Debug, Clone)]
pub struct AstExpr {
    pub kind: ExprKind,
    pub pos: Position,
}

impl PartialEq for AstExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl AstExpr {
    pub fn new(kind: ExprKind, pos: Position) -> Self {
        AstExpr { kind, pos }
    }

    pub fn column(qualifier: Option<&str>, name: &str) -> Self {
        AstExpr::new(
            ExprKind::Column {
                qualifier: qualifier.map(str::to_string),
                name: name.to_string(),
            },
            Position::default(),
        )
    }

    pub fn literal(value: Value) -> Self {
        AstExpr::new(ExprKind::Literal(value), Position::default())
    }

    pub fn binary(op: BinaryOp, left: AstExpr, right: AstExpr) -> Self {
        let pos = left.pos;
        AstExpr::new(
            ExprKind::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            },
            pos,
        )
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary { op, .. } => op.precedence(),
            _ => u8::MAX,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for AstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Column { qualifier: Some(q), name } => write!(f, "{q}.{name}"),
            ExprKind::Column { qualifier: None, name } => f.write_str(name),
            ExprKind::Literal(v) | ExprKind::ExtLiteral { value: v, .. } => f.write_str(&v.to_sql_literal()),
            ExprKind::Binary { op, left, right } => {
                let p = op.precedence();
                // Comparisons do not chain; the other levels associate left.
                let left_parens = left.precedence() < p || (op.is_comparison() && left.precedence() == p);
                left.write_operand(f, left_parens)?;
                write!(f, " {} ", op.symbol())?;
                right.write_operand(f, right.precedence() <= p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionItem {
    pub expr: AstExpr,
    pub alias: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Star,
    Items(Vec<ProjectionItem>),
}

#[derive(Debug, Clone)]
pub struct TableRef {
    pub name: String,
    pub alias: Option<String>,
    pub pos: Position,
}

impl TableRef {
    /// Name the relation is referenced by in expressions.
    pub fn binding(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.name)
    }
}

impl PartialEq for TableRef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.alias == other.alias
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AstStatement {
    /// Uppercase statement keyword (`SELECT`, `SIMSELECT`, ...).
    pub keyword: String,
    pub projection: Projection,
    pub from: Vec<TableRef>,
    pub selection: Option<AstExpr>,
}

impl fmt::Display for AstStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.keyword)?;
        match &self.projection {
            Projection::Star => f.write_str("*")?,
            Projection::Items(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", item.expr)?;
                    if let Some(alias) = &item.alias {
                        write!(f, " AS {alias}")?;
                    }
                }
            }
        }
        f.write_str(" FROM ")?;
        for (i, t) in self.from.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&t.name)?;
            if let Some(alias) = &t.alias {
                write!(f, " {alias}")?;
            }
        }
        if let Some(selection) = &self.selection {
            write!(f, " WHERE {selection}")?;
        }
        Ok(())
    }
}

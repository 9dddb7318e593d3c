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

//! Tokenizer and recursive-descent parser for the query dialect.
//!
//! ```text
//! stmt     := KEYWORD projlist FROM table (',' table)* (WHERE expr)? ';'?
//! projlist := '*' | expr (AS ident)? (',' expr (AS ident)?)*
//! table    := ident ident?
//! expr     := and (OR and)*
//! and      := cmp (AND cmp)*
//! cmp      := infix (('=' | '!=' | '<>' | '<' | '<=' | '>' | '>=') infix)?
//! infix    := primary (INFIX_OP primary)*
//! primary  := '(' expr ')' | '-'? number | string | ident ('.' ident)? | EXT_LITERAL
//! ```
//!
//! The statement keyword decides which extension tokens are admitted:
//! `SELECT` admits only the core, a registered keyword additionally admits
//! its own syntax's literals and operators.

mod ast;
mod lexer;

pub use ast::{AstExpr, AstStatement, BinaryOp, ExprKind, Projection, ProjectionItem, TableRef};
pub use lexer::{tokenize, Position, Token, TokenKind};

use crate::registry::{KernelProfile, SyntaxId};
use crate::types::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("lexical error at {pos}: {reason}")]
    Lex { pos: Position, reason: String },
    #[error("syntax error at {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("unknown statement keyword {keyword} at {pos}")]
    UnknownKeyword { pos: Position, keyword: String },
    #[error("{feature} is not admitted under {keyword} at {pos}")]
    GatedFeature {
        pos: Position,
        feature: String,
        keyword: String,
    },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Lex { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::UnknownKeyword { pos, .. }
            | ParseError::GatedFeature { pos, .. } => *pos,
        }
    }
}

/// Cursor over a token stream, also handed to extension literal parsers.
pub struct TokenCursor<'a> {
    tokens: &'a [Token],
    index: usize,
    end: Position,
}

impl<'a> TokenCursor<'a> {
    pub fn new(tokens: &'a [Token], end: Position) -> Self {
        TokenCursor { tokens, index: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.index)
    }

    pub fn next_token(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.index);
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    /// Position of the next token, or the end of input.
    pub fn position(&self) -> Position {
        self.peek().map_or(self.end, |t| t.pos)
    }

    pub fn at_symbol(&self, sym: &str) -> bool {
        self.peek().is_some_and(|t| t.is_symbol(sym))
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    /// Error describing the next token as unexpected.
    pub fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.position(),
            expected: expected.to_string(),
            found: self.peek().map_or_else(|| "end of input".to_string(), Token::describe),
        }
    }

    pub fn expect_symbol(&mut self, sym: &str) -> Result<&'a Token, ParseError> {
        if self.at_symbol(sym) {
            Ok(self.next_token().expect("peeked"))
        } else {
            Err(self.unexpected(&format!("'{sym}'")))
        }
    }

    /// Numeric literal with an optional leading minus sign.
    pub fn parse_number(&mut self) -> Result<Value, ParseError> {
        let negative = self.at_symbol("-");
        if negative {
            self.next_token();
        }
        let pos = self.position();
        let token = match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::IntLit | TokenKind::FloatLit) => self.next_token().expect("peeked"),
            _ => return Err(self.unexpected("number")),
        };
        let text = if negative {
            format!("-{}", token.text)
        } else {
            token.text.clone()
        };
        let out_of_range = || ParseError::Syntax {
            pos,
            expected: "number in range".to_string(),
            found: format!("number {text}"),
        };
        match token.kind {
            TokenKind::IntLit => text.parse::<i64>().map(Value::Int).map_err(|_| out_of_range()),
            _ => match text.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Value::Float(x)),
                _ => Err(out_of_range()),
            },
        }
    }
}

struct Parser<'a> {
    cursor: TokenCursor<'a>,
    profile: &'a KernelProfile,
    keyword: String,
    admitted: Option<&'a SyntaxId>,
}

/// Parses one statement under `profile`.
pub fn parse(text: &str, profile: &KernelProfile) -> Result<AstStatement, ParseError> {
    let tokens = match tokenize(text, profile) {
        Ok(tokens) => tokens,
        Err(err) => return Err(leading_keyword_error(text, profile).unwrap_or(err)),
    };
    let mut parser = Parser {
        cursor: TokenCursor::new(&tokens, lexer::end_position(text)),
        profile,
        keyword: String::new(),
        admitted: None,
    };
    parser.statement()
}

/// An unknown statement word takes priority over lexical errors further on,
/// since extension tokens only lex once their syntax is mounted.
fn leading_keyword_error(text: &str, profile: &KernelProfile) -> Option<ParseError> {
    let trimmed = text.trim_start();
    let word: String = trimmed
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    if word.is_empty() || !word.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        return None;
    }
    let keyword = word.to_ascii_uppercase();
    if keyword == "SELECT" || profile.statement_keyword(&keyword).is_some() {
        return None;
    }
    let pos = lexer::end_position(&text[..text.len() - trimmed.len()]);
    Some(ParseError::UnknownKeyword { pos, keyword })
}

impl<'a> Parser<'a> {
    fn statement(&mut self) -> Result<AstStatement, ParseError> {
        let first = match self.cursor.peek() {
            Some(t) if matches!(t.kind, TokenKind::Keyword | TokenKind::Ident) => t,
            _ => return Err(self.cursor.unexpected("statement keyword")),
        };
        let keyword = first.text.to_ascii_uppercase();
        if keyword != "SELECT" {
            match self.profile.statement_keyword(&keyword) {
                Some(syntax) if first.kind == TokenKind::Keyword => self.admitted = Some(syntax),
                _ => return Err(ParseError::UnknownKeyword { pos: first.pos, keyword }),
            }
        }
        self.cursor.next_token();
        self.keyword = keyword;

        let projection = if self.cursor.at_symbol("*") {
            self.cursor.next_token();
            Projection::Star
        } else {
            let mut items = vec![self.projection_item()?];
            while self.cursor.at_symbol(",") {
                self.cursor.next_token();
                items.push(self.projection_item()?);
            }
            Projection::Items(items)
        };

        if !self.cursor.at_keyword("FROM") {
            return Err(self.cursor.unexpected("FROM"));
        }
        self.cursor.next_token();
        let mut from = vec![self.table_ref()?];
        while self.cursor.at_symbol(",") {
            self.cursor.next_token();
            let table = self.table_ref()?;
            if from.iter().any(|t: &TableRef| t.binding() == table.binding()) {
                return Err(ParseError::Syntax {
                    pos: table.pos,
                    expected: "unique table alias".to_string(),
                    found: format!("duplicate {}", table.binding()),
                });
            }
            from.push(table);
        }

        let selection = if self.cursor.at_keyword("WHERE") {
            self.cursor.next_token();
            Some(self.expr()?)
        } else {
            None
        };
        if self.cursor.at_symbol(";") {
            self.cursor.next_token();
        }
        if self.cursor.peek().is_some() {
            return Err(self.cursor.unexpected("end of input"));
        }
        Ok(AstStatement {
            keyword: self.keyword.clone(),
            projection,
            from,
            selection,
        })
    }

    fn ident(&mut self, what: &str) -> Result<(String, Position), ParseError> {
        match self.cursor.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.cursor.next_token();
                Ok((t.text.to_ascii_lowercase(), t.pos))
            }
            _ => Err(self.cursor.unexpected(what)),
        }
    }

    fn projection_item(&mut self) -> Result<ProjectionItem, ParseError> {
        let expr = self.expr()?;
        let alias = if self.cursor.at_keyword("AS") {
            self.cursor.next_token();
            Some(self.ident("alias")?.0)
        } else {
            None
        };
        Ok(ProjectionItem { expr, alias })
    }

    fn table_ref(&mut self) -> Result<TableRef, ParseError> {
        let (name, pos) = self.ident("table name")?;
        let alias = match self.cursor.peek() {
            Some(t) if t.kind == TokenKind::Ident => Some(self.ident("alias")?.0),
            _ => None,
        };
        Ok(TableRef { name, alias, pos })
    }

    fn expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut left = self.and_expr()?;
        while self.cursor.at_keyword("OR") {
            self.cursor.next_token();
            let right = self.and_expr()?;
            left = AstExpr::binary(BinaryOp::Or, left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<AstExpr, ParseError> {
        let mut left = self.comparison()?;
        while self.cursor.at_keyword("AND") {
            self.cursor.next_token();
            let right = self.comparison()?;
            left = AstExpr::binary(BinaryOp::And, left, right);
        }
        Ok(left)
    }

    fn comparison(&mut self) -> Result<AstExpr, ParseError> {
        let left = self.infix()?;
        let op = match self.cursor.peek() {
            Some(t) if t.kind == TokenKind::Symbol => BinaryOp::from_symbol(&t.text),
            _ => None,
        };
        match op {
            Some(op) => {
                self.cursor.next_token();
                let right = self.infix()?;
                Ok(AstExpr::binary(op, left, right))
            }
            None => Ok(left),
        }
    }

    fn check_admitted(&self, owner: &SyntaxId, feature: String, pos: Position) -> Result<(), ParseError> {
        if self.admitted == Some(owner) {
            Ok(())
        } else {
            Err(ParseError::GatedFeature {
                pos,
                feature,
                keyword: self.keyword.clone(),
            })
        }
    }

    fn infix(&mut self) -> Result<AstExpr, ParseError> {
        let mut left = self.primary()?;
        loop {
            let op = match self.cursor.peek() {
                Some(t) if t.kind == TokenKind::Keyword => match self.profile.infix_operator(&t.text) {
                    Some(op) => {
                        self.check_admitted(op.syntax(), format!("operator {}", op.name()), t.pos)?;
                        op
                    }
                    None => break,
                },
                _ => break,
            };
            self.cursor.next_token();
            let right = self.primary()?;
            left = AstExpr::binary(BinaryOp::Infix(op.name().to_string()), left, right);
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<AstExpr, ParseError> {
        let pos = self.cursor.position();
        let token = match self.cursor.peek() {
            Some(t) => t,
            None => return Err(self.cursor.unexpected("expression")),
        };
        let kind = match token.kind {
            TokenKind::Symbol if token.text == "(" => {
                self.cursor.next_token();
                let inner = self.expr()?;
                self.cursor.expect_symbol(")")?;
                return Ok(AstExpr { pos, ..inner });
            }
            TokenKind::Symbol if token.text == "-" => ExprKind::Literal(self.cursor.parse_number()?),
            TokenKind::IntLit | TokenKind::FloatLit => ExprKind::Literal(self.cursor.parse_number()?),
            TokenKind::StrLit => {
                self.cursor.next_token();
                let body = &token.text[1..token.text.len() - 1];
                ExprKind::Literal(Value::Str(body.replace("''", "'")))
            }
            TokenKind::Ident => {
                let (first, _) = self.ident("column")?;
                if self.cursor.at_symbol(".") {
                    self.cursor.next_token();
                    let (name, _) = self.ident("column name")?;
                    ExprKind::Column {
                        qualifier: Some(first),
                        name,
                    }
                } else {
                    ExprKind::Column {
                        qualifier: None,
                        name: first,
                    }
                }
            }
            TokenKind::ExtLitOpener => {
                let opener = token.text.chars().next().expect("non-empty token");
                let (syntax, parser) = self.profile.literal_opener(opener).expect("lexed as opener");
                self.check_admitted(syntax, format!("literal '{opener}'"), pos)?;
                self.cursor.next_token();
                let value = parser(&mut self.cursor)?;
                ExprKind::ExtLiteral {
                    syntax: syntax.clone(),
                    value,
                }
            }
            _ => return Err(self.cursor.unexpected("expression")),
        };
        Ok(AstExpr::new(kind, pos))
    }
}

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

use serde::Serialize;

use super::ParseError;
use crate::registry::KernelProfile;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    IntLit,
    FloatLit,
    StrLit,
    Symbol,
    ExtLitOpener,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice.
    pub text: String,
    pub pos: Position,
    /// Byte offset of `text` in the input.
    pub offset: usize,
}

impl Token {
    pub fn is_symbol(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == sym
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text.eq_ignore_ascii_case(kw)
    }

    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Keyword => format!("keyword {}", self.text.to_ascii_uppercase()),
            TokenKind::Ident => format!("identifier {}", self.text),
            TokenKind::IntLit | TokenKind::FloatLit => format!("number {}", self.text),
            TokenKind::StrLit => format!("string {}", self.text),
            TokenKind::Symbol | TokenKind::ExtLitOpener => format!("'{}'", self.text),
        }
    }
}

const TWO_CHAR_SYMBOLS: [&str; 4] = ["<=", ">=", "!=", "<>"];
const ONE_CHAR_SYMBOLS: &str = ",*().=<>-];";

struct Lexer<'a> {
    text: &'a str,
    offset: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.offset..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            col: self.col,
        }
    }

    fn bump_while(&mut self, pred: impl Fn(char) -> bool) {
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.bump();
        }
    }

    fn number(&mut self) -> TokenKind {
        self.bump_while(|c| c.is_ascii_digit());
        let mut kind = TokenKind::IntLit;
        if self.peek() == Some('.') && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit()) {
            self.bump();
            self.bump_while(|c| c.is_ascii_digit());
            kind = TokenKind::FloatLit;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let digit_at = if matches!(self.peek_at(1), Some('+' | '-')) { 2 } else { 1 };
            if matches!(self.peek_at(digit_at), Some(c) if c.is_ascii_digit()) {
                for _ in 0..digit_at {
                    self.bump();
                }
                self.bump_while(|c| c.is_ascii_digit());
                kind = TokenKind::FloatLit;
            }
        }
        kind
    }

    fn string(&mut self, start: Position) -> Result<(), ParseError> {
        self.bump();
        loop {
            match self.bump() {
                Some('\'') if self.peek() == Some('\'') => {
                    self.bump();
                }
                Some('\'') => return Ok(()),
                Some(_) => {}
                None => {
                    return Err(ParseError::Lex {
                        pos: start,
                        reason: "unterminated string literal".to_string(),
                    })
                }
            }
        }
    }
}

/// Splits `text` into tokens. Keywords are the core set plus the profile's
/// statement keywords and infix operator names; characters registered as
/// literal openers become [`TokenKind::ExtLitOpener`].
pub fn tokenize(text: &str, profile: &KernelProfile) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        text,
        offset: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = lx.peek() {
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        let pos = lx.position();
        let start = lx.offset;
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            lx.bump_while(|c| c.is_ascii_alphanumeric() || c == '_');
            if profile.is_keyword(&text[start..lx.offset].to_ascii_uppercase()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            }
        } else if c.is_ascii_digit() {
            lx.number()
        } else if c == '\'' {
            lx.string(pos)?;
            TokenKind::StrLit
        } else if profile.literal_opener(c).is_some() {
            lx.bump();
            TokenKind::ExtLitOpener
        } else if TWO_CHAR_SYMBOLS
            .iter()
            .any(|s| text[start..].starts_with(s))
        {
            lx.bump();
            lx.bump();
            TokenKind::Symbol
        } else if ONE_CHAR_SYMBOLS.contains(c) {
            lx.bump();
            TokenKind::Symbol
        } else {
            return Err(ParseError::Lex {
                pos,
                reason: format!("illegal character {c:?}"),
            });
        };
        tokens.push(Token {
            kind,
            text: text[start..lx.offset].to_string(),
            pos,
            offset: start,
        });
    }
    Ok(tokens)
}

/// Position just past the last character of `text`.
pub(crate) fn end_position(text: &str) -> Position {
    let mut pos = Position { line: 1, col: 1 };
    for c in text.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    }
    pos
}

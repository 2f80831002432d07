use std::fmt;

use thiserror::Error;

use crate::diag::{Diagnostic, Pos};

pub(crate) const KEYWORDS: &[&str] = &[
    "data",
    "proc",
    "init",
    "ltl",
    "var",
    "if",
    "else",
    "for",
    "in",
    "choice",
    "send",
    "recv",
    "peek",
    "timeout_recv",
    "nonblock_recv",
    "timeout_peek",
    "nonblock_peek",
    "channel",
    "bool",
    "true",
    "false",
];

const PUNCTUATION: &[&str] = &[
    "&&", "||", "->", "==", "!=", "(", ")", "{", "}", "[", "]", ",", ";", ":", ".", "!", "=",
];

const FAULT_MARKERS: &[&str] = &["shutdown", "drop"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword,
    Ident,
    Number,
    Punct,
    FaultMarker,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text; fault markers keep their leading `@`, EOF is empty.
    pub text: String,
    pub line: u32,
    pub column: u32,
}

impl Token {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Eof => f.write_str("end of input"),
            TokenKind::Keyword => write!(f, "keyword `{}`", self.text),
            TokenKind::Ident => write!(f, "identifier `{}`", self.text),
            TokenKind::Number => write!(f, "number `{}`", self.text),
            TokenKind::Punct => write!(f, "`{}`", self.text),
            TokenKind::FaultMarker => write!(f, "fault marker `{}`", self.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic for LexError {
    fn pos(&self) -> Pos {
        self.pos
    }

    fn message(&self) -> String {
        self.message.clone()
    }
}

/// Splits source text into tokens. The returned list always ends in an EOF
/// token; `//` comments and whitespace are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(source).run()
}

struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: u32,
    column: u32,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_ascii_alphanumeric()
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            offset: 0,
            line: 1,
            column: 1,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.offset..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.src[start..self.offset]
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        let mut tokens = Vec::new();
        loop {
            self.take_while(char::is_whitespace);
            if self.rest().starts_with("//") {
                self.take_while(|c| c != '\n');
                continue;
            }
            let (line, column) = (self.line, self.column);
            let token = |kind, text: &str| Token {
                kind,
                text: text.to_string(),
                line,
                column,
            };
            let Some(c) = self.peek() else {
                tokens.push(token(TokenKind::Eof, ""));
                return Ok(tokens);
            };
            if is_ident_start(c) {
                let word = self.take_while(is_ident_continue);
                let kind = if KEYWORDS.contains(&word) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Ident
                };
                tokens.push(token(kind, word));
            } else if c.is_ascii_digit() {
                let digits = self.take_while(|c| c.is_ascii_digit());
                tokens.push(token(TokenKind::Number, digits));
            } else if c == '@' {
                self.bump();
                let word = self.take_while(is_ident_continue);
                if !FAULT_MARKERS.contains(&word) {
                    return Err(LexError {
                        pos: Pos::new(line, column),
                        message: format!(
                            "unknown fault marker `@{word}` (expected `@shutdown` or `@drop`)"
                        ),
                    });
                }
                tokens.push(token(TokenKind::FaultMarker, &format!("@{word}")));
            } else if let Some(p) = PUNCTUATION.iter().find(|p| self.rest().starts_with(**p)) {
                for _ in 0..p.len() {
                    self.bump();
                }
                tokens.push(token(TokenKind::Punct, p));
            } else {
                return Err(LexError {
                    pos: Pos::new(line, column),
                    message: format!("illegal character `{}`", c.escape_default()),
                });
            }
        }
    }
}

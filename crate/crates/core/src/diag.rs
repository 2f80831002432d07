//! Source positions and the diagnostic interface shared by every pass.

use std::fmt;

/// A 1-based line/column position in the original source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub const fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Errors that point at a place in the source.
pub trait Diagnostic: std::error::Error {
    fn pos(&self) -> Pos;
    fn message(&self) -> String;

    /// Renders the error as `file:line:col: message`.
    fn render(&self, file: &str) -> String {
        let pos = self.pos();
        format!("{}:{}:{}: {}", file, pos.line, pos.column, self.message())
    }
}

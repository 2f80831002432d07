//! Lexing, parsing and pretty-printing of model source text.

pub mod ast;
mod lexer;
mod parser;
mod printer;

pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse_model, ParseError};
pub use printer::{print_expr, print_model, print_stmt_header};

use crate::Error;

/// Tokenizes and parses `source` in one step.
pub fn parse_source(source: &str) -> Result<ast::Model, Error> {
    let tokens = tokenize(source)?;
    Ok(parse_model(&tokens)?)
}

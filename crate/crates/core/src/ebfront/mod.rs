//! Event-B front end: lexing, parsing, linking and Rodin ingestion.

mod ast;
mod lexer;
mod link;
mod parser;
mod printer;
mod rodin;
mod token;

pub use ast::*;
pub use lexer::{lex, LexError};
pub use link::{link, EventBModel, LinkError, Resolved, Symbol, SymbolKind, SymbolTable};
pub use parser::{parse_assignment, parse_context, parse_expr, parse_machine, ParseError};
pub use printer::{print_context, print_expr, print_machine};
pub use rodin::{
    ingest_rodin, ingest_rodin_named, parse_rodin_context, parse_rodin_machine, RodinError,
};
pub use token::{Keyword, Op, Pos, Punct, Token, TokenKind};

use thiserror::Error;

/// Any failure while reading surface-syntax sources into a linked model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("{unit}: {source}")]
    Lex { unit: String, source: LexError },
    #[error("{unit}: {source}")]
    Parse { unit: String, source: ParseError },
    #[error(transparent)]
    Link(#[from] LinkError),
}

pub fn parse_machine_source(source: &str) -> Result<MachineAst, FrontError> {
    let unit = "machine".to_string();
    let tokens = lex(source).map_err(|source| FrontError::Lex {
        unit: unit.clone(),
        source,
    })?;
    parse_machine(&tokens).map_err(|source| FrontError::Parse { unit, source })
}

pub fn parse_context_source(source: &str) -> Result<ContextAst, FrontError> {
    let unit = "context".to_string();
    let tokens = lex(source).map_err(|source| FrontError::Lex {
        unit: unit.clone(),
        source,
    })?;
    parse_context(&tokens).map_err(|source| FrontError::Parse { unit, source })
}

/// Lex, parse and link a machine and its contexts from surface syntax.
pub fn load_model(machine: &str, contexts: &[&str]) -> Result<EventBModel, FrontError> {
    let m = parse_machine_source(machine)?;
    let cs = contexts
        .iter()
        .map(|c| parse_context_source(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(link(m, cs)?)
}

//! Text formats and the generated test corpus.

mod corpus;
mod document;
mod dot;
mod rules;

use thiserror::Error;

use crate::ribbon_graph::GraphError;

pub use corpus::{generate_corpus, MAX_CORPUS_LOOPS};
pub use document::{parse, serialize, serialize_canonical, FORMAT_VERSION};
pub use dot::export_dot;
pub use rules::{parse_rules, RulesConfig};

/// A position in an input document, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at {at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("half-edge {id} declared twice (at {at})")]
    DuplicateHalfEdge { at: Position, id: u32 },
    #[error("half-edge {id} is not on any vertex (at {at})")]
    UnknownHalfEdge { at: Position, id: u32 },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

impl IoError {
    pub(crate) fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        IoError::Syntax {
            at: Position { line, col },
            message: message.into(),
        }
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based
/// columns, dropping everything from `#` on.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((code[..s].chars().count() + 1, &code[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((code[..s].chars().count() + 1, &code[s..]));
    }
    out
}

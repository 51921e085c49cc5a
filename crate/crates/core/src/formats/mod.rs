//! Text formats for every model type.

mod json;
mod newick;

use thiserror::Error;

pub use json::{
    parse_network, parse_reconciliation, parse_reconciliation_doc, parse_relation_graph, write_network,
    write_reconciliation, write_reconciliation_doc, write_relation_graph, write_time_assignment,
};
pub use newick::{parse_dstree, parse_species_tree, write_dstree, write_species_tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("semantic error: {0}")]
    Semantic(String),
}

impl FormatError {
    /// Syntax error at byte offset `at` of `text`, with 1-based line and column.
    pub(crate) fn syntax_at(text: &str, at: usize, message: impl Into<String>) -> Self {
        let before = &text[..at.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        FormatError::Syntax { line, column, message: message.into() }
    }
}

//! RDF terms, indexed graphs and the N-Triples / Turtle-subset readers.

mod graph;
mod io;
mod lex;
mod ntriples;
mod term;
mod turtle;
pub mod vocab;

use std::collections::HashMap;

pub use graph::{Graph, GraphBuilder, IdTriple, IndexKind, TermId};
pub use io::{read_graph_file, RdfFormat};
pub use ntriples::{parse_ntriples, parse_ntriples_into, parse_ntriples_str, parse_term, serialize_ntriples, write_ntriples};
pub use term::{Iri, Literal, Term, TermError, Triple, TripleError};
pub use turtle::{parse_turtle_into, parse_turtle_subset, parse_turtle_str};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {reason}")]
    Syntax {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("unsupported feature {feature} at line {line}, column {column}")]
    UnsupportedFeature {
        feature: String,
        line: usize,
        column: usize,
    },
    #[error("input is not UTF-8: {0}")]
    Encoding(#[from] std::str::Utf8Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ParseError {
    pub(crate) fn syntax(src: &str, err: lex::LexError) -> Self {
        let (line, column) = lex::Lexer::line_col(src, err.at);
        ParseError::Syntax {
            line,
            column,
            reason: err.reason,
        }
    }
}

/// Maps source blank-node labels to fresh `b{n}` nodes of one builder.
/// One scope per parse keeps labels from separate documents apart.
#[derive(Debug, Default)]
pub struct BlankScope {
    labels: HashMap<String, TermId>,
}

impl BlankScope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn resolve(&mut self, builder: &mut GraphBuilder, label: &str) -> TermId {
        if let Some(&id) = self.labels.get(label) {
            return id;
        }
        let id = builder.fresh_blank();
        self.labels.insert(label.to_string(), id);
        id
    }
}

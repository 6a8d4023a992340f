//! Labeled directed graphs: the large data graph being mined and the small
//! pattern graphs that candidates are made of.

mod data;
mod extend;
mod io;
mod pattern;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use data::{DataGraph, DataGraphBuilder, Neighbor};
pub use extend::{extend_edge_labels, ExtendedGraph};
pub use io::{
    parse_lg, parse_lg_patterns, parse_snap_edges, read_graph_file, serialize_lg, write_patterns_lg, Directedness,
    GraphFormat, SnapOptions,
};
pub use pattern::PatternGraph;

/// Dense label id. Ids index into a [`LabelTable`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u16);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Interns label tokens in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelTable {
    tokens: Vec<String>,
    ids: HashMap<String, Label>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table whose tokens are the decimal strings `0..count`.
    pub fn numeric(count: usize) -> Self {
        let mut table = Self::new();
        for i in 0..count {
            table.intern(&i.to_string()).expect("label count fits in u16");
        }
        table
    }

    pub fn intern(&mut self, token: &str) -> Result<Label, GraphError> {
        if let Some(&label) = self.ids.get(token) {
            return Ok(label);
        }
        let id = u16::try_from(self.tokens.len()).map_err(|_| GraphError::TooManyLabels)?;
        let label = Label(id);
        self.tokens.push(token.to_owned());
        self.ids.insert(token.to_owned(), label);
        Ok(label)
    }

    pub fn get(&self, token: &str) -> Option<Label> {
        self.ids.get(token).copied()
    }

    pub fn token(&self, label: Label) -> Option<&str> {
        self.tokens.get(label.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate vertex id {id}")]
    DuplicateVertex { line: usize, id: u64 },
    #[error("line {line}: edge references undeclared vertex {id}")]
    UndeclaredVertex { line: usize, id: u64 },
    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge { line: usize, src: u64, dst: u64 },
    #[error("line {line}: non-integer token {token:?}")]
    InvalidToken { line: usize, token: String },
    #[error("edge list is empty")]
    EmptyEdgeSet,
    #[error("label counts must be at least 1")]
    InvalidLabelCount,
    #[error("vertex id {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex id {0} appears more than once")]
    DuplicateId(usize),
    #[error("more than 65536 distinct labels")]
    TooManyLabels,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

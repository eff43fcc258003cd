//! Turtle subset I/O and the mapping between triples and the typed model.
//!
//! Supported syntax: `@prefix` / `PREFIX` directives, prefixed names,
//! `<absolute IRIs>`, the `a` keyword, `;` predicate lists, `,` object lists,
//! `_:label` blank nodes, integer, decimal and plain string literals, and `#`
//! comments. Collections, `[]` blank-node property lists, language tags,
//! typed literals and exponents are rejected.

use std::collections::BTreeSet;

use crate::term::Triple;
use crate::vocab::{self, PrefixTable};

pub mod iso;
pub mod mapping;
mod parser;
mod serializer;

pub use iso::{find_blank_bijection, isomorphic};
pub use mapping::{graph_to_kb, kb_to_graph, IssueKind, MappingError, MappingIssue};
pub use parser::{parse_turtle, TurtleError, TurtleErrorKind};
pub use serializer::serialize_turtle;

/// A set of triples plus the prefix labels used to read or write them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleGraph {
    pub prefixes: PrefixTable,
    pub triples: BTreeSet<Triple>,
}

impl Default for TripleGraph {
    fn default() -> Self {
        TripleGraph::new()
    }
}

impl TripleGraph {
    /// Empty graph with the default prefix table.
    pub fn new() -> Self {
        TripleGraph {
            prefixes: vocab::default_prefixes(),
            triples: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        self.triples.insert(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

impl Extend<Triple> for TripleGraph {
    fn extend<T: IntoIterator<Item = Triple>>(&mut self, iter: T) {
        self.triples.extend(iter);
    }
}

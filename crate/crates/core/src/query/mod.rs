//! DL-style class expressions and a SPARQL basic-graph-pattern subset,
//! evaluated over a materialized knowledge base.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::KnowledgeBase;
use crate::taxonomy::Taxonomy;
use crate::term::Term;
use crate::vocab::{self, prop, PrefixTable};

pub mod dl;
pub mod sparql;
pub mod store;
pub mod table;

pub use dl::{parse_dl_query, ClassExpr, Facet, FacetOp, Name};
pub use sparql::{parse_sparql, Order, PatternTerm, SparqlQuery, TriplePattern};
pub use store::{TermId, TripleStore};
pub use table::{BindingTable, OutputFormat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix '{prefix}' at {line}:{column}")]
    UnknownPrefix {
        line: usize,
        column: usize,
        prefix: String,
    },
    #[error("unknown class '{0}'")]
    UnknownClass(String),
    #[error("unknown property '{0}'")]
    UnknownProperty(String),
    #[error("selected variable ?{0} does not occur in any pattern")]
    UnboundVariable(String),
}

/// Pre-indexed view of a knowledge base for answering many queries.
///
/// Queries see exactly the triples of [`crate::turtle::kb_to_graph`], so
/// inferred types are only visible after materialization.
#[derive(Debug, Clone)]
pub struct QueryEngine {
    store: TripleStore,
    taxonomy: Taxonomy,
    prefixes: PrefixTable,
}

impl QueryEngine {
    pub fn new(kb: &KnowledgeBase) -> Self {
        QueryEngine {
            store: TripleStore::from_kb(kb),
            taxonomy: kb.taxonomy.clone(),
            prefixes: kb.prefixes.clone(),
        }
    }

    pub fn store(&self) -> &TripleStore {
        &self.store
    }

    pub fn prefixes(&self) -> &PrefixTable {
        &self.prefixes
    }

    pub fn dl(&self, expr: &ClassExpr) -> Result<BTreeSet<Term>, QueryError> {
        dl::evaluate(self, expr)
    }

    pub fn sparql(&self, query: &SparqlQuery) -> BindingTable {
        sparql::evaluate(self, query)
    }

    fn is_class(&self, iri: &str) -> bool {
        self.taxonomy.contains(iri)
            || self.store.id_of_iri(iri).is_some_and(|c| {
                self.store
                    .id_of_iri(vocab::RDF_TYPE)
                    .is_some_and(|ty| !self.store.subjects(ty, c).is_empty())
            })
    }

    fn is_property(&self, iri: &str) -> bool {
        prop::ALL.contains(&iri)
            || self
                .store
                .id_of_iri(iri)
                .is_some_and(|p| self.store.is_predicate(p))
    }

    /// Bare names try the core namespace, then the autism extension.
    fn resolve(&self, name: &Name, known: impl Fn(&str) -> bool) -> Option<String> {
        match name {
            Name::Iri(iri) => known(iri).then(|| iri.clone()),
            Name::Local(local) => [vocab::core(local), vocab::autism(local)]
                .into_iter()
                .find(|iri| known(iri)),
        }
    }

    fn resolve_class(&self, name: &Name) -> Result<String, QueryError> {
        self.resolve(name, |i| self.is_class(i))
            .ok_or_else(|| QueryError::UnknownClass(name.to_string()))
    }

    fn resolve_property(&self, name: &Name) -> Result<String, QueryError> {
        self.resolve(name, |i| self.is_property(i))
            .ok_or_else(|| QueryError::UnknownProperty(name.to_string()))
    }

    /// Individuals never fail to resolve; unknown ones simply match nothing.
    fn resolve_individual(&self, name: &Name) -> Term {
        match name {
            Name::Iri(iri) => Term::iri(iri.clone()),
            Name::Local(local) => {
                let known = |iri: &String| self.store.id_of_iri(iri).is_some();
                let core = vocab::core(local);
                if known(&core) {
                    return Term::iri(core);
                }
                let aut = vocab::autism(local);
                Term::iri(if known(&aut) { aut } else { core })
            }
        }
    }
}

/// One-shot DL evaluation. Build a [`QueryEngine`] to run several queries.
pub fn eval_dl_query(expr: &ClassExpr, kb: &KnowledgeBase) -> Result<BTreeSet<Term>, QueryError> {
    QueryEngine::new(kb).dl(expr)
}

/// One-shot SPARQL evaluation.
pub fn eval_sparql(query: &SparqlQuery, kb: &KnowledgeBase) -> BindingTable {
    QueryEngine::new(kb).sparql(query)
}

/// Maps a byte offset in `text` to a 1-based line and column.
pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

//! A knowledge base for single-subject design (SSD) studies.
//!
//! Studies are annotated in a Turtle subset, validated against the SSD
//! structure rules, classified into design families from their phase
//! sequences, and queried with DL-style class expressions or a SPARQL
//! subset. A deterministic generator produces synthetic corpora for
//! benchmarking.
//!
//! ```
//! use ssdont::{load_kb_str, classifier::materialize_types, query::{parse_dl_query, QueryEngine}};
//!
//! let kb = load_kb_str(r#"
//!     ssd:s1 ssd:hasPhase ssd:p1 , ssd:p2 .
//!     ssd:p1 a ssd:BaselinePhase ; ssd:hasPosition 1 .
//!     ssd:p2 a ssd:SimpleInterventionPhase ; ssd:hasPosition 2 ;
//!         ssd:hasInterventionType aut:weekendInterview .
//! "#).unwrap();
//! let kb = materialize_types(&kb).unwrap();
//! let engine = QueryEngine::new(&kb);
//! let ab = engine.dl(&parse_dl_query("AB_Design").unwrap()).unwrap();
//! assert_eq!(ab.len(), 1);
//! ```

use std::path::Path;

use thiserror::Error;

pub mod bench;
pub mod classifier;
pub mod cli;
pub mod model;
pub mod query;
pub mod synth;
pub mod taxonomy;
pub mod term;
pub mod turtle;
pub mod validate;
pub mod vocab;

pub use classifier::{classify_design, materialize_types, Classification, PhaseSignature};
pub use model::{KnowledgeBase, Study};
pub use taxonomy::Taxonomy;
pub use term::{Term, Triple};
pub use validate::{validate_study, Violation, ViolationCode};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] turtle::TurtleError),
    #[error(transparent)]
    Mapping(#[from] turtle::MappingError),
}

/// Parses Turtle text into a knowledge base over the core taxonomy.
pub fn load_kb_str(text: &str) -> Result<KnowledgeBase, LoadError> {
    let graph = turtle::parse_turtle(text)?;
    Ok(turtle::graph_to_kb(&graph, &Taxonomy::core())?)
}

pub fn load_kb_file(path: impl AsRef<Path>) -> Result<KnowledgeBase, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_kb_str(&text)
}

//! SPARQL basic graph pattern queries, rendered as TSV and JSON.
//!
//!     cargo run --example sparql_queries

use ssdont::bench::BEST_RESULT_QUERY;
use ssdont::classifier::materialize_types;
use ssdont::load_kb_file;
use ssdont::query::{parse_sparql, OutputFormat, QueryEngine};

const AB: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ab_study.ttl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = materialize_types(&load_kb_file(AB)?)?;
    let engine = QueryEngine::new(&kb);

    let q = parse_sparql(BEST_RESULT_QUERY)?;
    println!("{} patterns", q.patterns.len());
    let table = engine.sparql(&q);
    print!("{}", table.render(OutputFormat::Tsv, engine.prefixes()));

    let q = parse_sparql(
        "SELECT ?study ?val WHERE { ?study ssd:hasPhase ?ph . ?res ssd:isResultOfPhase ?ph ; ssd:hasValue ?val } ORDER BY ?val LIMIT 3",
    )?;
    print!("{}", engine.sparql(&q).render(OutputFormat::Json, engine.prefixes()));

    if let Err(e) = parse_sparql("SELECT ?x WHERE { ?s a foo:Bar }") {
        println!("error: {e}");
    }
    Ok(())
}

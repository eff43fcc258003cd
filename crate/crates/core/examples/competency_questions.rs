//! One executable query per competency question, run on the cookbook
//! fixture.
//!
//!     cargo run --example competency_questions

use ssdont::classifier::materialize_types;
use ssdont::query::{parse_dl_query, parse_sparql, OutputFormat, QueryEngine};
use ssdont::load_kb_file;

const COOKBOOK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/cookbook.ttl");

const QUESTIONS: &[(&str, &str, &str)] = &[
    ("What is the type of study cb02?", "sparql", "SELECT ?type WHERE { ssd:cb02 a ?type }"),
    (
        "Which studies concern autism?",
        "dl",
        "SingleSubjectDesign and hasParticipant some (hasCondition value autism)",
    ),
    (
        "Which studies have participants aged 1 to 3 years?",
        "dl",
        "SingleSubjectDesign and hasParticipant some (hasAge some (years some xsd:int[>=1] and years some xsd:int[<=3]))",
    ),
    (
        "In which studies was weekendInterview used?",
        "dl",
        "hasPhase some (hasInterventionType value weekendInterview)",
    ),
    (
        "In which studies was a peer-mediated intervention used (phases)?",
        "dl",
        "SingleSubjectDesign and hasPhase some (hasInterventionType some Peer-mediatedIntervention)",
    ),
    (
        "In which studies was a peer-mediated intervention used (substudies)?",
        "dl",
        "hasMBDItem some (hasPhase some (hasInterventionType some Peer-mediatedIntervention))",
    ),
    ("Which studies are multiple baseline across settings?", "dl", "AcrossSettingMBD"),
    ("Which studies are multiple baseline across subjects?", "dl", "AcrossSubjectMBD"),
    ("Which studies are multiple baseline across outcomes?", "dl", "AcrossOutcomeMBD"),
    (
        "Which settings were used, per study?",
        "sparql",
        "SELECT ?study ?setting WHERE { ?study ssd:hasMBDItem ?item . ?item ssd:hasSetting ?setting } ORDER BY ?setting",
    ),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = materialize_types(&load_kb_file(COOKBOOK)?)?;
    let engine = QueryEngine::new(&kb);
    for (question, lang, text) in QUESTIONS {
        println!("# {question}\n# {text}");
        if *lang == "dl" {
            let hits = engine.dl(&parse_dl_query(text)?)?;
            let names: Vec<&str> = hits.iter().map(|t| t.label()).collect();
            println!("{}\n", names.join(", "));
        } else {
            let table = engine.sparql(&parse_sparql(text)?);
            println!("{}", table.render(OutputFormat::Tsv, engine.prefixes()));
        }
    }
    Ok(())
}
